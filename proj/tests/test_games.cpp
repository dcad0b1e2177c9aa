#include <doctest.h>

#include "bellnl/games.hpp"
#include "oracles.hpp"

using namespace bellnl;

TEST_CASE("CHSH classical value and optimizers")
{
    const Game g = chsh_game();
    const auto r = classical_value(g);
    const auto o = oracle::classical_value(g);
    CHECK(r.omega_classical == Rational(3, 4));
    CHECK(r.omega_classical == o.best);
    CHECK(r.optimizer_count == 8);
    CHECK(r.optimizers == o.optimizers);
    CHECK(r.omega_ns == 1);
}

TEST_CASE("magic square classical value and optimizers")
{
    const Game g = magic_square_game();
    CHECK(g.scenario == Scenario(3, 4, 3, 4));
    const auto r = classical_value(g);
    const auto o = oracle::classical_value(g);
    CHECK(r.omega_classical == Rational(8, 9));
    CHECK(o.best == Rational(8, 9));
    CHECK(r.optimizer_count == 144);
    CHECK(o.count == 144);
    CHECK(r.optimizers == o.optimizers);
    CHECK(r.omega_ns == 1);
}

TEST_CASE("magic square rows have even parity and columns odd")
{
    for (int k = 0; k < 3; ++k)
        for (int o = 0; o < 4; ++o) {
            const auto r = magic_square_row_bits(k, o);
            const auto c = magic_square_column_bits(k, o);
            CHECK((r[0] ^ r[1] ^ r[2]) == 0);
            CHECK((c[0] ^ c[1] ^ c[2]) == 1);
        }
}

TEST_CASE("pentagram edges and sign parities")
{
    const auto& names = pentagram_vertex_names();
    REQUIRE(names.size() == 10);
    std::vector<int> degree(10, 0);
    for (int e = 0; e < 5; ++e) {
        bool abcd = true;
        for (int v : pentagram_edge(e)) {
            ++degree[v];
            abcd = abcd && names[v].size() == 1;
        }
        CHECK(abcd == (e == 0));
        for (int o = 0; o < 8; ++o) {
            const auto s = pentagram_signs(e, o);
            CHECK((s[0] ^ s[1] ^ s[2] ^ s[3]) == (abcd ? 1 : 0));
        }
    }
    // Every vertex lies on exactly two edges, and every two edges meet once.
    for (int d : degree)
        CHECK(d == 2);
    for (int e = 0; e < 5; ++e)
        for (int f = e + 1; f < 5; ++f) {
            int shared = 0;
            for (int v : pentagram_edge(e))
                for (int w : pentagram_edge(f))
                    shared += v == w;
            CHECK(shared == 1);
        }
    const Game g = pentagram_game();
    CHECK(g.scenario == Scenario(5, 8, 5, 8));
    CHECK_NOTHROW(check_game(g));
}

TEST_CASE("lifted CHSH against brute force")
{
    for (int n : {1, 2}) {
        const Game g = lift_game(chsh_game(), n);
        CHECK(g.scenario == Scenario(2 * n, 2, 2 * n, 2));
        const auto r = classical_value(g);
        const auto o = oracle::classical_value(g);
        CHECK(r.omega_classical == o.best);
        CHECK(r.optimizer_count == o.count);
        CHECK(r.optimizers == o.optimizers);
    }
    CHECK_THROWS_AS(lift_game(chsh_game(), 0), InvalidScenarioError);
}

TEST_CASE("winning probability and the game expression agree")
{
    const Game g = magic_square_game();
    const auto e = expression_from_game(g);
    const DeterministicStrategy s{{0, 1, 2}, {3, 2, 1}};
    const auto p = induced_behavior<Rational>(s, g.scenario);
    CHECK(winning_probability(g, p) == evaluate(e, p));
    CHECK(winning_probability(chsh_game(), pr_box()) == 1);
    CHECK(winning_probability(chsh_game(), to_float(pr_box())) == doctest::Approx(1.0));
}

TEST_CASE("zeros to game and back")
{
    const auto t = TableOfZeros::from_xayb(Scenario(2, 2, 2, 2), {{0, 0, 1, 1}, {1, 0, 1, 0}, {1, 1, 0, 0}});
    const Game g = game_from_zeros(t);
    CHECK(losing_cells(g) == t);
    CHECK(g.prob(1, 1) == Rational(1, 4));
    CHECK(classical_value(g).omega_classical == 1);
}

TEST_CASE("malformed games and unknown builtins")
{
    Game g = chsh_game();
    g.prob(0, 0) = Rational(1, 2);
    CHECK_THROWS_AS(check_game(g), StructuralError);
    Game h = chsh_game();
    h.prob(0, 0) = Rational(-1, 4);
    h.prob(0, 1) = Rational(3, 4);
    CHECK_THROWS_AS(check_game(h), StructuralError);
    Game w = chsh_game();
    w.win.pop_back();
    CHECK_THROWS_AS(check_game(w), StructuralError);
    CHECK_THROWS_AS(builtin_game("tetragram"), FormatError);
    CHECK(builtin_game("chsh").win == chsh_game().win);
    CHECK(builtin_game_names().size() == 3);
}

TEST_CASE("optimizer collection can be truncated")
{
    const auto r = classical_value(magic_square_game(), 10);
    CHECK(r.optimizer_count == 144);
    CHECK(r.optimizers.size() == 10);
    CHECK(r.optimizers_truncated);
}
