#include "bellnl/games.hpp"

#include <algorithm>

#include "bellnl/oracle.hpp"

namespace bellnl {

Game::Game(Scenario sc)
    : scenario(sc),
      pi(static_cast<std::size_t>(sc.nx()) * sc.ny(), Rational(1, static_cast<unsigned long>(sc.nx() * sc.ny()))),
      win(sc.cell_count(), 1)
{
}

void check_game(const Game& g)
{
    const Scenario& sc = g.scenario;
    if (g.pi.size() != static_cast<std::size_t>(sc.nx()) * sc.ny())
        throw StructuralError("question distribution has the wrong size");
    if (g.win.size() != sc.cell_count())
        throw StructuralError("winning table has the wrong size");
    Rational total = 0;
    for (const auto& p : g.pi) {
        if (p < 0)
            throw StructuralError("negative question probability");
        total += p;
    }
    if (total != 1)
        throw StructuralError("question probabilities sum to " + rational_to_string(total));
    for (auto w : g.win)
        if (w > 1)
            throw StructuralError("winning predicate must be 0 or 1");
}

namespace {

template <class T> T win_prob(const Game& g, const BehaviorT<T>& p)
{
    if (!(p.scenario() == g.scenario))
        throw ScenarioMismatchError("game and behavior scenarios differ");
    const Scenario& sc = g.scenario;
    T total{};
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y) {
            T s{};
            for (int a = 0; a < sc.na(); ++a)
                for (int b = 0; b < sc.nb(); ++b)
                    if (g.wins(x, y, a, b))
                        s += p(x, y, a, b);
            if constexpr (ScalarTraits<T>::exact)
                total += g.prob(x, y) * s;
            else
                total += to_double(g.prob(x, y)) * s;
        }
    return total;
}

} // namespace

Rational winning_probability(const Game& g, const ExactBehavior& p) { return win_prob(g, p); }
double winning_probability(const Game& g, const FloatBehavior& p) { return win_prob(g, p); }

GameValueReport classical_value(const Game& g, std::size_t collect_limit)
{
    check_game(g);
    const BellExpression e = expression_from_game(g);
    auto r = maximize_over_vertices(g.scenario, e.coefficients, collect_limit);
    GameValueReport rep;
    rep.omega_classical = r.best;
    rep.optimizer_count = r.count;
    rep.optimizers = std::move(r.optimizers);
    rep.optimizers_truncated = r.truncated;
    rep.omega_ns = ns_value(e);
    return rep;
}

Game game_from_zeros(const TableOfZeros& t)
{
    Game g(t.scenario());
    for (auto c : t.cells())
        g.win[c] = 0;
    return g;
}

TableOfZeros losing_cells(const Game& g)
{
    std::vector<std::uint32_t> cells;
    for (std::size_t i = 0; i < g.win.size(); ++i)
        if (g.win[i] == 0)
            cells.push_back(static_cast<std::uint32_t>(i));
    return TableOfZeros(g.scenario, std::move(cells));
}

BellExpression expression_from_game(const Game& g)
{
    const Scenario& sc = g.scenario;
    BellExpression e(sc);
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y)
            for (int a = 0; a < sc.na(); ++a)
                for (int b = 0; b < sc.nb(); ++b)
                    if (g.wins(x, y, a, b))
                        e(x, y, a, b) = g.prob(x, y);
    return e;
}

Game lift_game(const Game& g, int n)
{
    if (n < 1)
        throw InvalidScenarioError("lift needs at least one copy");
    const Scenario& sc = g.scenario;
    const Scenario big(n * sc.nx(), sc.na(), n * sc.ny(), sc.nb());
    Game out(big);
    for (int X = 0; X < big.nx(); ++X)
        for (int Y = 0; Y < big.ny(); ++Y) {
            if (X / sc.nx() != Y / sc.ny())
                continue;
            for (int a = 0; a < sc.na(); ++a)
                for (int b = 0; b < sc.nb(); ++b)
                    out.set_win(X, Y, a, b, g.wins(X % sc.nx(), Y % sc.ny(), a, b));
        }
    return out;
}

Game chsh_game()
{
    Game g(Scenario(2, 2, 2, 2));
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    g.set_win(x, y, a, b, (a ^ b) == (x & y));
    return g;
}

// Outcome o carries bits hi = o >> 1 and lo = o & 1 (1 = -1). Rows have even
// parity, columns odd; the labeling matches the (3,4;3,4) zero table layout.
std::array<int, 3> magic_square_row_bits(int x, int o)
{
    const int hi = (o >> 1) & 1, lo = o & 1;
    switch (x) {
    case 0: return {hi ^ 1, lo ^ 1, hi ^ lo};
    case 1: return {lo, hi, hi ^ lo};
    case 2: return {hi, lo, hi ^ lo};
    default: throw InvalidScenarioError("magic square row out of range");
    }
}

std::array<int, 3> magic_square_column_bits(int y, int o)
{
    const int hi = (o >> 1) & 1, lo = o & 1;
    switch (y) {
    case 0: return {hi ^ 1, lo, hi ^ lo};
    case 1: return {lo ^ 1, hi, hi ^ lo};
    case 2: return {hi, lo, 1 ^ hi ^ lo};
    default: throw InvalidScenarioError("magic square column out of range");
    }
}

Game magic_square_game()
{
    Game g(Scenario(3, 4, 3, 4));
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    g.set_win(x, y, a, b, magic_square_row_bits(x, a)[y] == magic_square_column_bits(y, b)[x]);
    return g;
}

const std::vector<std::string>& pentagram_vertex_names()
{
    static const std::vector<std::string> names{"A", "B", "C", "D", "ab", "ac", "ad", "bc", "bd", "cd"};
    return names;
}

const std::array<int, 4>& pentagram_edge(int e)
{
    static const std::array<std::array<int, 4>, 5> edges{{
        {0, 1, 2, 3},
        {0, 4, 5, 6},
        {4, 1, 7, 8},
        {5, 7, 2, 9},
        {6, 8, 9, 3},
    }};
    if (e < 0 || e >= 5)
        throw InvalidScenarioError("pentagram edge out of range");
    return edges[e];
}

// Edge 0 has product -1, the others +1; the fourth sign is forced.
std::array<int, 4> pentagram_signs(int e, int o)
{
    if (o < 0 || o >= 8)
        throw InvalidScenarioError("pentagram outcome out of range");
    const int b1 = (o >> 2) & 1, b2 = (o >> 1) & 1, b3 = o & 1;
    const int parity = e == 0 ? 1 : 0;
    return {b1, b2, b3, parity ^ b1 ^ b2 ^ b3};
}

Game pentagram_game()
{
    Game g(Scenario(5, 8, 5, 8));
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) {
            int px = -1, py = -1;
            if (x != y) {
                const auto& ex = pentagram_edge(x);
                const auto& ey = pentagram_edge(y);
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        if (ex[i] == ey[j]) {
                            px = i;
                            py = j;
                        }
            }
            for (int a = 0; a < 8; ++a)
                for (int b = 0; b < 8; ++b) {
                    const bool w = x == y ? a == b : pentagram_signs(x, a)[px] == pentagram_signs(y, b)[py];
                    g.set_win(x, y, a, b, w);
                }
        }
    return g;
}

std::vector<std::string> builtin_game_names() { return {"chsh", "magic_square", "pentagram"}; }

Game builtin_game(const std::string& name)
{
    if (name == "chsh")
        return chsh_game();
    if (name == "magic_square")
        return magic_square_game();
    if (name == "pentagram")
        return pentagram_game();
    throw FormatError("unknown builtin game '" + name + "'");
}

} // namespace bellnl
