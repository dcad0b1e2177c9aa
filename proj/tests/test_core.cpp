#include <doctest.h>

#include <random>

#include "bellnl/core.hpp"

using namespace bellnl;

TEST_CASE("cell index round trips in (x, y, a, b) order")
{
    const Scenario sc(3, 4, 2, 5);
    CHECK(sc.cell_count() == 120);
    std::size_t expect = 0;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 5; ++b) {
                    CHECK(sc.index(x, y, a, b) == expect);
                    CHECK(sc.cell(expect) == Cell{x, y, a, b});
                    ++expect;
                }
    CHECK(sc.swapped() == Scenario(2, 5, 3, 4));
    CHECK(sc.to_string() == "(3,4;2,5)");
}

TEST_CASE("scenario counts must be positive")
{
    CHECK_THROWS_AS(Scenario(0, 2, 2, 2), InvalidScenarioError);
    CHECK_THROWS_AS(Scenario(2, 2, 2, -1), InvalidScenarioError);
    CHECK_NOTHROW(Scenario(1, 1, 1, 1));
}

TEST_CASE("nonsignaling dimension")
{
    CHECK(ns_dimension(Scenario(2, 2, 2, 2)) == 8);
    CHECK(ns_dimension(Scenario(3, 4, 3, 4)) == 99);
    CHECK(ns_dimension(Scenario(5, 8, 5, 8)) == 1295);
    // (|X|(|A|-1)+1)(|Y|(|B|-1)+1) - 1
    CHECK(ns_dimension(Scenario(3, 3, 3, 2)) == 7 * 4 - 1);
}

TEST_CASE("strategy count and strategy checks")
{
    CHECK(strategy_count(Scenario(2, 2, 2, 2)) == 16);
    CHECK(strategy_count(Scenario(5, 8, 5, 8)) == (std::uint64_t{1} << 30));
    CHECK(strategy_count(Scenario(40, 8, 40, 8)) == UINT64_MAX);
    const Scenario sc(2, 3, 2, 2);
    CHECK_NOTHROW(check_strategy({{0, 2}, {1, 0}}, sc));
    CHECK_THROWS_AS(check_strategy({{0, 3}, {1, 0}}, sc), InvalidStrategyError);
    CHECK_THROWS_AS(check_strategy({{0}, {1, 0}}, sc), InvalidStrategyError);
}

TEST_CASE("induced behavior has one 1 per setting block")
{
    const Scenario sc(3, 2, 2, 3);
    const auto p = induced_behavior<Rational>({{1, 0, 1}, {2, 0}}, sc);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 2; ++y) {
            Rational s = 0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 3; ++b)
                    s += p(x, y, a, b);
            CHECK(s == 1);
        }
    CHECK(p(0, 0, 1, 2) == 1);
    CHECK(validate_behavior(p, 0.0).valid());
}

TEST_CASE("validation finds each kind of violation")
{
    CHECK(validate_behavior(pr_box(), 0.0).valid());
    CHECK(validate_behavior(uniform_behavior<double>(Scenario(3, 3, 2, 4)), 1e-12).valid());

    auto neg = pr_box();
    neg(0, 0, 0, 0) = Rational(3, 4);
    neg(0, 0, 1, 1) = Rational(1, 2);
    neg(0, 0, 0, 1) = Rational(-1, 4);
    const auto r = validate_behavior(neg, 0.0);
    CHECK_FALSE(r.valid());
    CHECK(r.find(Violation::Kind::negative) != nullptr);

    auto unnorm = to_float(pr_box());
    unnorm(1, 1, 0, 1) += 0.1;
    CHECK(validate_behavior(unnorm, 1e-9).find(Violation::Kind::normalization) != nullptr);
    CHECK(validate_behavior(unnorm, 0.2).valid());

    // Moving weight inside one block keeps normalization but signals.
    auto sig = pr_box();
    sig(0, 0, 0, 0) = 1;
    sig(0, 0, 1, 1) = 0;
    const auto rs = validate_behavior(sig, 0.0);
    CHECK(rs.find(Violation::Kind::signaling) != nullptr);
    CHECK(rs.find(Violation::Kind::normalization) == nullptr);
}

TEST_CASE("mixing stays nonsignaling and rejects mismatched scenarios")
{
    const auto d = induced_behavior<Rational>({{0, 1}, {1, 1}}, Scenario(2, 2, 2, 2));
    const auto m = mix(Rational(1, 3), pr_box(), d);
    CHECK(validate_behavior(m, 0.0).valid());
    CHECK(m(0, 0, 0, 0) == Rational(1, 6));
    CHECK_THROWS_AS(mix(Rational(1, 2), pr_box(), uniform_behavior<Rational>(Scenario(2, 3, 2, 2))),
                    ScenarioMismatchError);
    CHECK_THROWS_AS(ExactBehavior(Scenario(2, 2, 2, 2), std::vector<Rational>(15)), IncompleteTableError);
}

TEST_CASE("rational text format")
{
    CHECK(rational_to_string(Rational(0)) == "0/1");
    CHECK(rational_to_string(parse_rational("-6/16")) == "-3/8");
    CHECK(parse_rational("4/6") == Rational(2, 3));
    CHECK(parse_rational("-7") == -7);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK(rational_from_double(0.375) == Rational(3, 8));
    CHECK(nearest_rational(0.33333333, 100) == Rational(1, 3));
}
