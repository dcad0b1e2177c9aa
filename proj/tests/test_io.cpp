#include <doctest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <limits>
#include <sstream>

#include "bellnl/io.hpp"

using namespace bellnl;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string message_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const FormatError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("zero-table fixtures round trip byte for byte")
{
    for (const auto& entry : std::filesystem::directory_iterator(BELLNL_FIXTURE_DIR)) {
        const std::string text = slurp(entry.path().string());
        CHECK(serialize(zeros_to_json(zeros_from_json(parse_json_text(text)))) == text);
    }
}

TEST_CASE("scenario text forms")
{
    CHECK(parse_scenario("(3,3;3,2)") == Scenario(3, 3, 3, 2));
    CHECK(parse_scenario("3 4 3 4") == Scenario(3, 4, 3, 4));
    CHECK(parse_scenario("2,2,2,2") == Scenario(2, 2, 2, 2));
    CHECK_THROWS_AS(parse_scenario("(3,3;3)"), FormatError);
    CHECK(scenario_from_json(scenario_to_json(Scenario(5, 8, 5, 8))) == Scenario(5, 8, 5, 8));
    CHECK_THROWS_AS(scenario_from_json(Json::array({1, 2, 3})), FormatError);
}

TEST_CASE("behaviors round trip in both modes")
{
    const auto p = mix(Rational(1, 3), pr_box(), uniform_behavior<Rational>(Scenario(2, 2, 2, 2)));
    const Json j = behavior_to_json(p);
    CHECK(j["mode"] == "rational");
    CHECK(j["table"][1] == "1/6");
    const auto back = behavior_from_json(parse_json_text(serialize(j)));
    REQUIRE(std::holds_alternative<ExactBehavior>(back));
    CHECK(std::get<ExactBehavior>(back).table() == p.table());

    const auto f = to_float(p);
    const auto fb = behavior_from_json(parse_json_text(serialize(behavior_to_json(f))));
    REQUIRE(std::holds_alternative<FloatBehavior>(fb));
    CHECK(std::get<FloatBehavior>(fb).table() == f.table());
}

TEST_CASE("expressions keep their mode and bounds")
{
    BellExpression e = ch_expression();
    e.local_bound = Rational(0);
    e.ns_bound = Rational(1, 2);
    e.quantum_bound = 0.2071;
    const auto back = expression_from_json(parse_json_text(serialize(expression_to_json(e))));
    CHECK(back.coefficients == e.coefficients);
    CHECK(back.exact);
    CHECK(back.local_bound == e.local_bound);
    CHECK(back.ns_bound == e.ns_bound);
    CHECK(back.quantum_bound == e.quantum_bound);

    BellExpression f(Scenario(1, 2, 1, 2));
    f.exact = false;
    f.coefficients[0] = rational_from_double(0.1);
    const auto fb = expression_from_json(expression_to_json(f));
    CHECK_FALSE(fb.exact);
    CHECK(fb.coefficients[0] == rational_from_double(0.1));
}

TEST_CASE("games: explicit tables, builtin names, sparse and default pi")
{
    const Game g = magic_square_game();
    const Game back = game_from_json(parse_json_text(serialize(game_to_json(g))));
    CHECK(back.win == g.win);
    CHECK(back.pi == g.pi);

    const Game named = game_from_json(Json{{"scenario", {2, 2, 2, 2}}, {"winning", "chsh"}});
    CHECK(named.win == chsh_game().win);
    CHECK(named.prob(1, 0) == Rational(1, 4));

    const Game sparse =
        game_from_json(Json{{"scenario", {2, 2, 2, 2}}, {"winning", "chsh"}, {"pi", {{"0,0", "1/2"}, {"1,1", "1/2"}}}});
    CHECK(sparse.prob(0, 1) == 0);
    CHECK(sparse.prob(1, 1) == Rational(1, 2));

    CHECK_THROWS_AS(game_from_json(Json{{"scenario", {2, 2, 2, 2}}, {"winning", "chsh"}, {"pi", {{"0,0", "1/2"}}}}),
                    FormatError);
    CHECK_THROWS_AS(game_from_json(Json{{"scenario", {3, 4, 3, 4}}, {"winning", "chsh"}}), FormatError);
    CHECK_THROWS_AS(game_from_json(Json{{"scenario", {2, 2, 2, 2}}, {"winning", "nope"}}), FormatError);
}

TEST_CASE("errors name the offending cell")
{
    const std::string z = message_of([] {
        zeros_from_json(parse_json_text(R"({"scenario":[2,2,2,2],"cells":[[0,0,1,1],[1,2,0,0]]})"));
    });
    CHECK(z.find("cell 1") != std::string::npos);
    CHECK(z.find("[1,2,0,0]") != std::string::npos);

    const std::string b = message_of([] {
        behavior_from_json(parse_json_text(
            R"({"scenario":[1,2,1,2],"mode":"rational","table":["1/4","1/4","x","1/4"]})"));
    });
    CHECK_FALSE(b.empty());
    CHECK(b.find("x=0") != std::string::npos);

    CHECK_THROWS_AS(behavior_from_json(parse_json_text(R"({"scenario":[1,2,1,2],"mode":"rational","table":[]})")),
                    FormatError);
    CHECK_THROWS_AS(parse_json_text("{not json"), FormatError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/zeros.json"), FormatError);
}

TEST_CASE("quantum strategies round trip")
{
    const auto s = magic_square_strategy();
    const auto back = strategy_from_json(parse_json_text(serialize(strategy_to_json(s))));
    CHECK((back.psi.amplitudes() - s.psi.amplitudes()).norm() < 1e-15);
    const auto p = behavior_from_strategy(s), q = behavior_from_strategy(back);
    for (std::size_t i = 0; i < p.table().size(); ++i)
        CHECK(std::abs(p[i] - q[i]) < 1e-12);
}

TEST_CASE("number formats")
{
    CHECK(decimal(0.25) == "0.25");
    CHECK(exact_number(Rational(2, 3))["exact"] == "2/3");
    CHECK(serialize(Json{{"a", 1}}) == "{\n  \"a\": 1\n}\n");
    NpaFeasibility r;
    r.verdict = SdpVerdict::infeasible_with_margin;
    r.affine_inconsistent = true;
    r.lambda_star = -std::numeric_limits<double>::infinity();
    const Json j = npa_report_to_json(r, false);
    CHECK(j["lambda_star"] == "-inf");
    CHECK(j["affine_inconsistent"] == true);
}
