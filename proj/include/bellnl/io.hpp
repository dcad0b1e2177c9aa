#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "bellnl/core.hpp"
#include "bellnl/games.hpp"
#include "bellnl/npa.hpp"
#include "bellnl/polytope.hpp"
#include "bellnl/quantum.hpp"
#include "bellnl/table.hpp"

namespace bellnl {

/// Key order is kept so that parse -> serialize is byte-identical.
using Json = nlohmann::ordered_json;

/// Behavior in its numeric mode.
using AnyBehavior = std::variant<ExactBehavior, FloatBehavior>;

Json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const Json& j);
/// Accepts "(3,3;3,2)", "3,3,3,2" or "3 3 3 2".
Scenario parse_scenario(const std::string& text);

Json behavior_to_json(const ExactBehavior& p);
Json behavior_to_json(const FloatBehavior& p);
Json behavior_to_json(const AnyBehavior& p);
AnyBehavior behavior_from_json(const Json& j);

Json expression_to_json(const BellExpression& e);
BellExpression expression_from_json(const Json& j);

/// `winning` is an explicit 0/1 table or the name of a builtin game; `pi`
/// is a full array, or an object of "x,y" keys with omitted entries 0, or
/// absent for the uniform distribution.
Json game_to_json(const Game& g);
Game game_from_json(const Json& j);

Json zeros_to_json(const TableOfZeros& t);
TableOfZeros zeros_from_json(const Json& j);

Json strategy_to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(const Json& j);

Json npa_report_to_json(const NpaFeasibility& r, bool with_witness);

/// Decimal with 12 significant digits.
std::string decimal(double v);
/// {"exact": "p/q", "decimal": "..."}.
Json exact_number(const Rational& q);

/// Two-space indentation, trailing newline.
std::string serialize(const Json& j);
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace bellnl
