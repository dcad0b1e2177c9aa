#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellnl/core.hpp"
#include "bellnl/polytope.hpp"
#include "bellnl/table.hpp"

namespace bellnl {

/// Nonlocal game: question distribution pi(x,y) and 0/1 winning predicate W.
struct Game {
    Scenario scenario;
    std::vector<Rational> pi;        ///< x * |Y| + y
    std::vector<std::uint8_t> win;   ///< (x,y,a,b) order, 1 = win

    Game() = default;
    /// Uniform pi and W identically 1.
    explicit Game(Scenario sc);

    Rational& prob(int x, int y) { return pi[static_cast<std::size_t>(x) * scenario.ny() + y]; }
    const Rational& prob(int x, int y) const { return pi[static_cast<std::size_t>(x) * scenario.ny() + y]; }
    bool wins(int x, int y, int a, int b) const { return win[scenario.index(x, y, a, b)] != 0; }
    void set_win(int x, int y, int a, int b, bool w) { win[scenario.index(x, y, a, b)] = w ? 1 : 0; }
};

/// Throws StructuralError unless pi is a distribution and the tables match.
void check_game(const Game& g);

Rational winning_probability(const Game& g, const ExactBehavior& p);
double winning_probability(const Game& g, const FloatBehavior& p);

struct GameValueReport {
    Rational omega_classical;
    std::uint64_t optimizer_count = 0;
    std::vector<DeterministicStrategy> optimizers;  ///< lexicographic
    bool optimizers_truncated = false;
    Rational omega_ns;
    std::optional<double> quantum_upper_bound;
};

/// Exact classical value with every optimal deterministic strategy (up to
/// collect_limit), and the nonsignaling value.
GameValueReport classical_value(const Game& g, std::size_t collect_limit = std::size_t{1} << 22);

/// Uniform pi, W = 0 exactly on the zeros.
Game game_from_zeros(const TableOfZeros& t);
/// Cells where W = 0.
TableOfZeros losing_cells(const Game& g);

/// Coefficients pi(x,y) W(a,b,x,y), so tr(I^T p) is the winning probability.
BellExpression expression_from_game(const Game& g);

/// n copies of the question sets in copy-major order; a question pair from
/// different copies is always won.
Game lift_game(const Game& g, int n);

/// "chsh", "magic_square" or "pentagram"; throws FormatError otherwise.
Game builtin_game(const std::string& name);
std::vector<std::string> builtin_game_names();

Game chsh_game();
Game magic_square_game();
Game pentagram_game();

/// Pentagram vertex labels in the order A B C D ab ac ad bc bd cd.
const std::vector<std::string>& pentagram_vertex_names();
/// Vertex ids (into the list above) of edge e, in output-bit order.
const std::array<int, 4>& pentagram_edge(int e);
/// Sign bits (1 = -1) of the four edge vertices for outcome o of edge e.
std::array<int, 4> pentagram_signs(int e, int o);

/// Sign bits (1 = -1) of the three cells for magic-square row x (alice) or
/// column y (bob) and outcome o.
std::array<int, 3> magic_square_row_bits(int x, int o);
std::array<int, 3> magic_square_column_bits(int y, int o);

} // namespace bellnl
