#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bellnl/core.hpp"
#include "bellnl/oracle.hpp"

namespace bellnl {

/// Linear functional I(a,b,x,y) on behaviors, tr(I^T p) = sum_cells I * p.
/// Coefficients are stored exactly; float expressions keep the exact binary
/// value of each double and are tagged so files round-trip in float mode.
struct BellExpression {
    Scenario scenario;
    std::vector<Rational> coefficients;  ///< (x,y,a,b) order
    bool exact = true;
    std::optional<Rational> local_bound;
    std::optional<double> quantum_bound;
    std::optional<Rational> ns_bound;

    BellExpression() = default;
    explicit BellExpression(Scenario sc) : scenario(sc), coefficients(sc.cell_count(), Rational(0)) {}
    BellExpression(Scenario sc, std::vector<Rational> coef);

    Rational& operator()(int x, int y, int a, int b) { return coefficients[scenario.index(x, y, a, b)]; }
    const Rational& operator()(int x, int y, int a, int b) const
    {
        return coefficients[scenario.index(x, y, a, b)];
    }
    std::vector<double> float_coefficients() const;
};

Rational evaluate(const BellExpression& e, const ExactBehavior& p);
double evaluate(const BellExpression& e, const FloatBehavior& p);

/// The CH form of the CHSH class: local 0, NS 1/2.
BellExpression ch_expression();
/// CHSH in correlator form, sum of E00 + E01 + E10 - E11, local 2, quantum 2 sqrt 2, NS 4.
BellExpression chsh_correlator_expression();

template <class T> struct LocalContentResultT {
    T q_local{};
    T q_nonlocal{};
    std::vector<std::pair<DeterministicStrategy, T>> weights;  ///< positive weights only
    BellExpression dual;  ///< I >= 0, I . P >= 1 on every vertex, tr(I^T p) = q_local
    std::size_t columns = 0;  ///< vertex columns the LP ever held
    std::size_t iterations = 0;
};
using LocalContentResult = LocalContentResultT<Rational>;
using FloatLocalContentResult = LocalContentResultT<double>;

struct LocalContentOptions {
    std::uint64_t vertex_cap = std::uint64_t{1} << 31;
    /// Use every admissible vertex as a column when there are at most this many;
    /// otherwise generate columns from the best-response oracle.
    std::uint64_t full_column_limit = 5000;
    double zero_tol = 1e-12;  ///< float mode: entries at or below are treated as zeros
};

/// Largest local weight in a decomposition p = q P_L + (1 - q) P_NL.
///
/// If no vertex avoids the zeros of p the content is 0 and the dual is the
/// indicator of the zero set, which is supported exactly where p vanishes.
LocalContentResult local_content(const ExactBehavior& p, const LocalContentOptions& opt = {});
FloatLocalContentResult local_content(const FloatBehavior& p, const LocalContentOptions& opt = {});

/// min over vertices of tr(I^T P), via the oracle.
Rational min_vertex_value(const BellExpression& e);
/// max over vertices of tr(I^T P), via the oracle.
Rational local_value(const BellExpression& e);

/// Exact maximum over the nonsignaling polytope (half-space LP).
Rational ns_value(const BellExpression& e);

/// Produces the candidate vertices for saturation analysis when full
/// enumeration is too large.
using VertexGenerator = std::function<std::vector<DeterministicStrategy>()>;

struct SaturationResult {
    std::uint64_t count = 0;
    std::size_t linear_rank = 0;
    std::size_t affine_rank = 0;  ///< dimension of the affine hull
    std::vector<DeterministicStrategy> vertices;
};

/// Deterministic behaviors with tr(I^T P) = bound and the exact linear rank of
/// their behavior vectors.
SaturationResult saturating_vertices(const BellExpression& e, const Rational& bound,
                                     const VertexGenerator& generator = {},
                                     std::uint64_t cap = std::uint64_t{1} << 31);

/// Linear rank of the 0/1 behavior vectors of the given strategies.
std::size_t vertex_rank(const Scenario& sc, const std::vector<DeterministicStrategy>& vs);
/// Affine rank of the same points (linear rank of differences from the first).
std::size_t vertex_affine_rank(const Scenario& sc, const std::vector<DeterministicStrategy>& vs);

struct TightnessReport {
    bool tight = false;
    std::uint64_t saturating = 0;
    std::size_t linear_rank = 0;
    std::size_t affine_rank = 0;
    long long required_rank = 0;  ///< ns_dimension of the scenario
};

/// A valid inequality is a facet when its saturating vertices have linear
/// rank equal to the polytope dimension (they then span an affine hyperplane
/// of the affine hull, which avoids the origin).
TightnessReport tightness_verdict(const BellExpression& e, const Rational& local_bound,
                                  const VertexGenerator& generator = {});

/// Exact rational behavior whose Collins-Gisin coordinates are those of p
/// rounded to multiples of 2^-bits. Throws RationalizationError if the result
/// is not a valid behavior.
ExactBehavior rationalize_collins_gisin(const FloatBehavior& p, int bits = 40);

} // namespace bellnl
