#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bellnl/core.hpp"
#include "bellnl/polytope.hpp"
#include "bellnl/quantum.hpp"
#include "bellnl/sdp.hpp"
#include "bellnl/table.hpp"

namespace bellnl {

enum class NpaLevel { one, one_plus_ab };

std::string to_string(NpaLevel l);
/// Accepts "1" and "1+AB" (case-insensitive); throws FormatError otherwise.
NpaLevel parse_npa_level(const std::string& s);

/// Monomial: optional Alice projector times optional Bob projector. The last
/// outcome of every setting is dropped, it equals 1 minus the others.
struct Monomial {
    std::optional<std::pair<int, int>> alice;  ///< (x, a), a < |A|-1
    std::optional<std::pair<int, int>> bob;    ///< (y, b), b < |B|-1
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

std::string to_string(const Monomial& m);

/// Moment matrix layout: Gamma(i,j) = <m_i^dag m_j>. Entries with the same
/// operator word (up to reversal, the matrix is real symmetric) share a
/// class; classes whose word reduces to 1 or 0 are constants.
struct MomentStructure {
    Scenario scenario;
    NpaLevel level = NpaLevel::one;
    std::vector<Monomial> monomials;          ///< monomials[0] is the identity
    std::vector<int> entry_class;             ///< n * n, symmetric
    std::vector<std::optional<double>> class_constant;
    std::vector<std::pair<int, int>> class_entry;  ///< a representative (i <= j)

    int size() const { return static_cast<int>(monomials.size()); }
    int cls(int i, int j) const { return entry_class[static_cast<std::size_t>(i) * monomials.size() + j]; }

    /// Index of the monomial E_{a|x} (a < |A|-1), F_{b|y}, or their product.
    int alice_index(int x, int a) const;
    int bob_index(int y, int b) const;
};

MomentStructure build_moment_structure(const Scenario& sc, NpaLevel level);

/// Structural equalities: every entry equals its class representative and
/// constant classes take their value.
SdpProblem moment_problem(const MomentStructure& ms);

/// p(a,b|x,y) as constant + sum of Gamma entries, expanding dropped outcomes
/// by completeness.
std::pair<double, std::vector<EntryTerm>> probability_terms(const MomentStructure& ms, int x, int y, int a, int b);

struct NpaFeasibility {
    SdpVerdict verdict = SdpVerdict::indeterminate;
    NpaLevel level = NpaLevel::one;  ///< level of the returned verdict
    double lambda_star = 0.0;        ///< -infinity when the equalities alone are inconsistent
    bool affine_inconsistent = false;
    std::size_t iterations = 0;
    RealMatrix witness;              ///< set for feasible verdicts
};

/// Quantum feasibility of the zero set. With escalate, an indeterminate
/// level-one answer is retried at 1+AB.
NpaFeasibility npa_feasible(const TableOfZeros& t, NpaLevel level = NpaLevel::one, bool escalate = true);

struct NpaBound {
    double value = 0.0;       ///< upper bound on the quantum value
    double attained = 0.0;    ///< objective at the returned moment matrix
    bool reliable = false;    ///< solver converged
    std::size_t iterations = 0;
    NpaLevel level = NpaLevel::one;
};

NpaBound npa_upper_bound(const BellExpression& e, NpaLevel level = NpaLevel::one);

/// Real part of <psi| m_i^dag m_j |psi> for an explicit strategy.
RealMatrix moment_matrix(const MomentStructure& ms, const QuantumStrategy& s);

/// Largest violation of the structure's equalities by Gamma.
double structural_residual(const MomentStructure& ms, const RealMatrix& gamma);

} // namespace bellnl
