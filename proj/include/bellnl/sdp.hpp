#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bellnl/matrix.hpp"

namespace bellnl {

/// One coefficient on the symmetric entry G(i,j) = G(j,i); i <= j is not required.
struct EntryTerm {
    int i = 0;
    int j = 0;
    double coef = 1.0;
};

struct AffineConstraint {
    std::vector<EntryTerm> terms;
    double rhs = 0.0;
};

/// Symmetric n x n matrix variable G with affine equality constraints and an
/// optional linear objective over its entries.
struct SdpProblem {
    int n = 0;
    std::vector<AffineConstraint> constraints;
    std::vector<EntryTerm> objective;
};

enum class SdpVerdict { feasible, infeasible_with_margin, indeterminate, infeasible_affine };

std::string to_string(SdpVerdict v);

struct SdpFeasibility {
    SdpVerdict verdict = SdpVerdict::indeterminate;
    double lambda_star = 0.0;  ///< max over the affine set of the minimum eigenvalue of G
    RealMatrix gamma;          ///< point attaining lambda_star (empty when the affine set is empty)
    std::size_t iterations = 0;
    bool converged = false;
};

struct SdpOptimum {
    double value = 0.0;        ///< objective at the returned feasible point
    double upper_bound = 0.0;  ///< primal objective; bounds the optimum from above at convergence
    RealMatrix gamma;
    std::size_t iterations = 0;
    bool converged = false;
};

constexpr double kFeasibleLambda = -1e-7;
constexpr double kInfeasibleLambda = -1e-5;

SdpVerdict classify_lambda(double lambda_star);

/// Maximizes lambda subject to G - lambda I >= 0 and the affine constraints.
/// lambda is capped at 1 to keep the problem bounded.
SdpFeasibility sdp_max_min_eigenvalue(const SdpProblem& prob);

/// Maximizes the objective subject to G >= 0. Throws UnboundedError when the
/// iterates diverge and StructuralError when the affine set is empty.
SdpOptimum sdp_maximize(const SdpProblem& prob);

/// Parametrization G = F0 + sum_k z_k F_k of the affine solution set.
struct AffineParametrization {
    bool consistent = true;
    RealMatrix f0;
    std::vector<std::vector<EntryTerm>> generators;  ///< upper-triangle entries of each F_k
};

AffineParametrization parametrize(const SdpProblem& prob);

} // namespace bellnl
