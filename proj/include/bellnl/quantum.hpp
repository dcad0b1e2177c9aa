#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellnl/core.hpp"
#include "bellnl/matrix.hpp"
#include "bellnl/polytope.hpp"

namespace bellnl {

/// Pure state of the joint system, index i * dB + j for |i>|j>.
class StateVector {
public:
    StateVector() = default;
    /// Throws StructuralError unless |amp| = 1 within 1e-12.
    explicit StateVector(ComplexVector amp);

    Eigen::Index dimension() const { return amp_.size(); }
    const ComplexVector& amplitudes() const { return amp_; }

private:
    ComplexVector amp_;
};

/// (1/sqrt d) sum_i |ii>.
StateVector maximally_entangled(int d);

/// Tensor product of Pauli factors, e.g. "XZZ"; 'I', 'X', 'Y', 'Z' allowed.
ComplexMatrix pauli_string(const std::string& s);

/// Projective measurement: outcome k has projector projectors[k] and the sign
/// tuple labels[k] (bit 1 = eigenvalue -1) of the observables it came from.
struct JointMeasurement {
    std::vector<std::vector<int>> labels;
    std::vector<ComplexMatrix> projectors;

    Eigen::Index dimension() const { return projectors.empty() ? 0 : projectors.front().rows(); }
    /// Largest deviation from completeness, idempotence or orthogonality.
    double defect() const;
};

/// Joint spectral projectors of commuting +-1 observables; only nonzero
/// products are kept, ordered by their sign tuples. Throws CommutationError
/// naming the first non-commuting pair, StructuralError for non-involutions.
JointMeasurement joint_projectors(const std::vector<ComplexMatrix>& observables, double tol = 1e-10);

/// Reorders a joint measurement so outcome k carries the sign tuple
/// labels[k]; tuples it cannot attain get zero projectors.
JointMeasurement relabel(const JointMeasurement& m, const std::vector<std::vector<int>>& labels);

struct QuantumStrategy {
    StateVector psi;
    std::vector<JointMeasurement> alice;  ///< one per setting
    std::vector<JointMeasurement> bob;

    Scenario scenario() const;
};

/// p(a,b|x,y) = <psi| Pi_a|x (x) Pi_b|y |psi>.
FloatBehavior behavior_from_strategy(const StateVector& psi, const std::vector<JointMeasurement>& alice,
                                     const std::vector<JointMeasurement>& bob);
FloatBehavior behavior_from_strategy(const QuantumStrategy& s);

/// Three-qubit observables on the maximally entangled state of two 8-level
/// systems; both parties measure the same edge observables.
QuantumStrategy pentagram_strategy();
/// Two-qubit Pauli square on the maximally entangled state of two 4-level systems.
QuantumStrategy magic_square_strategy();

/// Snaps every entry to a dyadic rational with denominator at most
/// 2^max_log_den when within tol; throws RationalizationError otherwise.
ExactBehavior snap_dyadic(const FloatBehavior& p, int max_log_den = 10, double tol = 1e-9);

struct SeesawOptions {
    int restarts = 20;
    std::uint64_t seed = 1;
    int max_iterations = 2000;
    double tolerance = 1e-12;
    /// Cells whose probability is pushed to zero: the objective is charged
    /// penalty * p on each, and the final state is projected orthogonally to
    /// their product projectors when that is possible.
    std::vector<std::uint32_t> zero_cells;
    double penalty = 1e3;
};

struct SeesawResult {
    double value = 0.0;        ///< expression value of the returned behavior (penalty excluded)
    double penalized = 0.0;    ///< optimized objective including the penalty
    QuantumStrategy strategy;
    FloatBehavior behavior;
    int iterations = 0;
    int best_restart = 0;
    bool monotone = true;      ///< no iteration decreased the objective by more than 1e-12
};

/// Alternates the state (top eigenvector of the Bell operator) with each
/// party's projective measurements (pairwise outcome splits by the positive
/// eigenspace of the effective operator difference). Restarts run in parallel.
SeesawResult seesaw_optimize(const BellExpression& e, int dA, int dB, const SeesawOptions& opt = {});

/// Hardy's program in (2,2;2,2): maximize p(0,0|0,0) with the given zeros.
SeesawResult hardy_seesaw(const std::vector<std::uint32_t>& zero_cells, int restarts = 40, std::uint64_t seed = 7);

} // namespace bellnl
