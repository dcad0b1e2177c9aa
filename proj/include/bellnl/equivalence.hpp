#pragma once

#include <optional>
#include <variant>

#include "bellnl/core.hpp"
#include "bellnl/table.hpp"

namespace bellnl {

/// The four extreme-nonlocality properties of one behavior, each decided
/// independently so that their agreement is a check rather than an assumption.
struct EquivalenceReport {
    TableOfZeros zeros;
    bool avn = false;  ///< no deterministic assignment avoids the zeros
    bool pt = false;   ///< the game losing exactly on the zeros has omega_C < 1 and p wins it surely
    bool fn = false;   ///< nonlocal content 1
    bool fns = false;  ///< local content 0 with a dual supported on the zeros, positive on every vertex
    Rational omega_classical;
    double omega_quantum = 0.0;
    double q_nonlocal = 0.0;
    std::optional<Rational> q_nonlocal_exact;  ///< set for exact behaviors

    bool consistent() const { return avn == pt && pt == fn && fn == fns; }
};

/// Float behaviors treat entries at or below tol as zeros and compare
/// probabilities with tol.
EquivalenceReport verify_equivalence(const std::variant<ExactBehavior, FloatBehavior>& p, double tol = 1e-9);

} // namespace bellnl
