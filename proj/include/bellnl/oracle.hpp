#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bellnl/core.hpp"

namespace bellnl {

/// Result of maximizing sum_{x,y} w(x,y,a_x,b_y) over deterministic strategies.
template <class T> struct VertexSearchResult {
    T best{};
    std::uint64_t count = 0;  ///< number of maximizing strategies (saturating at UINT64_MAX)
    std::vector<DeterministicStrategy> optimizers;  ///< lexicographic, at most collect_limit
    bool truncated = false;
};

/// Exhaustive over the party with fewer strategies; the other party best-responds
/// per setting, which is exact because the objective decomposes over its settings
/// once the enumerated party is fixed. Float ties use absolute tolerance tol.
template <class T>
VertexSearchResult<T> maximize_over_vertices(const Scenario& sc, const std::vector<T>& weights,
                                             std::size_t collect_limit = 0, double tol = 1e-12);

/// Value of a deterministic strategy under cell weights.
template <class T> T vertex_value(const Scenario& sc, const std::vector<T>& weights, const DeterministicStrategy& s);

/// All deterministic strategies in lexicographic order; throws
/// EnumerationTooLargeError above cap.
std::vector<DeterministicStrategy> enumerate_local_vertices(const Scenario& sc,
                                                            std::uint64_t cap = std::uint64_t{1} << 31);

/// Cell indices touched by a deterministic strategy, ascending.
std::vector<std::uint32_t> vertex_support(const Scenario& sc, const DeterministicStrategy& s);

} // namespace bellnl
