#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <optional>
#include <vector>

#include "bellnl/core.hpp"
#include "bellnl/symmetry.hpp"
#include "bellnl/table.hpp"

namespace bellnl {

/// Deterministic local model: the outcome each party picks per setting.
struct LhvAssignment {
    std::vector<int> alice;
    std::vector<int> bob;
    friend bool operator==(const LhvAssignment&, const LhvAssignment&) = default;
};

/// Sub-scenario in which each party may only output from a subset of its
/// outcomes. A table is nonlocal in a region when no assignment with picks
/// inside the region avoids its zeros.
struct Region {
    std::uint64_t alice_outcomes = 0;  ///< bit a set: outcome a allowed
    std::uint64_t bob_outcomes = 0;

    static Region full(const Scenario& sc);
    bool contains(const Scenario& sc, std::uint32_t cell) const;
};

struct Realizability {
    bool realizable = false;
    std::optional<LhvAssignment> witness;
};

/// Exhaustive search over one party's picks with per-setting best responses
/// of the other. With a seed, outcomes are tried in a seeded shuffled order so
/// the witness is a pseudo-random choice among realizing assignments.
Realizability is_lhv_realizable(const TableOfZeros& t, const std::optional<Region>& region = std::nullopt,
                                std::optional<std::uint64_t> seed = std::nullopt);

/// Nonlocal, and every single-cell removal is realizable.
bool is_critical(const TableOfZeros& t);

/// True iff the assignment hits none of the zeros.
bool assignment_avoids(const TableOfZeros& t, const LhvAssignment& f);

/// Subset-minimal nonlocal (within the region) supersets of pretable obtained
/// by branching over the cells of a realizing assignment. Sorted.
std::vector<TableOfZeros> generate_zpb(const TableOfZeros& pretable, const Region& region, std::uint64_t seed = 0,
                                       std::size_t* max_depth = nullptr);

TableOfZeros zeros_from_behavior(const ExactBehavior& p);
TableOfZeros zeros_from_behavior(const FloatBehavior& p, double tol);

/// Same zeros with the parties exchanged.
TableOfZeros swap_parties(const TableOfZeros& t);

struct CntzOptions {
    std::uint64_t seed = 0;
    /// First reduction pass under the output-relabeling subgroup.
    bool use_subgroup = true;
    /// Split on Bob's outcomes instead of Alice's.
    bool swap = false;
    /// Called with a one-line summary after each stage.
    std::function<void(const std::string&)> progress;
};

struct CntzReport {
    std::vector<TableOfZeros> critical;  ///< canonical representatives passing is_critical
    std::vector<TableOfZeros> minimal;   ///< subset-minimal classes; equal to critical, kept for reports
    std::size_t blue_classes = 0;
    std::size_t red_tables = 0;
    std::size_t pretables = 0;
    std::size_t candidates = 0;
    std::size_t max_depth = 0;
};

/// Representatives of every critical nonlocal table of zeros up to the Bell
/// symmetric group, by the region-split search.
CntzReport enumerate_cntz(const Scenario& sc, const CntzOptions& opt = {});

} // namespace bellnl
