#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "bellnl/table.hpp"

namespace bellnl {

/// One party's part of a Bell symmetry: (x, a) -> (setting[x], output[x][a]).
struct PartyElement {
    std::vector<int> setting;
    std::vector<std::vector<int>> output;

    static PartyElement identity(int settings, int outcomes);
    /// Composition: (p * q)(x, a) = p(q(x, a)).
    PartyElement operator*(const PartyElement& q) const;
    PartyElement inverse() const;
    friend bool operator==(const PartyElement&, const PartyElement&) = default;
};

/// Element of the Bell symmetric group (S_|A| wr S_|X|) x (S_|B| wr S_|Y|).
/// Party exchange is not part of the group.
struct BellGroupElement {
    PartyElement alice;
    PartyElement bob;

    static BellGroupElement identity(const Scenario& sc);
    static BellGroupElement random(const Scenario& sc, std::mt19937_64& rng);
    BellGroupElement operator*(const BellGroupElement& h) const { return {alice * h.alice, bob * h.bob}; }
    BellGroupElement inverse() const { return {alice.inverse(), bob.inverse()}; }
    friend bool operator==(const BellGroupElement&, const BellGroupElement&) = default;

    std::uint32_t map_cell(const Scenario& sc, std::uint32_t cell) const;
    /// The induced permutation of cell indices.
    std::vector<std::uint32_t> cell_permutation(const Scenario& sc) const;
};

class GroupHandle {
public:
    enum class Kind { full, outputs_only };

    GroupHandle() = default;
    GroupHandle(Scenario sc, Kind kind, std::vector<BellGroupElement> gens, mpz_class order);

    const Scenario& scenario() const { return sc_; }
    Kind kind() const { return kind_; }
    const std::vector<BellGroupElement>& generators() const { return gens_; }
    const std::vector<std::vector<std::uint32_t>>& cell_generators() const { return cell_gens_; }
    /// Closed-form order, certified against a stabilizer chain when built.
    const mpz_class& order() const { return order_; }

private:
    Scenario sc_;
    Kind kind_ = Kind::full;
    std::vector<BellGroupElement> gens_;
    std::vector<std::vector<std::uint32_t>> cell_gens_;
    mpz_class order_ = 1;
};

/// (|A|!)^|X| |X|! (|B|!)^|Y| |Y|!
mpz_class bell_group_order(const Scenario& sc);

/// Full Bell symmetric group with at most two generators per party.
GroupHandle bell_group(const Scenario& sc);
/// Subgroup of per-setting output relabelings (no setting permutations).
GroupHandle output_subgroup(const Scenario& sc);

/// Order of the permutation group generated by gens on {0..degree-1}
/// (Schreier-Sims).
mpz_class permutation_group_order(const std::vector<std::vector<std::uint32_t>>& gens, std::size_t degree);

/// Number of distinct cell permutations reachable from the generators by BFS;
/// stops and returns cap + 1 when the closure exceeds cap.
std::uint64_t closure_size(const GroupHandle& grp, std::uint64_t cap);

TableOfZeros act(const BellGroupElement& g, const TableOfZeros& t);

/// Complete orbit under the group, sorted; throws SymmetryError above cap.
std::vector<TableOfZeros> orbit(const TableOfZeros& t, const GroupHandle& grp, std::size_t cap = 20'000'000);

/// Lexicographically least sorted cell vector in the orbit.
TableOfZeros canonical_form(const TableOfZeros& t, const GroupHandle& grp);

/// Orbit-based subset reduction: scanning by increasing size, a table is kept
/// unless it contains an orbit image of an earlier kept table. Outputs are
/// canonical forms ordered by (size, cells). With a subgroup, a first pass
/// under it precedes the full pass.
std::vector<TableOfZeros> group_reduce(std::vector<TableOfZeros> tables, const GroupHandle& grp,
                                       const GroupHandle* subgroup = nullptr);

/// One canonical form per orbit, with no subset pruning. Tables are first
/// bucketed by a relabeling invariant so only same-bucket orbits are stored.
std::vector<TableOfZeros> orbit_classes(std::vector<TableOfZeros> tables, const GroupHandle& grp);

} // namespace bellnl
