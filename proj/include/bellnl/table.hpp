#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bellnl/core.hpp"

namespace bellnl {

/// Set of cells asserted to have probability zero. Cells are stored as
/// scenario cell indices, sorted and unique.
class TableOfZeros {
public:
    TableOfZeros() = default;
    explicit TableOfZeros(Scenario sc) : sc_(sc) {}
    TableOfZeros(Scenario sc, std::vector<std::uint32_t> cells);

    /// Builds from (x, a, y, b) quadruples, the row/column layout of the tables.
    static TableOfZeros from_xayb(Scenario sc, const std::vector<std::array<int, 4>>& cells);

    const Scenario& scenario() const { return sc_; }
    const std::vector<std::uint32_t>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    bool contains(std::uint32_t c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }
    bool contains(int x, int a, int y, int b) const
    {
        return contains(static_cast<std::uint32_t>(sc_.index(x, y, a, b)));
    }

    TableOfZeros with(std::uint32_t c) const;
    TableOfZeros without(std::uint32_t c) const;
    TableOfZeros united(const TableOfZeros& o) const;
    bool is_subset_of(const TableOfZeros& o) const;

    friend bool operator==(const TableOfZeros& a, const TableOfZeros& b)
    {
        return a.sc_ == b.sc_ && a.cells_ == b.cells_;
    }
    /// Orders by size, then lexicographically by cells.
    friend bool operator<(const TableOfZeros& a, const TableOfZeros& b)
    {
        if (a.cells_.size() != b.cells_.size())
            return a.cells_.size() < b.cells_.size();
        return a.cells_ < b.cells_;
    }

private:
    Scenario sc_;
    std::vector<std::uint32_t> cells_;
};

/// Fixed-width bitset over cell indices, used for fast subset tests.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(std::size_t bits) : w_((bits + 63) / 64, 0) {}
    CellSet(std::size_t bits, const std::vector<std::uint32_t>& cells) : CellSet(bits)
    {
        for (auto c : cells)
            set(c);
    }

    void set(std::uint32_t c) { w_[c >> 6] |= std::uint64_t{1} << (c & 63); }
    bool test(std::uint32_t c) const { return (w_[c >> 6] >> (c & 63)) & 1U; }
    /// True iff this is a superset of o.
    bool contains_all(const CellSet& o) const
    {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if ((o.w_[i] & ~w_[i]) != 0)
                return false;
        return true;
    }
    friend bool operator==(const CellSet&, const CellSet&) = default;
    friend auto operator<=>(const CellSet&, const CellSet&) = default;

private:
    std::vector<std::uint64_t> w_;
};

} // namespace bellnl
