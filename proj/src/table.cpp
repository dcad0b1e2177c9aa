#include "bellnl/table.hpp"

namespace bellnl {

TableOfZeros::TableOfZeros(Scenario sc, std::vector<std::uint32_t> cells) : sc_(sc), cells_(std::move(cells))
{
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    if (!cells_.empty() && cells_.back() >= sc_.cell_count())
        throw InvalidScenarioError("cell index " + std::to_string(cells_.back()) + " outside scenario " +
                                   sc_.to_string());
}

TableOfZeros TableOfZeros::from_xayb(Scenario sc, const std::vector<std::array<int, 4>>& cells)
{
    std::vector<std::uint32_t> idx;
    idx.reserve(cells.size());
    for (const auto& [x, a, y, b] : cells) {
        const Cell c{x, y, a, b};
        if (!sc.contains(c))
            throw InvalidScenarioError("cell (" + std::to_string(x) + "," + std::to_string(a) + "," +
                                       std::to_string(y) + "," + std::to_string(b) + ") outside scenario " +
                                       sc.to_string());
        idx.push_back(static_cast<std::uint32_t>(sc.index(c)));
    }
    return TableOfZeros(sc, std::move(idx));
}

TableOfZeros TableOfZeros::with(std::uint32_t c) const
{
    auto cells = cells_;
    cells.push_back(c);
    return TableOfZeros(sc_, std::move(cells));
}

TableOfZeros TableOfZeros::without(std::uint32_t c) const
{
    auto cells = cells_;
    cells.erase(std::remove(cells.begin(), cells.end(), c), cells.end());
    TableOfZeros t(sc_);
    t.cells_ = std::move(cells);
    return t;
}

TableOfZeros TableOfZeros::united(const TableOfZeros& o) const
{
    if (!(sc_ == o.sc_))
        throw ScenarioMismatchError("tables belong to different scenarios");
    std::vector<std::uint32_t> cells;
    std::set_union(cells_.begin(), cells_.end(), o.cells_.begin(), o.cells_.end(), std::back_inserter(cells));
    TableOfZeros t(sc_);
    t.cells_ = std::move(cells);
    return t;
}

bool TableOfZeros::is_subset_of(const TableOfZeros& o) const
{
    return std::includes(o.cells_.begin(), o.cells_.end(), cells_.begin(), cells_.end());
}

} // namespace bellnl
