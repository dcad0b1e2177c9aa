#pragma once

// Brute-force reference implementations used to cross-check the library.
// They share nothing with the library beyond the data types.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "bellnl/core.hpp"
#include "bellnl/games.hpp"
#include "bellnl/table.hpp"

namespace oracle {

using bellnl::DeterministicStrategy;
using bellnl::Rational;
using bellnl::Scenario;

/// Calls fn on every deterministic strategy, in mixed-radix order.
template <class Fn> void for_each_strategy(const Scenario& sc, Fn fn)
{
    DeterministicStrategy s{std::vector<int>(sc.nx(), 0), std::vector<int>(sc.ny(), 0)};
    while (true) {
        fn(s);
        int i = 0;
        const int n = sc.nx() + sc.ny();
        for (; i < n; ++i) {
            int& d = i < sc.nx() ? s.alice[i] : s.bob[i - sc.nx()];
            const int base = i < sc.nx() ? sc.na() : sc.nb();
            if (++d < base)
                break;
            d = 0;
        }
        if (i == n)
            return;
    }
}

struct GameValue {
    Rational best = -1;
    std::uint64_t count = 0;
    std::vector<DeterministicStrategy> optimizers;
};

inline GameValue classical_value(const bellnl::Game& g)
{
    GameValue v;
    for_each_strategy(g.scenario, [&](const DeterministicStrategy& s) {
        Rational w = 0;
        for (int x = 0; x < g.scenario.nx(); ++x)
            for (int y = 0; y < g.scenario.ny(); ++y)
                if (g.wins(x, y, s.alice[x], s.bob[y]))
                    w += g.prob(x, y);
        if (w > v.best) {
            v.best = w;
            v.count = 0;
            v.optimizers.clear();
        }
        if (w == v.best) {
            ++v.count;
            v.optimizers.push_back(s);
        }
    });
    std::sort(v.optimizers.begin(), v.optimizers.end());
    return v;
}

/// p/q in lowest terms; the two-argument mpq_class constructor does not reduce.
inline Rational frac(long p, long q)
{
    Rational r(p, q);
    r.canonicalize();
    return r;
}

/// Exact rank by plain Gauss-Jordan over the rationals.
inline std::size_t rank(std::vector<std::vector<Rational>> m)
{
    std::size_t r = 0;
    const std::size_t cols = m.empty() ? 0 : m.front().size();
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0)
            ++p;
        if (p == m.size())
            continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (i != r && m[i][c] != 0) {
                const Rational f = m[i][c] / m[r][c];
                for (std::size_t k = c; k < cols; ++k)
                    m[i][k] -= f * m[r][k];
            }
        ++r;
    }
    return r;
}

inline std::vector<Rational> vertex_vector(const Scenario& sc, const DeterministicStrategy& s)
{
    std::vector<Rational> v(sc.cell_count(), 0);
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y)
            v[sc.index(x, y, s.alice[x], s.bob[y])] = 1;
    return v;
}

inline std::size_t vertex_rank(const Scenario& sc, const std::vector<DeterministicStrategy>& vs)
{
    std::vector<std::vector<Rational>> m;
    for (const auto& s : vs)
        m.push_back(vertex_vector(sc, s));
    return rank(std::move(m));
}

/// Bitmask of the cells a strategy puts weight on (scenarios of <= 64 cells).
inline std::uint64_t support_mask(const Scenario& sc, const DeterministicStrategy& s)
{
    std::uint64_t m = 0;
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y)
            m |= std::uint64_t{1} << sc.index(x, y, s.alice[x], s.bob[y]);
    return m;
}

inline std::vector<std::uint64_t> all_support_masks(const Scenario& sc)
{
    std::vector<std::uint64_t> out;
    for_each_strategy(sc, [&](const DeterministicStrategy& s) { out.push_back(support_mask(sc, s)); });
    return out;
}

inline bool realizable(const std::vector<std::uint64_t>& supports, std::uint64_t zeros)
{
    return std::any_of(supports.begin(), supports.end(), [&](std::uint64_t s) { return (s & zeros) == 0; });
}

inline bool realizable(const bellnl::TableOfZeros& t)
{
    bool found = false;
    for_each_strategy(t.scenario(), [&](const DeterministicStrategy& s) {
        if (found)
            return;
        bool ok = true;
        for (int x = 0; x < t.scenario().nx() && ok; ++x)
            for (int y = 0; y < t.scenario().ny() && ok; ++y)
                ok = !t.contains(x, s.alice[x], y, s.bob[y]);
        found = ok;
    });
    return found;
}

/// Every element of the relabeling group as a cell permutation, built
/// directly from all setting permutations and per-setting output permutations.
inline std::vector<std::vector<std::uint32_t>> all_relabelings(const Scenario& sc)
{
    auto party = [](int settings, int outcomes) {
        // (setting image, output images per setting)
        std::vector<std::pair<std::vector<int>, std::vector<std::vector<int>>>> out;
        std::vector<int> sp(settings);
        std::iota(sp.begin(), sp.end(), 0);
        std::vector<std::vector<int>> perms;
        std::vector<int> op(outcomes);
        std::iota(op.begin(), op.end(), 0);
        do
            perms.push_back(op);
        while (std::next_permutation(op.begin(), op.end()));
        do {
            std::vector<std::size_t> pick(settings, 0);
            while (true) {
                std::vector<std::vector<int>> outs;
                for (int x = 0; x < settings; ++x)
                    outs.push_back(perms[pick[x]]);
                out.emplace_back(sp, outs);
                int i = 0;
                for (; i < settings; ++i) {
                    if (++pick[i] < perms.size())
                        break;
                    pick[i] = 0;
                }
                if (i == settings)
                    break;
            }
        } while (std::next_permutation(sp.begin(), sp.end()));
        return out;
    };
    const auto pa = party(sc.nx(), sc.na());
    const auto pb = party(sc.ny(), sc.nb());
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& [sa, oa] : pa)
        for (const auto& [sb, ob] : pb) {
            std::vector<std::uint32_t> perm(sc.cell_count());
            for (int x = 0; x < sc.nx(); ++x)
                for (int y = 0; y < sc.ny(); ++y)
                    for (int a = 0; a < sc.na(); ++a)
                        for (int b = 0; b < sc.nb(); ++b)
                            perm[sc.index(x, y, a, b)] =
                                static_cast<std::uint32_t>(sc.index(sa[x], sb[y], oa[x][a], ob[y][b]));
            out.push_back(std::move(perm));
        }
    return out;
}

inline std::uint64_t apply(const std::vector<std::uint32_t>& perm, std::uint64_t mask)
{
    std::uint64_t out = 0;
    for (std::size_t c = 0; c < perm.size(); ++c)
        if ((mask >> c) & 1U)
            out |= std::uint64_t{1} << perm[c];
    return out;
}

inline std::uint64_t to_mask(const bellnl::TableOfZeros& t)
{
    std::uint64_t m = 0;
    for (auto c : t.cells())
        m |= std::uint64_t{1} << c;
    return m;
}

/// Smallest mask in the orbit; a class label independent of the library.
inline std::uint64_t orbit_min(const std::vector<std::vector<std::uint32_t>>& group, std::uint64_t mask)
{
    std::uint64_t best = mask;
    for (const auto& g : group)
        best = std::min(best, apply(g, mask));
    return best;
}

/// Class labels of all critical nonlocal tables of a scenario with at most
/// 64 cells, by exhausting every subset of cells.
inline std::set<std::uint64_t> critical_classes(const Scenario& sc)
{
    const auto supports = all_support_masks(sc);
    const auto group = all_relabelings(sc);
    const std::uint64_t n = sc.cell_count();
    std::set<std::uint64_t> out;
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) {
        if (realizable(supports, z))
            continue;
        bool critical = true;
        for (std::uint64_t c = 0; c < n && critical; ++c)
            if ((z >> c) & 1U)
                critical = realizable(supports, z & ~(std::uint64_t{1} << c));
        if (critical)
            out.insert(orbit_min(group, z));
    }
    return out;
}

} // namespace oracle
