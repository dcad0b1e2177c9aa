#include "bellnl/zeros.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <bit>
#include <numeric>
#include <random>
#include <unordered_set>

#include "bellnl/parallel.hpp"

namespace bellnl {

namespace {

// Largest strategy count for which generate_zpb lists supports explicitly.
constexpr std::uint64_t kExplicitStrategyCap = std::uint64_t{1} << 16;

std::uint64_t all_bits(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

std::uint64_t mix64(std::uint64_t h)
{
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

std::uint64_t table_hash(const TableOfZeros& t)
{
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto c : t.cells())
        h = mix64(h ^ c);
    return h;
}

// Enumerated party e with settings ns and outcomes no; responder with settings
// nr and outcomes nq. blocked[(s * no + o) * nr + r] is the mask of responder
// outcomes q forbidden once e picks o at s.
struct Instance {
    int ns, no, nr, nq;
    std::uint64_t emask, rmask;
    std::vector<std::uint64_t> blocked;
    bool swapped;
};

Instance make_instance(const TableOfZeros& t, const Region& region)
{
    const Scenario& sc = t.scenario();
    if (sc.na() > 64 || sc.nb() > 64)
        throw InvalidScenarioError("outcome counts above 64 are not supported");
    Instance in;
    // Enumerate the party with fewer admissible deterministic picks.
    const double alice_picks = std::pow(static_cast<double>(std::popcount(region.alice_outcomes)), sc.nx());
    const double bob_picks = std::pow(static_cast<double>(std::popcount(region.bob_outcomes)), sc.ny());
    in.swapped = bob_picks < alice_picks;
    if (!in.swapped) {
        in.ns = sc.nx(); in.no = sc.na(); in.nr = sc.ny(); in.nq = sc.nb();
        in.emask = region.alice_outcomes; in.rmask = region.bob_outcomes;
    } else {
        in.ns = sc.ny(); in.no = sc.nb(); in.nr = sc.nx(); in.nq = sc.na();
        in.emask = region.bob_outcomes; in.rmask = region.alice_outcomes;
    }
    in.blocked.assign(static_cast<std::size_t>(in.ns) * in.no * in.nr, 0);
    for (auto idx : t.cells()) {
        const Cell c = sc.cell(idx);
        if (!in.swapped)
            in.blocked[(static_cast<std::size_t>(c.x) * in.no + c.a) * in.nr + c.y] |= std::uint64_t{1} << c.b;
        else
            in.blocked[(static_cast<std::size_t>(c.y) * in.no + c.b) * in.nr + c.x] |= std::uint64_t{1} << c.a;
    }
    return in;
}

struct Searcher {
    const Instance& in;
    std::vector<std::vector<int>> order;  // outcome try order per setting
    std::vector<int> pick;

    bool dfs(int s, std::vector<std::uint64_t>& allowed)
    {
        if (s == in.ns)
            return true;
        std::vector<std::uint64_t> next(in.nr);
        for (int o : order[s]) {
            bool ok = true;
            for (int r = 0; r < in.nr; ++r) {
                next[r] = allowed[r] & ~in.blocked[(static_cast<std::size_t>(s) * in.no + o) * in.nr + r];
                if (next[r] == 0) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                continue;
            pick[s] = o;
            if (dfs(s + 1, next)) {
                allowed = std::move(next);
                return true;
            }
        }
        return false;
    }
};

std::vector<int> mask_bits(std::uint64_t m)
{
    std::vector<int> out;
    for (int i = 0; m != 0; ++i, m >>= 1)
        if (m & 1U)
            out.push_back(i);
    return out;
}

using Words = std::vector<std::uint64_t>;

struct WordsHash {
    std::size_t operator()(const Words& w) const
    {
        std::uint64_t h = 0;
        for (auto v : w)
            h = mix64(h ^ v);
        return static_cast<std::size_t>(h);
    }
};

Words words_of(const TableOfZeros& t)
{
    Words w((t.scenario().cell_count() + 63) / 64, 0);
    for (auto c : t.cells())
        w[c >> 6] |= std::uint64_t{1} << (c & 63);
    return w;
}

bool words_subset(const Words& small, const Words& big)
{
    for (std::size_t i = 0; i < small.size(); ++i)
        if ((small[i] & ~big[i]) != 0)
            return false;
    return true;
}

struct ZpbSearch {
    const Region& region;
    std::uint64_t seed;
    std::unordered_set<Words, WordsHash> memo;
    std::vector<Words> found_words;
    std::vector<TableOfZeros> found;
    std::size_t max_depth = 0;

    void run(const TableOfZeros& t, std::size_t depth)
    {
        max_depth = std::max(max_depth, depth);
        auto w = words_of(t);
        if (!memo.insert(w).second)
            return;
        for (const auto& f : found_words)
            if (words_subset(f, w))
                return;
        auto r = is_lhv_realizable(t, region, seed ^ table_hash(t));
        if (!r.realizable) {
            found_words.push_back(std::move(w));
            found.push_back(t);
            return;
        }
        const Scenario& sc = t.scenario();
        for (int x = 0; x < sc.nx(); ++x)
            for (int y = 0; y < sc.ny(); ++y)
                run(t.with(static_cast<std::uint32_t>(sc.index(x, y, r.witness->alice[x], r.witness->bob[y]))),
                    depth + 1);
    }
};

// Minimal nonlocal supersets of a pretable are pretable + T for the minimal
// hitting sets T of the supports of the region's strategies that the
// pretable leaves unhit. MMCS (Murakami-Uno) yields each such T exactly once,
// so no memo of visited tables is needed.
class Mmcs {
public:
    Mmcs(const TableOfZeros& pre, const Region& region) : pre_(pre), region_(region) {}

    /// Builds the hypergraph; false when the region has more than cap strategies.
    bool build(std::uint64_t cap)
    {
        const Scenario& sc = pre_.scenario();
        const auto alice = mask_bits(region_.alice_outcomes & all_bits(sc.na()));
        const auto bob = mask_bits(region_.bob_outcomes & all_bits(sc.nb()));
        double count = std::pow(static_cast<double>(alice.size()), sc.nx()) *
                       std::pow(static_cast<double>(bob.size()), sc.ny());
        if (count > static_cast<double>(cap))
            return false;
        cells_ = sc.cell_count();
        words_ = (cells_ + 63) / 64;
        occ_.assign(cells_, {});
        cand_.assign(words_, 0);
        for (std::uint32_t c = 0; c < cells_; ++c)
            if (region_.contains(sc, c) && !pre_.contains(c))
                cand_[c >> 6] |= std::uint64_t{1} << (c & 63);
        if (alice.empty() || bob.empty())
            return true;  // no strategy: the pretable is already nonlocal

        std::vector<std::size_t> ia(sc.nx(), 0), ib(sc.ny(), 0);
        std::vector<std::uint32_t> support(static_cast<std::size_t>(sc.nx()) * sc.ny());
        while (true) {
            bool avoids = true;
            std::size_t k = 0;
            for (int x = 0; x < sc.nx(); ++x)
                for (int y = 0; y < sc.ny(); ++y) {
                    const auto c = static_cast<std::uint32_t>(sc.index(x, y, alice[ia[x]], bob[ib[y]]));
                    support[k++] = c;
                    avoids = avoids && !pre_.contains(c);
                }
            if (avoids) {
                const auto e = static_cast<std::uint32_t>(edges_.size());
                std::vector<std::uint64_t> bits(words_, 0);
                for (auto c : support) {
                    bits[c >> 6] |= std::uint64_t{1} << (c & 63);
                    occ_[c].push_back(e);
                }
                edges_.push_back(support);
                edge_bits_.push_back(std::move(bits));
            }
            // Mixed-radix increment over Alice's then Bob's picks.
            int i = 0;
            const int n = sc.nx() + sc.ny();
            for (; i < n; ++i) {
                std::size_t& d = i < sc.nx() ? ia[i] : ib[i - sc.nx()];
                const std::size_t base = i < sc.nx() ? alice.size() : bob.size();
                if (++d < base)
                    break;
                d = 0;
            }
            if (i == n)
                break;
        }
        hits_.assign(edges_.size(), 0);
        hitsum_.assign(edges_.size(), 0);
        crit_.assign(cells_, 0);
        uncovered_ = edges_.size();
        return true;
    }

    void run() { recurse(0); }

    std::vector<TableOfZeros> found;
    std::size_t max_depth = 0;

private:
    void add(std::uint32_t v)
    {
        for (auto e : occ_[v]) {
            if (hits_[e] == 0) {
                --uncovered_;
                ++crit_[v];
            } else if (hits_[e] == 1) {
                --crit_[hitsum_[e]];
            }
            ++hits_[e];
            hitsum_[e] += v;
        }
    }

    void remove(std::uint32_t v)
    {
        for (auto e : occ_[v]) {
            --hits_[e];
            hitsum_[e] -= v;
            if (hits_[e] == 0) {
                ++uncovered_;
                --crit_[v];
            } else if (hits_[e] == 1) {
                ++crit_[hitsum_[e]];
            }
        }
    }

    void recurse(std::size_t depth)
    {
        max_depth = std::max(max_depth, depth);
        if (uncovered_ == 0) {
            std::vector<std::uint32_t> cells = pre_.cells();
            cells.insert(cells.end(), chosen_.begin(), chosen_.end());
            found.emplace_back(pre_.scenario(), std::move(cells));
            return;
        }
        // Branch on the unhit edge with the fewest candidate cells.
        std::size_t best = edges_.size();
        int best_count = 1 << 30;
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            if (hits_[e] != 0)
                continue;
            int n = 0;
            for (std::size_t w = 0; w < words_; ++w)
                n += std::popcount(edge_bits_[e][w] & cand_[w]);
            if (n < best_count) {
                best_count = n;
                best = e;
                if (n == 0)
                    return;
            }
        }
        std::vector<std::uint32_t> branch;
        for (auto c : edges_[best])
            if ((cand_[c >> 6] >> (c & 63)) & 1U)
                branch.push_back(c);
        for (auto c : branch)
            cand_[c >> 6] &= ~(std::uint64_t{1} << (c & 63));
        for (auto v : branch) {
            add(v);
            // Every earlier choice must keep an edge only it hits.
            bool minimal = true;
            for (auto u : chosen_)
                if (crit_[u] == 0) {
                    minimal = false;
                    break;
                }
            if (minimal) {
                chosen_.push_back(v);
                recurse(depth + 1);
                chosen_.pop_back();
            }
            remove(v);
            cand_[v >> 6] |= std::uint64_t{1} << (v & 63);
        }
    }

    const TableOfZeros& pre_;
    const Region& region_;
    std::size_t cells_ = 0;
    std::size_t words_ = 0;
    std::vector<std::vector<std::uint32_t>> edges_;
    std::vector<std::vector<std::uint64_t>> edge_bits_;
    std::vector<std::vector<std::uint32_t>> occ_;
    std::vector<std::uint64_t> cand_;
    std::vector<int> hits_;
    std::vector<std::uint64_t> hitsum_;
    std::vector<int> crit_;
    std::vector<std::uint32_t> chosen_;
    std::size_t uncovered_ = 0;
};

std::vector<TableOfZeros> minimal_only(std::vector<TableOfZeros> ts)
{
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<TableOfZeros> out;
    std::vector<Words> kept;
    for (auto& t : ts) {
        auto w = words_of(t);
        bool dominated = false;
        for (const auto& k : kept)
            if (words_subset(k, w)) {
                dominated = true;
                break;
            }
        if (!dominated) {
            kept.push_back(std::move(w));
            out.push_back(std::move(t));
        }
    }
    return out;
}

// Embeds a table of a sub-scenario with fewer Alice outcomes, shifting outcomes.
TableOfZeros lift_outcomes(const TableOfZeros& t, const Scenario& full, int offset)
{
    const Scenario& sub = t.scenario();
    std::vector<std::uint32_t> cells;
    for (auto idx : t.cells()) {
        const Cell c = sub.cell(idx);
        cells.push_back(static_cast<std::uint32_t>(full.index(c.x, c.y, c.a + offset, c.b)));
    }
    return TableOfZeros(full, std::move(cells));
}

} // namespace

Region Region::full(const Scenario& sc) { return {all_bits(sc.na()), all_bits(sc.nb())}; }

bool Region::contains(const Scenario& sc, std::uint32_t cell) const
{
    const Cell c = sc.cell(cell);
    return ((alice_outcomes >> c.a) & 1U) && ((bob_outcomes >> c.b) & 1U);
}

Realizability is_lhv_realizable(const TableOfZeros& t, const std::optional<Region>& region,
                                std::optional<std::uint64_t> seed)
{
    const Region reg = region ? *region : Region::full(t.scenario());
    const Instance in = make_instance(t, reg);
    Searcher s{in, {}, std::vector<int>(in.ns, 0)};
    std::mt19937_64 rng(seed.value_or(0));
    const auto outs = mask_bits(in.emask & all_bits(in.no));
    for (int i = 0; i < in.ns; ++i) {
        s.order.push_back(outs);
        if (seed)
            std::shuffle(s.order.back().begin(), s.order.back().end(), rng);
    }
    std::vector<std::uint64_t> allowed(in.nr, in.rmask & all_bits(in.nq));
    if (in.ns > 0 && outs.empty())
        return {};
    for (auto m : allowed)
        if (m == 0)
            return {};
    if (!s.dfs(0, allowed))
        return {};
    std::vector<int> resp(in.nr);
    for (int r = 0; r < in.nr; ++r) {
        const auto bits = mask_bits(allowed[r]);
        resp[r] = seed ? bits[rng() % bits.size()] : bits.front();
    }
    LhvAssignment f;
    if (!in.swapped) {
        f.alice = s.pick;
        f.bob = resp;
    } else {
        f.alice = resp;
        f.bob = s.pick;
    }
    return {true, std::move(f)};
}

bool assignment_avoids(const TableOfZeros& t, const LhvAssignment& f)
{
    const Scenario& sc = t.scenario();
    check_strategy(DeterministicStrategy{f.alice, f.bob}, sc);
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y)
            if (t.contains(x, f.alice[x], y, f.bob[y]))
                return false;
    return true;
}

bool is_critical(const TableOfZeros& t)
{
    if (is_lhv_realizable(t).realizable)
        return false;
    for (auto c : t.cells())
        if (!is_lhv_realizable(t.without(c)).realizable)
            return false;
    return true;
}

std::vector<TableOfZeros> generate_zpb(const TableOfZeros& pretable, const Region& region, std::uint64_t seed,
                                       std::size_t* max_depth)
{
    for (auto c : pretable.cells())
        if (!region.contains(pretable.scenario(), c))
            throw InvalidScenarioError("pretable has zeros outside the region");
    Mmcs m(pretable, region);
    if (m.build(kExplicitStrategyCap)) {
        m.run();
        if (max_depth != nullptr)
            *max_depth = m.max_depth;
        std::sort(m.found.begin(), m.found.end());
        return std::move(m.found);
    }
    // Too many strategies to list: branch on realizing assignments instead.
    ZpbSearch z{region, seed, {}, {}, {}, 0};
    z.run(pretable, 0);
    if (max_depth != nullptr)
        *max_depth = z.max_depth;
    return minimal_only(std::move(z.found));
}

TableOfZeros zeros_from_behavior(const ExactBehavior& p)
{
    std::vector<std::uint32_t> cells;
    for (std::size_t i = 0; i < p.table().size(); ++i)
        if (p[i] == 0)
            cells.push_back(static_cast<std::uint32_t>(i));
    return TableOfZeros(p.scenario(), std::move(cells));
}

TableOfZeros zeros_from_behavior(const FloatBehavior& p, double tol)
{
    std::vector<std::uint32_t> cells;
    for (std::size_t i = 0; i < p.table().size(); ++i)
        if (p[i] <= tol)
            cells.push_back(static_cast<std::uint32_t>(i));
    return TableOfZeros(p.scenario(), std::move(cells));
}

TableOfZeros swap_parties(const TableOfZeros& t)
{
    const Scenario& sc = t.scenario();
    const Scenario sw = sc.swapped();
    std::vector<std::uint32_t> cells;
    for (auto idx : t.cells()) {
        const Cell c = sc.cell(idx);
        cells.push_back(static_cast<std::uint32_t>(sw.index(c.y, c.x, c.b, c.a)));
    }
    return TableOfZeros(sw, std::move(cells));
}

CntzReport enumerate_cntz(const Scenario& sc, const CntzOptions& opt)
{
    if (opt.swap) {
        CntzOptions inner = opt;
        inner.swap = false;
        CntzReport r = enumerate_cntz(sc.swapped(), inner);
        const GroupHandle grp = bell_group(sc);
        for (auto* list : {&r.critical, &r.minimal}) {
            for (auto& t : *list)
                t = canonical_form(swap_parties(t), grp);
            std::sort(list->begin(), list->end());
        }
        return r;
    }
    if (sc.na() < 2)
        throw InvalidScenarioError("region split needs at least two outcomes for the split party");
    const int blue_n = (sc.na() + 1) / 2;
    const int red_n = sc.na() - blue_n;
    const Scenario blue_sc(sc.nx(), blue_n, sc.ny(), sc.nb());
    const Scenario red_sc(sc.nx(), red_n, sc.ny(), sc.nb());
    CntzReport rep;
    auto note = [&](const std::string& m) {
        if (opt.progress)
            opt.progress(m);
    };

    std::size_t depth = 0;
    auto blue_all = generate_zpb(TableOfZeros(blue_sc), Region::full(blue_sc), opt.seed, &depth);
    rep.max_depth = depth;
    const GroupHandle blue_grp = bell_group(blue_sc);
    const GroupHandle blue_sub = output_subgroup(blue_sc);
    auto blue_reps = group_reduce(blue_all, blue_grp, opt.use_subgroup ? &blue_sub : nullptr);
    rep.blue_classes = blue_reps.size();
    note("blue: " + std::to_string(blue_all.size()) + " minimal tables, " + std::to_string(rep.blue_classes) +
         " classes");

    // Every minimal nonlocal table of the red sub-scenario, i.e. the union of
    // the full orbits of its class representatives.
    std::vector<TableOfZeros> red_all;
    if (red_n == blue_n) {
        red_all = blue_all;
    } else {
        red_all = generate_zpb(TableOfZeros(red_sc), Region::full(red_sc), opt.seed, &depth);
        rep.max_depth = std::max(rep.max_depth, depth);
    }
    rep.red_tables = red_all.size();

    const GroupHandle grp = bell_group(sc);
    const GroupHandle sub = output_subgroup(sc);
    const GroupHandle* subp = opt.use_subgroup ? &sub : nullptr;
    std::vector<TableOfZeros> pre;
    for (const auto& b : blue_reps) {
        const auto bl = lift_outcomes(b, sc, 0);
        for (const auto& r : red_all)
            pre.push_back(bl.united(lift_outcomes(r, sc, blue_n)));
    }
    pre = group_reduce(std::move(pre), grp, subp);
    rep.pretables = pre.size();
    note("pretables: " + std::to_string(rep.pretables) + " from " + std::to_string(rep.red_tables) + " red tables");

    std::vector<std::vector<TableOfZeros>> parts(pre.size());
    std::vector<std::size_t> depths(pre.size(), 0);
    std::vector<std::size_t> candidates(pre.size(), 0);
    const Region full = Region::full(sc);
    std::atomic<std::size_t> done{0};
    parallel_for(pre.size(), [&](std::size_t i) {
        // Critical is the same as minimal nonlocal, so filtering here leaves
        // only the orbit deduplication for the end.
        auto ext = generate_zpb(pre[i], full, opt.seed, &depths[i]);
        candidates[i] = ext.size();
        for (auto& t : ext)
            if (is_critical(t))
                parts[i].push_back(std::move(t));
        const std::size_t d = ++done;
        if (opt.progress && (d % 100 == 0 || d == pre.size()))
            note("extended " + std::to_string(d) + "/" + std::to_string(pre.size()) + " pretables");
    });
    std::vector<TableOfZeros> crit;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        rep.max_depth = std::max(rep.max_depth, depths[i]);
        rep.candidates += candidates[i];
        crit.insert(crit.end(), std::make_move_iterator(parts[i].begin()), std::make_move_iterator(parts[i].end()));
        parts[i] = {};
    }
    note("candidates: " + std::to_string(rep.candidates) + ", critical: " + std::to_string(crit.size()));
    if (subp != nullptr)
        crit = orbit_classes(std::move(crit), *subp);
    rep.critical = orbit_classes(std::move(crit), grp);
    rep.minimal = rep.critical;
    note("critical classes: " + std::to_string(rep.critical.size()));
    return rep;
}

} // namespace bellnl
