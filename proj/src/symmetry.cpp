#include "bellnl/symmetry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_set>

namespace bellnl {

namespace {

using Perm = std::vector<std::uint32_t>;

Perm compose(const Perm& a, const Perm& b)
{
    Perm r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] = a[b[i]];
    return r;
}

Perm invert(const Perm& a)
{
    Perm r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[a[i]] = static_cast<std::uint32_t>(i);
    return r;
}

bool is_identity(const Perm& p)
{
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != i)
            return false;
    return true;
}

// Stabilizer chain with base 0, 1, ..., n-1. Level k holds permutations that
// fix 0..k-1; trans[k][z] maps k to z.
class SchreierSims {
public:
    explicit SchreierSims(std::size_t n) : n_(n), gens_(n), trans_(n), orbit_(n)
    {
        Perm id(n);
        std::iota(id.begin(), id.end(), 0U);
        for (std::size_t k = 0; k < n; ++k) {
            trans_[k].assign(n, std::nullopt);
            trans_[k][k] = id;
            orbit_[k].push_back(static_cast<std::uint32_t>(k));
        }
    }

    // A residue that stops at level j is a new strong generator of every
    // level from the starting one down to j.
    void insert(Perm g, std::size_t start = 0)
    {
        for (std::size_t k = start; k < n_; ++k) {
            if (is_identity(g))
                return;
            const auto x = g[k];
            if (!trans_[k][x]) {
                for (std::size_t l = k + 1; l-- > start;)
                    add_generator(l, g);
                return;
            }
            g = compose(invert(*trans_[k][x]), g);
        }
    }

    mpz_class order() const
    {
        mpz_class o = 1;
        for (const auto& orb : orbit_)
            o *= static_cast<unsigned long>(orb.size());
        return o;
    }

private:
    void add_generator(std::size_t k, const Perm& g)
    {
        gens_[k].push_back(g);
        const auto current = orbit_[k];
        for (auto y : current)
            update(k, compose(g, *trans_[k][y]));
    }

    void update(std::size_t k, Perm h)
    {
        const auto z = h[k];
        if (trans_[k][z]) {
            insert(compose(invert(*trans_[k][z]), h), k + 1);
            return;
        }
        trans_[k][z] = h;
        orbit_[k].push_back(z);
        const auto gens = gens_[k];
        for (const auto& s : gens)
            update(k, compose(s, h));
    }

    std::size_t n_;
    std::vector<std::vector<Perm>> gens_;
    std::vector<std::vector<std::optional<Perm>>> trans_;
    std::vector<std::vector<std::uint32_t>> orbit_;
};

mpz_class factorial(int n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

mpz_class party_order(int settings, int outcomes)
{
    mpz_class o;
    mpz_pow_ui(o.get_mpz_t(), factorial(outcomes).get_mpz_t(), static_cast<unsigned long>(settings));
    return o * factorial(settings);
}

Perm event_permutation(const PartyElement& p, int outcomes)
{
    const std::size_t n = p.setting.size();
    Perm r(n * outcomes);
    for (std::size_t x = 0; x < n; ++x)
        for (int a = 0; a < outcomes; ++a)
            r[x * outcomes + a] = static_cast<std::uint32_t>(p.setting[x] * outcomes + p.output[x][a]);
    return r;
}

mpz_class party_group_order(const std::vector<PartyElement>& gens, int settings, int outcomes)
{
    std::vector<Perm> perms;
    for (const auto& g : gens)
        perms.push_back(event_permutation(g, outcomes));
    return permutation_group_order(perms, static_cast<std::size_t>(settings) * outcomes);
}

PartyElement output_cycle(int settings, int outcomes, int x, int len)
{
    auto p = PartyElement::identity(settings, outcomes);
    for (int a = 0; a < len; ++a)
        p.output[x][a] = (a + 1) % len;
    return p;
}

PartyElement setting_cycle(int settings, int outcomes, int len)
{
    auto p = PartyElement::identity(settings, outcomes);
    for (int x = 0; x < len; ++x)
        p.setting[x] = (x + 1) % len;
    return p;
}

// Smallest certified generating set drawn from transpositions, full cycles and
// their products; falls back to all four basic moves.
std::vector<PartyElement> party_generators(int n, int k)
{
    const mpz_class target = party_order(n, k);
    if (target == 1)
        return {};
    std::vector<PartyElement> basic;
    if (k >= 2)
        basic.push_back(output_cycle(n, k, 0, 2));
    if (k >= 3)
        basic.push_back(output_cycle(n, k, 0, k));
    if (n >= 2)
        basic.push_back(setting_cycle(n, k, 2));
    if (n >= 3)
        basic.push_back(setting_cycle(n, k, n));
    std::vector<PartyElement> cand = basic;
    for (std::size_t i = 0; i < basic.size(); ++i)
        for (std::size_t j = 0; j < basic.size(); ++j)
            if (i != j)
                cand.push_back(basic[i] * basic[j]);
    for (const auto& c : cand)
        if (party_group_order({c}, n, k) == target)
            return {c};
    for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i + 1; j < cand.size(); ++j)
            if (party_group_order({cand[i], cand[j]}, n, k) == target)
                return {cand[i], cand[j]};
    if (party_group_order(basic, n, k) != target)
        throw SymmetryError("failed to generate the relabeling group");
    return basic;
}

std::vector<PartyElement> party_output_generators(int n, int k)
{
    std::vector<PartyElement> out;
    for (int x = 0; x < n; ++x) {
        if (k >= 2)
            out.push_back(output_cycle(n, k, x, 2));
        if (k >= 3)
            out.push_back(output_cycle(n, k, x, k));
    }
    return out;
}

struct WordsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& w) const
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : w) {
            h ^= v;
            h *= 1099511628211ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

std::size_t word_count(const Scenario& sc) { return (sc.cell_count() + 63) / 64; }

std::vector<std::uint64_t> to_words(const std::vector<std::uint32_t>& cells, std::size_t words)
{
    std::vector<std::uint64_t> w(words, 0);
    for (auto c : cells)
        w[c >> 6] |= std::uint64_t{1} << (c & 63);
    return w;
}

std::vector<std::uint32_t> from_words(const std::vector<std::uint64_t>& w)
{
    std::vector<std::uint32_t> cells;
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto v = w[i];
        while (v != 0) {
            const int b = __builtin_ctzll(v);
            cells.push_back(static_cast<std::uint32_t>(i * 64 + b));
            v &= v - 1;
        }
    }
    return cells;
}

// Orbit as bit words, in BFS order.
std::vector<std::vector<std::uint64_t>> orbit_words(const TableOfZeros& t, const GroupHandle& grp, std::size_t cap)
{
    if (!(t.scenario() == grp.scenario()))
        throw ScenarioMismatchError("table and group belong to different scenarios");
    const std::size_t words = word_count(t.scenario());
    std::unordered_set<std::vector<std::uint64_t>, WordsHash> seen;
    std::vector<std::vector<std::uint64_t>> order;
    auto start = to_words(t.cells(), words);
    seen.insert(start);
    order.push_back(std::move(start));
    std::vector<std::uint32_t> image;
    for (std::size_t head = 0; head < order.size(); ++head) {
        const auto cells = from_words(order[head]);
        for (const auto& g : grp.cell_generators()) {
            std::vector<std::uint64_t> w(words, 0);
            for (auto c : cells) {
                const auto d = g[c];
                w[d >> 6] |= std::uint64_t{1} << (d & 63);
            }
            if (seen.insert(w).second) {
                if (order.size() >= cap)
                    throw SymmetryError("orbit exceeds the cap of " + std::to_string(cap) + " tables");
                order.push_back(std::move(w));
            }
        }
    }
    return order;
}

// Lexicographic comparison of the sorted cell lists of two equal-size sets.
bool words_lex_less(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b)
{
    // The first differing cell decides: the set holding the smaller one is less.
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto d = a[i] ^ b[i];
        if (d != 0) {
            const auto low = d & (~d + 1);
            return (a[i] & low) != 0;
        }
    }
    return false;
}

std::vector<TableOfZeros> reduce_pass(const std::vector<TableOfZeros>& sorted, const GroupHandle& grp)
{
    const Scenario& sc = grp.scenario();
    const std::size_t words = word_count(sc);
    // Orbit images of kept tables bucketed by their least cell, stored flat.
    std::vector<std::vector<std::uint64_t>> buckets(sc.cell_count());
    std::vector<TableOfZeros> kept;
    for (const auto& t : sorted) {
        const auto tw = to_words(t.cells(), words);
        bool dominated = false;
        for (auto c : t.cells()) {
            const auto& bucket = buckets[c];
            for (std::size_t off = 0; off < bucket.size() && !dominated; off += words) {
                bool sub = true;
                for (std::size_t i = 0; i < words; ++i)
                    if ((bucket[off + i] & ~tw[i]) != 0) {
                        sub = false;
                        break;
                    }
                dominated = sub;
            }
            if (dominated)
                break;
        }
        if (dominated)
            continue;
        auto orb = orbit_words(t, grp, 20'000'000);
        const std::vector<std::uint64_t>* best = &orb.front();
        for (const auto& w : orb) {
            if (words_lex_less(w, *best))
                best = &w;
            std::uint32_t least = 0;
            for (std::size_t i = 0; i < words; ++i)
                if (w[i] != 0) {
                    least = static_cast<std::uint32_t>(i * 64 + __builtin_ctzll(w[i]));
                    break;
                }
            auto& bucket = buckets[least];
            bucket.insert(bucket.end(), w.begin(), w.end());
        }
        kept.emplace_back(sc, from_words(*best));
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

// Relabeling invariant used to bucket tables before orbit comparison: the
// multiset of block shapes plus the per-setting row and column zero totals.
std::vector<int> orbit_signature(const TableOfZeros& t)
{
    const Scenario& sc = t.scenario();
    std::vector<int> rows(static_cast<std::size_t>(sc.nx() * sc.ny() * sc.na()), 0);
    std::vector<int> cols(static_cast<std::size_t>(sc.nx() * sc.ny() * sc.nb()), 0);
    for (auto c : t.cells()) {
        const Cell k = sc.cell(c);
        ++rows[(k.x * sc.ny() + k.y) * sc.na() + k.a];
        ++cols[(k.x * sc.ny() + k.y) * sc.nb() + k.b];
    }
    std::vector<std::vector<int>> blocks;
    std::vector<std::vector<int>> row_tot(sc.nx(), std::vector<int>(sc.na(), 0));
    std::vector<std::vector<int>> col_tot(sc.ny(), std::vector<int>(sc.nb(), 0));
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y) {
            const auto r0 = rows.begin() + (x * sc.ny() + y) * sc.na();
            const auto c0 = cols.begin() + (x * sc.ny() + y) * sc.nb();
            std::vector<int> r(r0, r0 + sc.na()), c(c0, c0 + sc.nb());
            for (int a = 0; a < sc.na(); ++a)
                row_tot[x][a] += r[a];
            for (int b = 0; b < sc.nb(); ++b)
                col_tot[y][b] += c[b];
            std::sort(r.begin(), r.end());
            std::sort(c.begin(), c.end());
            r.insert(r.end(), c.begin(), c.end());
            blocks.push_back(std::move(r));
        }
    for (auto* v : {&row_tot, &col_tot}) {
        for (auto& e : *v)
            std::sort(e.begin(), e.end());
        std::sort(v->begin(), v->end());
    }
    std::sort(blocks.begin(), blocks.end());
    std::vector<int> out;
    for (const auto* v : {&blocks, &row_tot, &col_tot})
        for (const auto& e : *v)
            out.insert(out.end(), e.begin(), e.end());
    return out;
}

} // namespace

PartyElement PartyElement::identity(int settings, int outcomes)
{
    PartyElement p;
    p.setting.resize(settings);
    std::iota(p.setting.begin(), p.setting.end(), 0);
    p.output.assign(settings, std::vector<int>(outcomes));
    for (auto& o : p.output)
        std::iota(o.begin(), o.end(), 0);
    return p;
}

PartyElement PartyElement::operator*(const PartyElement& q) const
{
    PartyElement r;
    const std::size_t n = q.setting.size();
    r.setting.resize(n);
    r.output.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
        const int mid = q.setting[x];
        r.setting[x] = setting[mid];
        r.output[x].resize(q.output[x].size());
        for (std::size_t a = 0; a < q.output[x].size(); ++a)
            r.output[x][a] = output[mid][q.output[x][a]];
    }
    return r;
}

PartyElement PartyElement::inverse() const
{
    PartyElement r;
    const std::size_t n = setting.size();
    r.setting.resize(n);
    r.output.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
        const int y = setting[x];
        r.setting[y] = static_cast<int>(x);
        r.output[y].resize(output[x].size());
        for (std::size_t a = 0; a < output[x].size(); ++a)
            r.output[y][output[x][a]] = static_cast<int>(a);
    }
    return r;
}

BellGroupElement BellGroupElement::identity(const Scenario& sc)
{
    return {PartyElement::identity(sc.nx(), sc.na()), PartyElement::identity(sc.ny(), sc.nb())};
}

BellGroupElement BellGroupElement::random(const Scenario& sc, std::mt19937_64& rng)
{
    auto g = identity(sc);
    for (auto* p : {&g.alice, &g.bob}) {
        std::shuffle(p->setting.begin(), p->setting.end(), rng);
        for (auto& o : p->output)
            std::shuffle(o.begin(), o.end(), rng);
    }
    return g;
}

std::uint32_t BellGroupElement::map_cell(const Scenario& sc, std::uint32_t cell) const
{
    const Cell c = sc.cell(cell);
    return static_cast<std::uint32_t>(
        sc.index(alice.setting[c.x], bob.setting[c.y], alice.output[c.x][c.a], bob.output[c.y][c.b]));
}

std::vector<std::uint32_t> BellGroupElement::cell_permutation(const Scenario& sc) const
{
    std::vector<std::uint32_t> p(sc.cell_count());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = map_cell(sc, static_cast<std::uint32_t>(i));
    return p;
}

GroupHandle::GroupHandle(Scenario sc, Kind kind, std::vector<BellGroupElement> gens, mpz_class order)
    : sc_(sc), kind_(kind), gens_(std::move(gens)), order_(std::move(order))
{
    for (const auto& g : gens_)
        cell_gens_.push_back(g.cell_permutation(sc_));
}

mpz_class bell_group_order(const Scenario& sc)
{
    return party_order(sc.nx(), sc.na()) * party_order(sc.ny(), sc.nb());
}

GroupHandle bell_group(const Scenario& sc)
{
    std::vector<BellGroupElement> gens;
    for (const auto& p : party_generators(sc.nx(), sc.na()))
        gens.push_back({p, PartyElement::identity(sc.ny(), sc.nb())});
    for (const auto& p : party_generators(sc.ny(), sc.nb()))
        gens.push_back({PartyElement::identity(sc.nx(), sc.na()), p});
    return GroupHandle(sc, GroupHandle::Kind::full, std::move(gens), bell_group_order(sc));
}

GroupHandle output_subgroup(const Scenario& sc)
{
    std::vector<BellGroupElement> gens;
    for (const auto& p : party_output_generators(sc.nx(), sc.na()))
        gens.push_back({p, PartyElement::identity(sc.ny(), sc.nb())});
    for (const auto& p : party_output_generators(sc.ny(), sc.nb()))
        gens.push_back({PartyElement::identity(sc.nx(), sc.na()), p});
    mpz_class order;
    mpz_class fa = factorial(sc.na()), fb = factorial(sc.nb());
    mpz_class oa, ob;
    mpz_pow_ui(oa.get_mpz_t(), fa.get_mpz_t(), static_cast<unsigned long>(sc.nx()));
    mpz_pow_ui(ob.get_mpz_t(), fb.get_mpz_t(), static_cast<unsigned long>(sc.ny()));
    return GroupHandle(sc, GroupHandle::Kind::outputs_only, std::move(gens), oa * ob);
}

mpz_class permutation_group_order(const std::vector<std::vector<std::uint32_t>>& gens, std::size_t degree)
{
    SchreierSims chain(degree);
    for (const auto& g : gens) {
        if (g.size() != degree)
            throw DimensionMismatchError("generator degree does not match");
        chain.insert(g);
    }
    return chain.order();
}

std::uint64_t closure_size(const GroupHandle& grp, std::uint64_t cap)
{
    struct PermHash {
        std::size_t operator()(const Perm& p) const
        {
            std::uint64_t h = 1469598103934665603ULL;
            for (auto v : p)
                h = (h ^ v) * 1099511628211ULL;
            return static_cast<std::size_t>(h);
        }
    };
    Perm id(grp.scenario().cell_count());
    std::iota(id.begin(), id.end(), 0U);
    std::unordered_set<Perm, PermHash> seen{id};
    std::vector<Perm> queue{id};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (const auto& g : grp.cell_generators()) {
            auto p = compose(g, queue[head]);
            if (seen.insert(p).second) {
                if (seen.size() > cap)
                    return cap + 1;
                queue.push_back(std::move(p));
            }
        }
    }
    return seen.size();
}

TableOfZeros act(const BellGroupElement& g, const TableOfZeros& t)
{
    std::vector<std::uint32_t> cells;
    cells.reserve(t.size());
    for (auto c : t.cells())
        cells.push_back(g.map_cell(t.scenario(), c));
    return TableOfZeros(t.scenario(), std::move(cells));
}

std::vector<TableOfZeros> orbit(const TableOfZeros& t, const GroupHandle& grp, std::size_t cap)
{
    auto words = orbit_words(t, grp, cap);
    std::vector<TableOfZeros> out;
    out.reserve(words.size());
    for (const auto& w : words)
        out.emplace_back(t.scenario(), from_words(w));
    std::sort(out.begin(), out.end());
    return out;
}

TableOfZeros canonical_form(const TableOfZeros& t, const GroupHandle& grp)
{
    auto words = orbit_words(t, grp, 20'000'000);
    const std::vector<std::uint64_t>* best = &words.front();
    for (const auto& w : words)
        if (words_lex_less(w, *best))
            best = &w;
    return TableOfZeros(t.scenario(), from_words(*best));
}

std::vector<TableOfZeros> group_reduce(std::vector<TableOfZeros> tables, const GroupHandle& grp,
                                       const GroupHandle* subgroup)
{
    for (const auto& t : tables)
        if (!(t.scenario() == grp.scenario()))
            throw ScenarioMismatchError("table and group belong to different scenarios");
    std::sort(tables.begin(), tables.end());
    tables.erase(std::unique(tables.begin(), tables.end()), tables.end());
    if (subgroup != nullptr)
        tables = reduce_pass(tables, *subgroup);
    return reduce_pass(tables, grp);
}

std::vector<TableOfZeros> orbit_classes(std::vector<TableOfZeros> tables, const GroupHandle& grp)
{
    for (const auto& t : tables)
        if (!(t.scenario() == grp.scenario()))
            throw ScenarioMismatchError("table and group belong to different scenarios");
    std::sort(tables.begin(), tables.end());
    tables.erase(std::unique(tables.begin(), tables.end()), tables.end());
    std::map<std::vector<int>, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < tables.size(); ++i)
        buckets[orbit_signature(tables[i])].push_back(i);

    const std::size_t words = word_count(grp.scenario());
    std::vector<TableOfZeros> kept;
    for (const auto& [sig, members] : buckets) {
        // Images only need to be remembered within one bucket.
        std::unordered_set<std::vector<std::uint64_t>, WordsHash> seen;
        for (auto i : members) {
            if (seen.count(to_words(tables[i].cells(), words)) != 0)
                continue;
            auto orb = orbit_words(tables[i], grp, 20'000'000);
            const std::vector<std::uint64_t>* best = &orb.front();
            for (const auto& w : orb)
                if (words_lex_less(w, *best))
                    best = &w;
            kept.emplace_back(grp.scenario(), from_words(*best));
            seen.insert(std::make_move_iterator(orb.begin()), std::make_move_iterator(orb.end()));
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace bellnl
