#include "bellnl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellnl/parallel.hpp"

namespace bellnl {

namespace {

template <class W> struct Exactness {
    static bool greater(const W& a, const W& b, double) { return a > b; }
    static bool equal(const W& a, const W& b, double) { return a == b; }
};
template <> struct Exactness<double> {
    static bool greater(double a, double b, double tol) { return a > b + tol; }
    static bool equal(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
};

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b)
{
    return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

// Enumerated party has settings s (outcomes o); the responder has settings r (outcomes q).
// Weight layout: [s][o][r][q].
template <class W> struct Search {
    int ns, no, nr, nq;
    std::vector<W> w;
    double tol;
    std::size_t limit;

    const W& at(int s, int o, int r, int q) const
    {
        return w[((static_cast<std::size_t>(s) * no + o) * nr + r) * nq + q];
    }

    struct Partial {
        bool any = false;
        W best{};
        std::uint64_t count = 0;
        // pairs (enumerated outcomes, responder outcomes)
        std::vector<std::pair<std::vector<int>, std::vector<int>>> found;
        bool truncated = false;
    };

    void run_chunk(const std::vector<int>& prefix, Partial& out) const
    {
        const int k = static_cast<int>(prefix.size());
        std::vector<int> a(ns, 0);
        std::copy(prefix.begin(), prefix.end(), a.begin());
        std::vector<W> g(static_cast<std::size_t>(nr) * nq, W{});
        for (int s = 0; s < ns; ++s)
            for (int r = 0; r < nr; ++r)
                for (int q = 0; q < nq; ++q)
                    g[r * nq + q] += at(s, a[s], r, q);
        std::vector<W> rowmax(nr);
        std::vector<std::vector<int>> ties(nr);
        while (true) {
            W value{};
            for (int r = 0; r < nr; ++r) {
                W m = g[r * nq];
                for (int q = 1; q < nq; ++q)
                    if (Exactness<W>::greater(g[r * nq + q], m, 0.0))
                        m = g[r * nq + q];
                rowmax[r] = m;
                value += m;
            }
            bool better = !out.any || Exactness<W>::greater(value, out.best, tol);
            bool same = out.any && !better && Exactness<W>::equal(value, out.best, tol);
            if (better || same) {
                std::uint64_t c = 1;
                for (int r = 0; r < nr; ++r) {
                    ties[r].clear();
                    for (int q = 0; q < nq; ++q)
                        if (Exactness<W>::equal(g[r * nq + q], rowmax[r], tol))
                            ties[r].push_back(q);
                    c = sat_mul(c, ties[r].size());
                }
                if (better) {
                    out.any = true;
                    out.best = value;
                    out.count = 0;
                    out.found.clear();
                    out.truncated = false;
                }
                out.count = sat_add(out.count, c);
                if (limit > 0) {
                    std::vector<std::size_t> idx(nr, 0);
                    while (true) {
                        if (out.found.size() >= limit) {
                            out.truncated = true;
                            break;
                        }
                        std::vector<int> resp(nr);
                        for (int r = 0; r < nr; ++r)
                            resp[r] = ties[r][idx[r]];
                        out.found.push_back({a, std::move(resp)});
                        int r = nr - 1;
                        while (r >= 0 && ++idx[r] == ties[r].size())
                            idx[r--] = 0;
                        if (r < 0)
                            break;
                    }
                } else if (c > 0) {
                    out.truncated = true;
                }
            }
            // Odometer over the free digits; the last setting moves fastest.
            int s = ns - 1;
            while (s >= k) {
                const int old = a[s];
                const int nw = old + 1 < no ? old + 1 : 0;
                for (int r = 0; r < nr; ++r)
                    for (int q = 0; q < nq; ++q)
                        g[r * nq + q] += at(s, nw, r, q) - at(s, old, r, q);
                a[s] = nw;
                if (nw != 0)
                    break;
                --s;
            }
            if (s < k)
                return;
        }
    }

    Partial run() const
    {
        // Fix enough leading digits to give every worker several chunks.
        int k = 0;
        std::size_t chunks = 1;
        const std::size_t want = 8 * thread_count();
        while (k < ns && chunks < want && thread_count() > 1) {
            chunks *= no;
            ++k;
        }
        std::vector<Partial> parts(chunks);
        parallel_for(chunks, [&](std::size_t c) {
            std::vector<int> prefix(k);
            std::size_t v = c;
            for (int i = k - 1; i >= 0; --i) {
                prefix[i] = static_cast<int>(v % no);
                v /= no;
            }
            run_chunk(prefix, parts[c]);
        });
        Partial total;
        for (auto& p : parts) {
            if (!p.any)
                continue;
            if (!total.any || Exactness<W>::greater(p.best, total.best, tol)) {
                total = std::move(p);
            } else if (Exactness<W>::equal(p.best, total.best, tol)) {
                total.count = sat_add(total.count, p.count);
                total.truncated = total.truncated || p.truncated;
                for (auto& f : p.found) {
                    if (limit > 0 && total.found.size() >= limit) {
                        total.truncated = true;
                        break;
                    }
                    total.found.push_back(std::move(f));
                }
            }
        }
        return total;
    }
};

template <class W>
VertexSearchResult<W> run_search(const Scenario& sc, const std::vector<W>& weights, std::size_t limit, double tol)
{
    const bool swap = std::pow(static_cast<double>(sc.nb()), sc.ny()) < std::pow(static_cast<double>(sc.na()), sc.nx());
    Search<W> s;
    s.tol = tol;
    s.limit = limit;
    if (!swap) {
        s.ns = sc.nx();
        s.no = sc.na();
        s.nr = sc.ny();
        s.nq = sc.nb();
    } else {
        s.ns = sc.ny();
        s.no = sc.nb();
        s.nr = sc.nx();
        s.nq = sc.na();
    }
    s.w.resize(sc.cell_count());
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y)
            for (int a = 0; a < sc.na(); ++a)
                for (int b = 0; b < sc.nb(); ++b) {
                    const W& v = weights[sc.index(x, y, a, b)];
                    if (!swap)
                        s.w[((static_cast<std::size_t>(x) * sc.na() + a) * sc.ny() + y) * sc.nb() + b] = v;
                    else
                        s.w[((static_cast<std::size_t>(y) * sc.nb() + b) * sc.nx() + x) * sc.na() + a] = v;
                }
    auto part = s.run();
    VertexSearchResult<W> res;
    res.best = part.best;
    res.count = part.count;
    res.truncated = part.truncated && limit > 0;
    for (auto& [e, r] : part.found) {
        DeterministicStrategy d;
        if (!swap) {
            d.alice = std::move(e);
            d.bob = std::move(r);
        } else {
            d.alice = std::move(r);
            d.bob = std::move(e);
        }
        res.optimizers.push_back(std::move(d));
    }
    std::sort(res.optimizers.begin(), res.optimizers.end());
    return res;
}

} // namespace

template <>
VertexSearchResult<double> maximize_over_vertices(const Scenario& sc, const std::vector<double>& weights,
                                                  std::size_t collect_limit, double tol)
{
    if (weights.size() != sc.cell_count())
        throw DimensionMismatchError("weight vector does not match the scenario");
    return run_search<double>(sc, weights, collect_limit, tol);
}

template <>
VertexSearchResult<Rational> maximize_over_vertices(const Scenario& sc, const std::vector<Rational>& weights,
                                                    std::size_t collect_limit, double)
{
    if (weights.size() != sc.cell_count())
        throw DimensionMismatchError("weight vector does not match the scenario");
    mpz_class l = 1;
    for (const auto& w : weights)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), w.get_den_mpz_t());
    mpz_class maxabs = 0;
    std::vector<mpz_class> scaled(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        scaled[i] = weights[i].get_num() * (l / weights[i].get_den());
        if (abs(scaled[i]) > maxabs)
            maxabs = abs(scaled[i]);
    }
    // Every partial sum involves at most 2 |X||Y| weights.
    mpz_class bound = maxabs * (2 * static_cast<long>(sc.nx()) * sc.ny() + 2);
    if (bound < (mpz_class(1) << 62)) {
        std::vector<std::int64_t> w(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i)
            w[i] = scaled[i].get_si();
        auto r = run_search<std::int64_t>(sc, w, collect_limit, 0.0);
        VertexSearchResult<Rational> out;
        out.best = Rational(mpz_class(static_cast<long>(r.best)), l);
        out.best.canonicalize();
        out.count = r.count;
        out.truncated = r.truncated;
        out.optimizers = std::move(r.optimizers);
        return out;
    }
    return run_search<Rational>(sc, weights, collect_limit, 0.0);
}

template <class T> T vertex_value(const Scenario& sc, const std::vector<T>& weights, const DeterministicStrategy& s)
{
    check_strategy(s, sc);
    T v{};
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y)
            v += weights[sc.index(x, y, s.alice[x], s.bob[y])];
    return v;
}

template Rational vertex_value(const Scenario&, const std::vector<Rational>&, const DeterministicStrategy&);
template double vertex_value(const Scenario&, const std::vector<double>&, const DeterministicStrategy&);
template std::int64_t vertex_value(const Scenario&, const std::vector<std::int64_t>&, const DeterministicStrategy&);

std::vector<DeterministicStrategy> enumerate_local_vertices(const Scenario& sc, std::uint64_t cap)
{
    const std::uint64_t total = strategy_count(sc);
    if (total > cap)
        throw EnumerationTooLargeError("scenario " + sc.to_string() + " has " + std::to_string(total) +
                                       " deterministic strategies, above the cap " + std::to_string(cap));
    std::vector<DeterministicStrategy> out;
    out.reserve(total);
    std::vector<int> digits(sc.nx() + sc.ny(), 0);
    auto radix = [&](std::size_t i) { return i < static_cast<std::size_t>(sc.nx()) ? sc.na() : sc.nb(); };
    while (true) {
        DeterministicStrategy s;
        s.alice.assign(digits.begin(), digits.begin() + sc.nx());
        s.bob.assign(digits.begin() + sc.nx(), digits.end());
        out.push_back(std::move(s));
        int i = static_cast<int>(digits.size()) - 1;
        while (i >= 0 && ++digits[i] == radix(i))
            digits[i--] = 0;
        if (i < 0)
            break;
    }
    return out;
}

std::vector<std::uint32_t> vertex_support(const Scenario& sc, const DeterministicStrategy& s)
{
    std::vector<std::uint32_t> out;
    out.reserve(static_cast<std::size_t>(sc.nx()) * sc.ny());
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y)
            out.push_back(static_cast<std::uint32_t>(sc.index(x, y, s.alice[x], s.bob[y])));
    return out;
}

} // namespace bellnl
