#include "bellnl/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "bellnl/lp.hpp"
#include "bellnl/matrix.hpp"

namespace bellnl {

BellExpression::BellExpression(Scenario sc, std::vector<Rational> coef) : scenario(sc), coefficients(std::move(coef))
{
    if (coefficients.size() != sc.cell_count())
        throw IncompleteTableError("Bell expression has " + std::to_string(coefficients.size()) +
                                   " coefficients, scenario " + sc.to_string() + " needs " +
                                   std::to_string(sc.cell_count()));
}

std::vector<double> BellExpression::float_coefficients() const
{
    std::vector<double> out(coefficients.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = coefficients[i].get_d();
    return out;
}

Rational evaluate(const BellExpression& e, const ExactBehavior& p)
{
    if (!(e.scenario == p.scenario()))
        throw ScenarioMismatchError("expression and behavior scenarios differ");
    Rational v = 0;
    for (std::size_t i = 0; i < e.coefficients.size(); ++i)
        if (sgn(e.coefficients[i]) != 0)
            v += e.coefficients[i] * p[i];
    return v;
}

double evaluate(const BellExpression& e, const FloatBehavior& p)
{
    if (!(e.scenario == p.scenario()))
        throw ScenarioMismatchError("expression and behavior scenarios differ");
    double v = 0;
    for (std::size_t i = 0; i < e.coefficients.size(); ++i)
        v += e.coefficients[i].get_d() * p[i];
    return v;
}

BellExpression ch_expression()
{
    BellExpression e(Scenario(2, 2, 2, 2));
    // p(00|00) + p(00|01) + p(00|10) - p(00|11) - pA(0|0) - pB(0|0), expanded on full cells.
    e(0, 0, 0, 0) = -1;
    e(0, 0, 0, 1) = -1;
    e(0, 0, 1, 0) = -1;
    e(0, 1, 0, 0) = 1;
    e(1, 0, 0, 0) = 1;
    e(1, 1, 0, 0) = -1;
    e.local_bound = Rational(0);
    e.quantum_bound = (std::sqrt(2.0) - 1.0) / 2.0;
    e.ns_bound = Rational(1, 2);
    return e;
}

BellExpression chsh_correlator_expression()
{
    BellExpression e(Scenario(2, 2, 2, 2));
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    int s = (a ^ b) ? -1 : 1;
                    if (x == 1 && y == 1)
                        s = -s;
                    e(x, y, a, b) = s;
                }
    e.local_bound = Rational(2);
    e.quantum_bound = 2.0 * std::sqrt(2.0);
    e.ns_bound = Rational(4);
    return e;
}

Rational local_value(const BellExpression& e)
{
    return maximize_over_vertices(e.scenario, e.coefficients).best;
}

Rational min_vertex_value(const BellExpression& e)
{
    std::vector<Rational> neg(e.coefficients.size());
    for (std::size_t i = 0; i < neg.size(); ++i)
        neg[i] = -e.coefficients[i];
    return -maximize_over_vertices(e.scenario, neg).best;
}

namespace {

template <class T> bool is_zero_entry(const T& v, double tol)
{
    if constexpr (ScalarTraits<T>::exact)
        return sgn(v) == 0;
    else
        return v <= tol;
}

template <class T>
LocalContentResultT<T> local_content_impl(const BehaviorT<T>& p, const LocalContentOptions& opt)
{
    using Tr = ScalarTraits<T>;
    const Scenario& sc = p.scenario();
    const double vtol = Tr::exact ? 0.0 : 1e-9;
    if (auto rep = validate_behavior(p, vtol); !rep.valid())
        throw InvalidBehaviorError("behavior is invalid: " + to_string(rep.violations.front().kind) + " violated at " +
                                   rep.violations.front().where);

    const std::size_t cells = sc.cell_count();
    std::vector<bool> zero(cells);
    std::vector<long> row_of(cells, -1);
    std::vector<T> b;
    for (std::size_t c = 0; c < cells; ++c) {
        zero[c] = is_zero_entry(p[c], opt.zero_tol);
        if (!zero[c]) {
            row_of[c] = static_cast<long>(b.size());
            b.push_back(p[c]);
        }
    }

    LocalContentResultT<T> res;
    res.dual = BellExpression(sc);
    res.dual.exact = Tr::exact;

    // Presolve: a vertex can carry weight only if it avoids every zero of p.
    std::vector<Rational> hits(cells, Rational(0));
    for (std::size_t c = 0; c < cells; ++c)
        if (zero[c])
            hits[c] = -1;
    auto avoid = maximize_over_vertices(sc, hits, 64);
    if (sgn(avoid.best) < 0) {
        res.q_local = Tr::zero();
        res.q_nonlocal = Tr::one();
        for (std::size_t c = 0; c < cells; ++c)
            res.dual.coefficients[c] = zero[c] ? 1 : 0;
        return res;
    }

    SimplexCore<T> core(b, 1e-10);
    const std::size_t m = b.size();
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t s = core.add_column({{{static_cast<std::uint32_t>(i), Tr::one()}}, Tr::zero()});
        core.set_initial_basic(i, s);
    }
    std::vector<DeterministicStrategy> columns;
    std::set<DeterministicStrategy> present;
    auto add_vertex = [&](const DeterministicStrategy& s) {
        if (!present.insert(s).second)
            return false;
        typename SimplexCore<T>::Column col;
        col.cost = Tr::one();
        for (auto c : vertex_support(sc, s))
            col.entries.push_back({static_cast<std::uint32_t>(row_of[c]), Tr::one()});
        std::sort(col.entries.begin(), col.entries.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        core.add_column(std::move(col));
        columns.push_back(s);
        return true;
    };

    const bool full = strategy_count(sc) <= opt.full_column_limit;
    if (full) {
        for (const auto& s : enumerate_local_vertices(sc, opt.vertex_cap)) {
            bool ok = true;
            for (auto c : vertex_support(sc, s))
                if (zero[c]) {
                    ok = false;
                    break;
                }
            if (ok)
                add_vertex(s);
        }
    } else {
        for (const auto& s : avoid.optimizers)
            add_vertex(s);
    }

    auto pricing = [&](SimplexCore<T>& lp) {
        if (full)
            return false;
        const std::vector<T> y = lp.duals();
        T big = Tr::one();
        for (const auto& v : y)
            big += v < 0 ? T(-v) : v;
        std::vector<T> w(cells);
        for (std::size_t c = 0; c < cells; ++c)
            w[c] = zero[c] ? -big : -y[row_of[c]];
        auto best = maximize_over_vertices(sc, w, 16, 1e-12);
        // Reduced cost of the best column is 1 + best.
        if (Tr::sign(Tr::one() + best.best, 1e-10) <= 0)
            return false;
        bool added = false;
        for (const auto& s : best.optimizers)
            added = add_vertex(s) || added;
        return added;
    };
    auto outcome = core.optimize(pricing);
    if (outcome != SimplexCore<T>::Outcome::optimal)
        throw Error("local-content LP did not reach optimality");

    res.q_local = core.objective();
    res.q_nonlocal = Tr::one() - res.q_local;
    res.columns = columns.size();
    res.iterations = core.iterations();
    const std::vector<T> x = core.primal();
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const T& q = x[m + j];
        if (Tr::sign(q, 0.0) > 0)
            res.weights.push_back({columns[j], q});
    }
    const std::vector<T> y = core.duals();
    for (std::size_t c = 0; c < cells; ++c) {
        if (zero[c]) {
            res.dual.coefficients[c] = 1;
        } else {
            T v = y[row_of[c]];
            if constexpr (Tr::exact)
                res.dual.coefficients[c] = v;
            else
                res.dual.coefficients[c] = rational_from_double(std::max(0.0, v));
        }
    }
    if constexpr (Tr::exact) {
        if (min_vertex_value(res.dual) < 1)
            throw Error("local-content dual certificate failed verification");
    }
    return res;
}

} // namespace

LocalContentResult local_content(const ExactBehavior& p, const LocalContentOptions& opt)
{
    return local_content_impl(p, opt);
}

FloatLocalContentResult local_content(const FloatBehavior& p, const LocalContentOptions& opt)
{
    return local_content_impl(p, opt);
}

Rational ns_value(const BellExpression& e)
{
    const Scenario& sc = e.scenario;
    LinearProgram lp;
    lp.num_vars = sc.cell_count();
    lp.objective = e.coefficients;
    lp.maximize = true;
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y) {
            std::vector<std::pair<std::size_t, Rational>> t;
            for (int a = 0; a < sc.na(); ++a)
                for (int b = 0; b < sc.nb(); ++b)
                    t.push_back({sc.index(x, y, a, b), Rational(1)});
            lp.add_row(std::move(t), Sense::eq, Rational(1));
        }
    // Marginals: one outcome per setting is implied by normalization, so it is skipped.
    for (int x = 0; x < sc.nx(); ++x)
        for (int a = 0; a + 1 < sc.na(); ++a)
            for (int y = 1; y < sc.ny(); ++y) {
                std::vector<std::pair<std::size_t, Rational>> t;
                for (int b = 0; b < sc.nb(); ++b) {
                    t.push_back({sc.index(x, y, a, b), Rational(1)});
                    t.push_back({sc.index(x, 0, a, b), Rational(-1)});
                }
                lp.add_row(std::move(t), Sense::eq, Rational(0));
            }
    for (int y = 0; y < sc.ny(); ++y)
        for (int b = 0; b + 1 < sc.nb(); ++b)
            for (int x = 1; x < sc.nx(); ++x) {
                std::vector<std::pair<std::size_t, Rational>> t;
                for (int a = 0; a < sc.na(); ++a) {
                    t.push_back({sc.index(x, y, a, b), Rational(1)});
                    t.push_back({sc.index(0, y, a, b), Rational(-1)});
                }
                lp.add_row(std::move(t), Sense::eq, Rational(0));
            }
    auto r = lp_solve(lp);
    if (r.status != LpStatus::optimal)
        throw Error("nonsignaling LP is not optimal");
    return r.value;
}

std::size_t vertex_rank(const Scenario& sc, const std::vector<DeterministicStrategy>& vs)
{
    std::vector<std::vector<std::uint32_t>> rows;
    rows.reserve(vs.size());
    for (const auto& s : vs)
        rows.push_back(vertex_support(sc, s));
    return certified_rank_01(rows, sc.cell_count());
}

std::size_t vertex_affine_rank(const Scenario& sc, const std::vector<DeterministicStrategy>& vs)
{
    if (vs.size() <= 1)
        return 0;
    const auto base = vertex_support(sc, vs.front());
    std::vector<SparseIntRow> rows;
    for (std::size_t i = 1; i < vs.size(); ++i) {
        std::map<std::uint32_t, std::int64_t> d;
        for (auto c : vertex_support(sc, vs[i]))
            d[c] += 1;
        for (auto c : base)
            d[c] -= 1;
        SparseIntRow r;
        for (const auto& [c, v] : d)
            if (v != 0) {
                r.cols.push_back(c);
                r.vals.push_back(v);
            }
        rows.push_back(std::move(r));
    }
    return certified_rank(rows, sc.cell_count());
}

SaturationResult saturating_vertices(const BellExpression& e, const Rational& bound, const VertexGenerator& generator,
                                     std::uint64_t cap)
{
    const Scenario& sc = e.scenario;
    SaturationResult res;
    if (generator) {
        for (auto& s : generator())
            if (vertex_value(sc, e.coefficients, s) == bound)
                res.vertices.push_back(std::move(s));
        std::sort(res.vertices.begin(), res.vertices.end());
        res.vertices.erase(std::unique(res.vertices.begin(), res.vertices.end()), res.vertices.end());
    } else {
        auto top = maximize_over_vertices(sc, e.coefficients, 1);
        if (bound > top.best)
            return res;
        if (bound == top.best) {
            auto all = maximize_over_vertices(sc, e.coefficients, std::size_t{1} << 26);
            if (all.truncated)
                throw EnumerationTooLargeError("too many saturating vertices to list");
            res.vertices = std::move(all.optimizers);
        } else {
            for (auto& s : enumerate_local_vertices(sc, cap))
                if (vertex_value(sc, e.coefficients, s) == bound)
                    res.vertices.push_back(std::move(s));
        }
    }
    res.count = res.vertices.size();
    res.linear_rank = vertex_rank(sc, res.vertices);
    res.affine_rank = vertex_affine_rank(sc, res.vertices);
    return res;
}

TightnessReport tightness_verdict(const BellExpression& e, const Rational& local_bound, const VertexGenerator& generator)
{
    TightnessReport rep;
    rep.required_rank = ns_dimension(e.scenario);
    const Rational best = local_value(e);
    if (best > local_bound)
        throw Error("the stated local bound " + rational_to_string(local_bound) + " is violated by a vertex with value " +
                    rational_to_string(best));
    auto sat = saturating_vertices(e, local_bound, generator);
    rep.saturating = sat.count;
    rep.linear_rank = sat.linear_rank;
    rep.affine_rank = sat.affine_rank;
    rep.tight = static_cast<long long>(sat.linear_rank) == rep.required_rank;
    return rep;
}

ExactBehavior rationalize_collins_gisin(const FloatBehavior& p, int bits)
{
    const Scenario& sc = p.scenario();
    const double scale = std::ldexp(1.0, bits);
    const mpz_class den = mpz_class(1) << bits;
    auto grid = [&](double v) {
        Rational q(mpz_class(std::nearbyint(v * scale)), den);
        q.canonicalize();
        return q;
    };
    // Marginals are averaged over the other party's settings before rounding.
    std::vector<Rational> pa(static_cast<std::size_t>(sc.nx()) * sc.na());
    std::vector<Rational> pb(static_cast<std::size_t>(sc.ny()) * sc.nb());
    for (int x = 0; x < sc.nx(); ++x)
        for (int a = 0; a < sc.na(); ++a) {
            double s = 0;
            for (int y = 0; y < sc.ny(); ++y)
                for (int b = 0; b < sc.nb(); ++b)
                    s += p(x, y, a, b);
            pa[x * sc.na() + a] = grid(s / sc.ny());
        }
    for (int y = 0; y < sc.ny(); ++y)
        for (int b = 0; b < sc.nb(); ++b) {
            double s = 0;
            for (int x = 0; x < sc.nx(); ++x)
                for (int a = 0; a < sc.na(); ++a)
                    s += p(x, y, a, b);
            pb[y * sc.nb() + b] = grid(s / sc.nx());
        }
    ExactBehavior out(sc);
    const int A = sc.na(), B = sc.nb();
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y) {
            Rational sumj = 0;
            for (int a = 0; a + 1 < A; ++a)
                for (int b = 0; b + 1 < B; ++b) {
                    out(x, y, a, b) = grid(p(x, y, a, b));
                    sumj += out(x, y, a, b);
                }
            for (int a = 0; a + 1 < A; ++a) {
                Rational r = pa[x * A + a];
                for (int b = 0; b + 1 < B; ++b)
                    r -= out(x, y, a, b);
                out(x, y, a, B - 1) = r;
            }
            for (int b = 0; b + 1 < B; ++b) {
                Rational r = pb[y * B + b];
                for (int a = 0; a + 1 < A; ++a)
                    r -= out(x, y, a, b);
                out(x, y, A - 1, b) = r;
            }
            Rational last = 1 + sumj;
            for (int a = 0; a + 1 < A; ++a)
                last -= pa[x * A + a];
            for (int b = 0; b + 1 < B; ++b)
                last -= pb[y * B + b];
            out(x, y, A - 1, B - 1) = last;
        }
    auto rep = validate_behavior(out, 0.0);
    if (!rep.valid())
        throw RationalizationError("Collins-Gisin rounding produced an invalid behavior (" +
                                   to_string(rep.violations.front().kind) + " at " + rep.violations.front().where + ")");
    return out;
}

} // namespace bellnl
