#include "bellnl/lp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace bellnl {

template <class T>
SimplexCore<T>::SimplexCore(std::vector<T> b, double tol)
    : b_(std::move(b)), basis_(b_.size(), static_cast<std::size_t>(-1)), tol_(tol)
{
    const std::size_t m = b_.size();
    binv_.assign(m * m, ScalarTraits<T>::zero());
    for (std::size_t i = 0; i < m; ++i)
        binv_[i * m + i] = ScalarTraits<T>::one();
    xb_ = b_;
    for (const auto& v : b_)
        if (ScalarTraits<T>::sign(v, tol_) < 0)
            throw StructuralError("simplex right-hand side must be nonnegative");
}

template <class T> std::size_t SimplexCore<T>::add_column(Column c, bool enterable)
{
    for (const auto& [r, v] : c.entries)
        if (r >= b_.size())
            throw StructuralError("column entry outside the row range");
    cols_.push_back(std::move(c));
    enterable_.push_back(enterable);
    pos_.push_back(-1);
    return cols_.size() - 1;
}

template <class T> void SimplexCore<T>::set_initial_basic(std::size_t row, std::size_t col)
{
    const auto& e = cols_.at(col).entries;
    if (e.size() != 1 || e[0].first != row || e[0].second != ScalarTraits<T>::one())
        throw StructuralError("initial basic column must be a unit vector");
    basis_[row] = col;
    pos_[col] = static_cast<long>(row);
}

template <class T> bool SimplexCore<T>::positive(const T& v) const
{
    return ScalarTraits<T>::sign(v, tol_) > 0;
}

template <class T> std::vector<T> SimplexCore<T>::duals() const
{
    const std::size_t m = b_.size();
    std::vector<T> y(m, ScalarTraits<T>::zero());
    for (std::size_t i = 0; i < m; ++i) {
        const T& cb = cols_[basis_[i]].cost;
        if (ScalarTraits<T>::is_zero(cb, 0.0))
            continue;
        for (std::size_t k = 0; k < m; ++k)
            if (!ScalarTraits<T>::is_zero(binv_[i * m + k], 0.0))
                y[k] += cb * binv_[i * m + k];
    }
    return y;
}

template <class T> T SimplexCore<T>::reduced_cost(const Column& c, const std::vector<T>& y) const
{
    T d = c.cost;
    for (const auto& [r, v] : c.entries)
        d -= y[r] * v;
    return d;
}

template <class T> T SimplexCore<T>::reduced_cost(std::size_t col, const std::vector<T>& y) const
{
    return reduced_cost(cols_[col], y);
}

template <class T> T SimplexCore<T>::objective() const
{
    T v = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < b_.size(); ++i)
        v += cols_[basis_[i]].cost * xb_[i];
    return v;
}

template <class T> std::vector<T> SimplexCore<T>::primal() const
{
    std::vector<T> x(cols_.size(), ScalarTraits<T>::zero());
    for (std::size_t i = 0; i < b_.size(); ++i)
        x[basis_[i]] = xb_[i];
    return x;
}

template <class T> std::vector<T> SimplexCore<T>::solve_column(const Column& c) const
{
    const std::size_t m = b_.size();
    std::vector<T> u(m, ScalarTraits<T>::zero());
    for (const auto& [r, v] : c.entries)
        for (std::size_t i = 0; i < m; ++i)
            if (!ScalarTraits<T>::is_zero(binv_[i * m + r], 0.0))
                u[i] += binv_[i * m + r] * v;
    return u;
}

template <class T> void SimplexCore<T>::pivot(std::size_t r, std::size_t col, const std::vector<T>& u)
{
    const std::size_t m = b_.size();
    const T piv = u[r];
    for (std::size_t k = 0; k < m; ++k)
        binv_[r * m + k] /= piv;
    xb_[r] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
        if (i == r || ScalarTraits<T>::is_zero(u[i], 0.0))
            continue;
        const T f = u[i];
        for (std::size_t k = 0; k < m; ++k)
            if (!ScalarTraits<T>::is_zero(binv_[r * m + k], 0.0))
                binv_[i * m + k] -= f * binv_[r * m + k];
        xb_[i] -= f * xb_[r];
    }
    pos_[basis_[r]] = -1;
    basis_[r] = col;
    pos_[col] = static_cast<long>(r);
    ++iterations_;
    if constexpr (!ScalarTraits<T>::exact) {
        if (++since_refactor_ >= 100)
            refactor();
    }
}

template <class T> void SimplexCore<T>::refactor()
{
    if constexpr (!ScalarTraits<T>::exact) {
        const std::size_t m = b_.size();
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (const auto& [r, v] : cols_[basis_[i]].entries)
                B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = v;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        Eigen::MatrixXd inv = lu.inverse();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k)
                binv_[i * m + k] = inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0;
            for (std::size_t k = 0; k < m; ++k)
                s += binv_[i * m + k] * b_[k];
            xb_[i] = std::max(0.0, s);
        }
        since_refactor_ = 0;
    }
}

template <class T>
typename SimplexCore<T>::Outcome SimplexCore<T>::optimize(const std::function<bool(SimplexCore&)>& generate,
                                                          std::size_t max_iterations)
{
    for (std::size_t j = 0; j < basis_.size(); ++j)
        if (basis_[j] == static_cast<std::size_t>(-1))
            throw StructuralError("simplex started without a full initial basis");
    std::size_t steps = 0;
    while (true) {
        if (steps++ > max_iterations)
            return Outcome::iteration_limit;
        const std::vector<T> y = duals();
        // Bland: lowest-index improving column enters.
        std::size_t enter = cols_.size();
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            if (!enterable_[j] || pos_[j] >= 0)
                continue;
            if (positive(reduced_cost(j, y))) {
                enter = j;
                break;
            }
        }
        if (enter == cols_.size()) {
            if (generate && generate(*this))
                continue;
            return Outcome::optimal;
        }
        const std::vector<T> u = solve_column(cols_[enter]);
        std::size_t leave = b_.size();
        T best{};
        for (std::size_t i = 0; i < b_.size(); ++i) {
            if (!positive(u[i]))
                continue;
            T ratio = xb_[i] / u[i];
            if (leave == b_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == b_.size())
            return Outcome::unbounded;
        pivot(leave, enter, u);
    }
}

namespace {

// Dense Gauss-Jordan inverse; false when singular.
template <class T> bool invert_dense(std::vector<T>& a, std::size_t m, std::vector<T>& inv, double tol)
{
    using Tr = ScalarTraits<T>;
    inv.assign(m * m, Tr::zero());
    for (std::size_t i = 0; i < m; ++i)
        inv[i * m + i] = Tr::one();
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t p = m;
        double best = 0;
        for (std::size_t r = c; r < m; ++r) {
            const double mag = Tr::magnitude(a[r * m + c]);
            if (Tr::sign(a[r * m + c], tol) != 0 && (p == m || (!Tr::exact && mag > best))) {
                p = r;
                best = mag;
                if constexpr (Tr::exact)
                    break;
            }
        }
        if (p == m)
            return false;
        if (p != c)
            for (std::size_t k = 0; k < m; ++k) {
                std::swap(a[p * m + k], a[c * m + k]);
                std::swap(inv[p * m + k], inv[c * m + k]);
            }
        const T piv = a[c * m + c];
        for (std::size_t k = 0; k < m; ++k) {
            a[c * m + k] /= piv;
            inv[c * m + k] /= piv;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c || Tr::is_zero(a[r * m + c], 0.0))
                continue;
            const T f = a[r * m + c];
            for (std::size_t k = 0; k < m; ++k) {
                if (!Tr::is_zero(a[c * m + k], 0.0))
                    a[r * m + k] -= f * a[c * m + k];
                if (!Tr::is_zero(inv[c * m + k], 0.0))
                    inv[r * m + k] -= f * inv[c * m + k];
            }
        }
    }
    return true;
}

} // namespace

template <class T> bool SimplexCore<T>::set_basis(const std::vector<std::size_t>& cols)
{
    using Tr = ScalarTraits<T>;
    const std::size_t m = b_.size();
    if (cols.size() != m)
        throw StructuralError("basis size does not match the row count");
    std::vector<T> inv;
    bool have = false;
    if constexpr (Tr::exact) {
        // Guess B^-1 from a float inverse rounded to small denominators and
        // accept it only if B * guess == I exactly.
        std::vector<double> bd(m * m, 0.0), invd;
        for (std::size_t i = 0; i < m; ++i)
            for (const auto& [r, v] : cols_[cols[i]].entries)
                bd[r * m + i] = to_double(v);
        if (invert_dense(bd, m, invd, 1e-12)) {
            inv.resize(m * m);
            for (std::size_t k = 0; k < m * m; ++k)
                inv[k] = std::fabs(invd[k]) < 1e-12 ? Rational(0) : nearest_rational(invd[k], 1 << 20);
            have = true;
            for (std::size_t i = 0; i < m && have; ++i)  // row i of inv times column j of B
                for (std::size_t j = 0; j < m && have; ++j) {
                    Rational s = 0;
                    for (const auto& [r, v] : cols_[cols[j]].entries)
                        if (inv[i * m + r] != 0)
                            s += inv[i * m + r] * v;
                    have = s == (i == j ? 1 : 0);
                }
        }
    }
    if (!have) {
        std::vector<T> bm(m * m, Tr::zero());
        for (std::size_t i = 0; i < m; ++i)
            for (const auto& [r, v] : cols_[cols[i]].entries)
                bm[r * m + i] = v;
        if (!invert_dense(bm, m, inv, Tr::exact ? 0.0 : 1e-12))
            return false;
    }
    std::vector<T> xb(m, Tr::zero());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k)
            if (!Tr::is_zero(inv[i * m + k], 0.0))
                xb[i] += inv[i * m + k] * b_[k];
        if (Tr::sign(xb[i], tol_) < 0)
            return false;
        if constexpr (!Tr::exact)
            xb[i] = std::max(0.0, xb[i]);
    }
    for (auto c : basis_)
        if (c != static_cast<std::size_t>(-1))
            pos_[c] = -1;
    basis_ = cols;
    for (std::size_t i = 0; i < m; ++i)
        pos_[cols[i]] = static_cast<long>(i);
    binv_ = std::move(inv);
    xb_ = std::move(xb);
    return true;
}

template <class T>
bool SimplexCore<T>::drive_out(std::size_t row, const std::function<bool(std::size_t)>& allowed)
{
    const std::size_t m = b_.size();
    for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (pos_[j] >= 0 || !allowed(j))
            continue;
        T ur = ScalarTraits<T>::zero();
        for (const auto& [r, v] : cols_[j].entries)
            ur += binv_[row * m + r] * v;
        if (ScalarTraits<T>::sign(ur, tol_) != 0) {
            pivot(row, j, solve_column(cols_[j]));
            return true;
        }
    }
    return false;
}

namespace {

template <class T> struct StdForm {
    std::vector<T> b;
    std::vector<typename SimplexCore<T>::Column> cols;  // artificials carry cost -1
    std::vector<std::pair<std::size_t, std::size_t>> initial;
    std::vector<std::size_t> artificials;
    std::vector<T> phase2;
};

template <class T> void load(const StdForm<T>& f, SimplexCore<T>& core)
{
    for (const auto& c : f.cols)
        core.add_column(c);
    for (const auto& [r, c] : f.initial)
        core.set_initial_basic(r, c);
}

// Freezes artificials and installs the phase-two objective.
template <class T> void enter_phase2(const StdForm<T>& f, SimplexCore<T>& core)
{
    using Tr = ScalarTraits<T>;
    std::vector<bool> is_art(core.cols(), false);
    for (auto a : f.artificials)
        is_art[a] = true;
    for (std::size_t i = 0; i < core.rows(); ++i)
        if (is_art[core.basic_col(i)])
            core.drive_out(i, [&](std::size_t j) { return !is_art[j]; });
    for (auto a : f.artificials) {
        core.set_enterable(a, false);
        core.set_cost(a, Tr::zero());
    }
    for (std::size_t j = 0; j < f.phase2.size(); ++j)
        if (!is_art[j])
            core.set_cost(j, f.phase2[j]);
}

// Returns nullopt when infeasible.
template <class T>
std::optional<typename SimplexCore<T>::Outcome> two_phase(const StdForm<T>& f, SimplexCore<T>& core)
{
    using Tr = ScalarTraits<T>;
    load(f, core);
    if (!f.artificials.empty()) {
        core.optimize();
        double scale = 1.0;
        for (const auto& v : f.b)
            scale = std::max(scale, Tr::magnitude(v));
        if (Tr::sign(core.objective(), 1e-7 * scale) < 0)
            return std::nullopt;
    }
    enter_phase2(f, core);
    return core.optimize();
}

template <class T>
std::optional<typename SimplexCore<T>::Outcome> solve_form(const StdForm<T>& f, SimplexCore<T>& core)
{
    return two_phase(f, core);
}

// Exact solves start from the optimal basis of a float solve when that basis
// is exactly primal feasible; exact pivoting then certifies optimality.
template <>
std::optional<SimplexCore<Rational>::Outcome> solve_form(const StdForm<Rational>& f, SimplexCore<Rational>& core)
{
    if (f.b.size() >= 40) {
        StdForm<double> fd;
        for (const auto& v : f.b)
            fd.b.push_back(to_double(v));
        for (const auto& c : f.cols) {
            SimplexCore<double>::Column cd;
            for (const auto& [r, v] : c.entries)
                cd.entries.push_back({r, to_double(v)});
            cd.cost = to_double(c.cost);
            fd.cols.push_back(std::move(cd));
        }
        fd.initial = f.initial;
        fd.artificials = f.artificials;
        for (const auto& v : f.phase2)
            fd.phase2.push_back(to_double(v));
        SimplexCore<double> fcore(fd.b);
        const auto fo = two_phase(fd, fcore);
        if (fo && *fo == SimplexCore<double>::Outcome::optimal) {
            SimplexCore<Rational> warm(f.b);
            load(f, warm);
            if (warm.set_basis(fcore.basis())) {
                const auto x = warm.primal();
                bool clean = true;
                for (auto a : f.artificials)
                    clean = clean && x[a] == 0;
                if (clean) {
                    enter_phase2(f, warm);
                    const auto out = warm.optimize();
                    core = std::move(warm);
                    return out;
                }
            }
        }
    }
    return two_phase(f, core);
}

} // namespace

template <class T> LpResultT<T> lp_solve(const LinearProgramT<T>& lp)
{
    using Tr = ScalarTraits<T>;
    const std::size_t n = lp.num_vars;
    if (lp.objective.size() != n)
        throw StructuralError("objective length does not match the variable count");
    if (!lp.lower.empty() && lp.lower.size() != n)
        throw StructuralError("lower-bound vector has the wrong length");
    if (!lp.upper.empty() && lp.upper.size() != n)
        throw StructuralError("upper-bound vector has the wrong length");
    for (const auto& row : lp.rows)
        for (const auto& [j, v] : row.terms)
            if (j >= n)
                throw StructuralError("constraint references variable " + std::to_string(j) + " of " +
                                      std::to_string(n));

    // x_j = shift_j + xp_j (- xm_j when free below).
    std::vector<T> shift(n, Tr::zero());
    std::vector<bool> free_below(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        if (lp.lower.empty()) {
            continue;
        } else if (lp.lower[j]) {
            shift[j] = *lp.lower[j];
        } else {
            free_below[j] = true;
        }
    }
    std::vector<std::size_t> plus(n), minus(n, static_cast<std::size_t>(-1));
    std::size_t nstruct = 0;
    for (std::size_t j = 0; j < n; ++j) {
        plus[j] = nstruct++;
        if (free_below[j])
            minus[j] = nstruct++;
    }

    struct StdRow {
        std::vector<std::pair<std::size_t, T>> terms;  // over structural columns
        Sense sense;
        T rhs;
    };
    std::vector<StdRow> rows;
    auto expand = [&](const std::vector<std::pair<std::size_t, T>>& terms, T rhs) {
        StdRow r;
        r.rhs = std::move(rhs);
        for (const auto& [j, v] : terms) {
            r.rhs -= v * shift[j];
            r.terms.push_back({plus[j], v});
            if (free_below[j])
                r.terms.push_back({minus[j], -v});
        }
        return r;
    };
    for (const auto& row : lp.rows) {
        StdRow r = expand(row.terms, row.rhs);
        r.sense = row.sense;
        rows.push_back(std::move(r));
    }
    const std::size_t user_rows = rows.size();
    std::vector<std::size_t> upper_row(n, static_cast<std::size_t>(-1));
    if (!lp.upper.empty())
        for (std::size_t j = 0; j < n; ++j)
            if (lp.upper[j]) {
                StdRow r = expand({{j, Tr::one()}}, *lp.upper[j]);
                r.sense = Sense::le;
                upper_row[j] = rows.size();
                rows.push_back(std::move(r));
            }

    const std::size_t m = rows.size();
    std::vector<int> flip(m, 1);
    std::vector<T> b(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (Tr::sign(rows[i].rhs, 0.0) < 0) {
            flip[i] = -1;
            rows[i].rhs = -rows[i].rhs;
            for (auto& t : rows[i].terms)
                t.second = -t.second;
            if (rows[i].sense == Sense::le)
                rows[i].sense = Sense::ge;
            else if (rows[i].sense == Sense::ge)
                rows[i].sense = Sense::le;
        }
        b[i] = rows[i].rhs;
    }

    StdForm<T> form;
    form.b = b;
    std::vector<std::vector<std::pair<std::uint32_t, T>>> colent(nstruct);
    for (std::size_t i = 0; i < m; ++i)
        for (const auto& [j, v] : rows[i].terms)
            colent[j].push_back({static_cast<std::uint32_t>(i), v});
    for (std::size_t j = 0; j < nstruct; ++j) {
        // Merge repeated entries in one row.
        auto& e = colent[j];
        std::sort(e.begin(), e.end(), [](const auto& a, const auto& c) { return a.first < c.first; });
        std::vector<std::pair<std::uint32_t, T>> merged;
        for (auto& [r, v] : e) {
            if (!merged.empty() && merged.back().first == r)
                merged.back().second += v;
            else
                merged.push_back({r, v});
        }
        std::erase_if(merged, [](const auto& t) { return Tr::is_zero(t.second, 0.0); });
        form.cols.push_back({std::move(merged), Tr::zero()});
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto r32 = static_cast<std::uint32_t>(i);
        if (rows[i].sense == Sense::le) {
            form.initial.push_back({i, form.cols.size()});
            form.cols.push_back({{{r32, Tr::one()}}, Tr::zero()});
        } else {
            if (rows[i].sense == Sense::ge)
                form.cols.push_back({{{r32, -Tr::one()}}, Tr::zero()});
            form.initial.push_back({i, form.cols.size()});
            form.artificials.push_back(form.cols.size());
            form.cols.push_back({{{r32, Tr::one()}}, -Tr::one()});
        }
    }
    const T sense_sign = lp.maximize ? Tr::one() : -Tr::one();
    form.phase2.assign(form.cols.size(), Tr::zero());
    for (std::size_t j = 0; j < n; ++j) {
        form.phase2[plus[j]] = sense_sign * lp.objective[j];
        if (free_below[j])
            form.phase2[minus[j]] = -(sense_sign * lp.objective[j]);
    }

    LpResultT<T> res;
    SimplexCore<T> core(b);
    const auto outcome = solve_form(form, core);
    res.iterations = core.iterations();
    if (!outcome) {
        res.status = LpStatus::infeasible;
        return res;
    }
    if (*outcome == SimplexCore<T>::Outcome::unbounded) {
        res.status = LpStatus::unbounded;
        return res;
    }
    if (*outcome == SimplexCore<T>::Outcome::iteration_limit)
        throw Error("simplex iteration limit reached");

    const std::vector<T> xs = core.primal();
    const std::vector<T> y = core.duals();
    res.status = LpStatus::optimal;
    res.primal.assign(n, Tr::zero());
    res.value = Tr::zero();
    for (std::size_t j = 0; j < n; ++j) {
        T x = shift[j] + xs[plus[j]];
        if (free_below[j])
            x -= xs[minus[j]];
        res.primal[j] = x;
        res.value += lp.objective[j] * x;
    }
    res.dual.assign(user_rows, Tr::zero());
    for (std::size_t i = 0; i < user_rows; ++i)
        res.dual[i] = sense_sign * T(flip[i]) * y[i];
    res.upper_dual.assign(n, Tr::zero());
    for (std::size_t j = 0; j < n; ++j)
        if (upper_row[j] != static_cast<std::size_t>(-1))
            res.upper_dual[j] = sense_sign * T(flip[upper_row[j]]) * y[upper_row[j]];
    return res;
}

template class SimplexCore<Rational>;
template class SimplexCore<double>;
template LpResultT<Rational> lp_solve(const LinearProgramT<Rational>&);
template LpResultT<double> lp_solve(const LinearProgramT<double>&);

} // namespace bellnl
