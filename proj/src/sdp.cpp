#include "bellnl/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace bellnl {

std::string to_string(SdpVerdict v)
{
    switch (v) {
    case SdpVerdict::feasible: return "feasible";
    case SdpVerdict::infeasible_with_margin: return "infeasible-with-margin";
    case SdpVerdict::indeterminate: return "indeterminate";
    case SdpVerdict::infeasible_affine: return "infeasible-affine";
    }
    return "unknown";
}

SdpVerdict classify_lambda(double lambda_star)
{
    if (lambda_star >= kFeasibleLambda)
        return SdpVerdict::feasible;
    if (lambda_star < kInfeasibleLambda)
        return SdpVerdict::infeasible_with_margin;
    return SdpVerdict::indeterminate;
}

namespace {

int entry_index(int i, int j, int n)
{
    if (i > j)
        std::swap(i, j);
    // Row-major upper triangle.
    return i * n - i * (i - 1) / 2 + (j - i);
}

struct Expr {
    Rational c;
    std::map<int, Rational> lin;
};

} // namespace

AffineParametrization parametrize(const SdpProblem& prob)
{
    const int n = prob.n;
    if (n < 1)
        throw StructuralError("SDP dimension must be positive");
    const int entries = n * (n + 1) / 2;
    std::vector<std::pair<int, int>> coords(entries);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            coords[entry_index(i, j, n)] = {i, j};

    std::vector<std::optional<Expr>> sub(entries);
    std::vector<std::set<int>> users(entries);
    AffineParametrization out;

    for (const auto& con : prob.constraints) {
        Expr row;
        row.c = -rational_from_double(con.rhs);
        for (const auto& t : con.terms) {
            if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n)
                throw StructuralError("constraint index outside the matrix");
            const int e = entry_index(t.i, t.j, n);
            const Rational a = rational_from_double(t.coef);
            if (sub[e]) {
                row.c += a * sub[e]->c;
                for (const auto& [u, v] : sub[e]->lin)
                    row.lin[u] += a * v;
            } else {
                row.lin[e] += a;
            }
        }
        std::erase_if(row.lin, [](const auto& kv) { return sgn(kv.second) == 0; });
        if (row.lin.empty()) {
            if (sgn(row.c) != 0) {
                out.consistent = false;
                return out;
            }
            continue;
        }
        const int v = row.lin.rbegin()->first;
        const Rational av = row.lin.rbegin()->second;
        Expr def;
        def.c = -row.c / av;
        for (const auto& [u, coef] : row.lin)
            if (u != v)
                def.lin[u] = -coef / av;
        // Substitute the new pivot into every earlier definition that mentions it.
        for (int p : users[v]) {
            Expr& ex = *sub[p];
            auto it = ex.lin.find(v);
            if (it == ex.lin.end())
                continue;
            const Rational f = it->second;
            ex.lin.erase(it);
            ex.c += f * def.c;
            for (const auto& [u, coef] : def.lin) {
                Rational& slot = ex.lin[u];
                slot += f * coef;
                if (sgn(slot) == 0)
                    ex.lin.erase(u);
                else
                    users[u].insert(p);
            }
        }
        users[v].clear();
        for (const auto& [u, coef] : def.lin)
            users[u].insert(v);
        sub[v] = std::move(def);
    }

    out.f0 = RealMatrix::Zero(n, n);
    std::vector<int> free_id(entries, -1);
    for (int e = 0; e < entries; ++e)
        if (!sub[e]) {
            free_id[e] = static_cast<int>(out.generators.size());
            out.generators.push_back({{coords[e].first, coords[e].second, 1.0}});
        }
    for (int e = 0; e < entries; ++e) {
        if (!sub[e])
            continue;
        const auto [i, j] = coords[e];
        out.f0(i, j) = out.f0(j, i) = sub[e]->c.get_d();
        for (const auto& [u, coef] : sub[e]->lin)
            out.generators[free_id[u]].push_back({i, j, coef.get_d()});
    }
    return out;
}

namespace {

// max b.y s.t. S = C - sum y_i A_i >= 0 (dense block) and s = c - sum y_i a_i >= 0 (diagonal block).
struct LmiProblem {
    int n = 0;
    RealMatrix C;
    std::vector<std::vector<EntryTerm>> A;  // upper-triangle entries, symmetric meaning
    RealVector c_lp;
    std::vector<std::vector<std::pair<int, double>>> a_lp;
    RealVector b;
};

struct LmiResult {
    RealVector y;
    double pobj = 0;
    double dobj = 0;
    double pinf = 0;
    std::size_t iterations = 0;
    bool converged = false;
    bool diverged = false;
};

double inner_sym(const std::vector<EntryTerm>& a, const RealMatrix& X)
{
    double s = 0;
    for (const auto& t : a)
        s += t.coef * (t.i == t.j ? X(t.i, t.j) : X(t.i, t.j) + X(t.j, t.i));
    return s;
}

void add_sym(RealMatrix& M, const std::vector<EntryTerm>& a, double scale)
{
    for (const auto& t : a) {
        M(t.i, t.j) += scale * t.coef;
        if (t.i != t.j)
            M(t.j, t.i) += scale * t.coef;
    }
}

// Largest step alpha with X + alpha dX >= 0 (infinity if unconstrained).
double max_step(const RealMatrix& X, const RealMatrix& dX)
{
    Eigen::LLT<RealMatrix> llt(X);
    if (llt.info() != Eigen::Success)
        return 0.0;
    RealMatrix Linv = llt.matrixL().solve(RealMatrix::Identity(X.rows(), X.cols()));
    RealMatrix W = Linv * dX * Linv.transpose();
    W = (0.5 * (W + W.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(W, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const RealVector& x, const RealVector& dx)
{
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < x.size(); ++k)
        if (dx(k) < 0)
            a = std::min(a, -x(k) / dx(k));
    return a;
}

LmiResult solve_lmi(const LmiProblem& P, std::size_t max_iter = 200)
{
    const int n = P.n;
    const int m = static_cast<int>(P.A.size());
    const int L = static_cast<int>(P.c_lp.size());
    const double N = n + L;

    double normC = P.C.norm();
    double maxA = 0;
    for (const auto& a : P.A) {
        RealMatrix Ai = RealMatrix::Zero(n, n);
        add_sym(Ai, a, 1.0);
        maxA = std::max(maxA, Ai.norm());
    }
    double xi = std::max({10.0, std::sqrt(static_cast<double>(n))});
    for (int i = 0; i < m; ++i) {
        RealMatrix Ai = RealMatrix::Zero(n, n);
        add_sym(Ai, P.A[i], 1.0);
        xi = std::max(xi, n * (1 + std::fabs(P.b(i))) / (1 + Ai.norm()));
    }
    const double eta = std::max({10.0, std::sqrt(static_cast<double>(n)), normC, maxA});

    RealMatrix X = xi * RealMatrix::Identity(n, n);
    RealMatrix S = eta * RealMatrix::Identity(n, n);
    RealVector x = RealVector::Constant(L, xi);
    RealVector s = RealVector::Constant(L, eta);
    RealVector y = RealVector::Zero(m);

    auto Aop = [&](const RealMatrix& Mx, const RealVector& v) {
        RealVector r(m);
        for (int i = 0; i < m; ++i) {
            double t = inner_sym(P.A[i], Mx);
            for (const auto& [k, a] : P.a_lp[i])
                t += a * v(k);
            r(i) = t;
        }
        return r;
    };
    auto Atop = [&](const RealVector& w, RealMatrix& Mx, RealVector& v) {
        Mx = RealMatrix::Zero(n, n);
        v = RealVector::Zero(L);
        for (int i = 0; i < m; ++i) {
            if (w(i) == 0)
                continue;
            add_sym(Mx, P.A[i], w(i));
            for (const auto& [k, a] : P.a_lp[i])
                v(k) += w(i) * a;
        }
    };

    LmiResult res;
    const double normb = P.b.norm();
    for (std::size_t it = 0; it < max_iter; ++it) {
        res.iterations = it;
        RealMatrix AtY;
        RealVector atY;
        Atop(y, AtY, atY);
        RealMatrix Rd = P.C - AtY - S;
        RealVector rd = P.c_lp - atY - s;
        RealVector Rp = P.b - Aop(X, x);
        const double pobj = (P.C.cwiseProduct(X)).sum() + P.c_lp.dot(x);
        const double dobj = P.b.dot(y);
        const double mu = ((X.cwiseProduct(S)).sum() + x.dot(s)) / N;
        res.pobj = pobj;
        res.dobj = dobj;
        res.pinf = Rp.norm() / (1 + normb);
        const double dinf = std::sqrt(Rd.squaredNorm() + rd.squaredNorm()) / (1 + normC);
        const double gap = std::fabs(pobj - dobj) / (1 + std::fabs(pobj) + std::fabs(dobj));
        res.y = y;
        if (res.pinf < 1e-9 && dinf < 1e-9 && gap < 1e-9) {
            res.converged = true;
            return res;
        }
        if (y.norm() > 1e10 || X.norm() > 1e12) {
            res.diverged = true;
            return res;
        }

        Eigen::LLT<RealMatrix> sllt(S);
        if (sllt.info() != Eigen::Success)
            return res;
        RealMatrix Sinv = sllt.solve(RealMatrix::Identity(n, n));
        Sinv = (0.5 * (Sinv + Sinv.transpose())).eval();

        // Schur complement M_ij = tr(A_i X A_j S^-1) + sum_k a_ik a_jk x_k / s_k.
        RealMatrix M(m, m);
        for (int j = 0; j < m; ++j) {
            RealMatrix XA = RealMatrix::Zero(n, n);
            for (const auto& t : P.A[j]) {
                XA.col(t.j) += t.coef * X.col(t.i);
                if (t.i != t.j)
                    XA.col(t.i) += t.coef * X.col(t.j);
            }
            RealMatrix G = XA * Sinv;
            for (int i = 0; i < m; ++i) {
                double v = 0;
                for (const auto& t : P.A[i])
                    v += t.coef * (t.i == t.j ? G(t.j, t.i) : G(t.j, t.i) + G(t.i, t.j));
                M(i, j) = v;
            }
        }
        for (int i = 0; i < m; ++i)
            for (const auto& [k, a] : P.a_lp[i])
                for (int j = 0; j < m; ++j)
                    for (const auto& [k2, a2] : P.a_lp[j])
                        if (k2 == k)
                            M(i, j) += a * a2 * x(k) / s(k);
        M = (0.5 * (M + M.transpose())).eval();
        Eigen::LDLT<RealMatrix> mf(M);

        struct Dir {
            RealMatrix dX, dS;
            RealVector dx, ds, dy;
        };
        auto direction = [&](double sigma_mu, const RealMatrix* Q, const RealVector* q) {
            RealMatrix T = sigma_mu * Sinv - X - X * Rd * Sinv;
            if (Q)
                T -= *Q;
            RealVector t = RealVector::Zero(L);
            for (int k = 0; k < L; ++k)
                t(k) = sigma_mu / s(k) - x(k) - x(k) * rd(k) / s(k) - (q ? (*q)(k) : 0.0);
            Dir d;
            d.dy = mf.solve(Rp - Aop(T, t));
            RealMatrix AtD;
            RealVector atD;
            Atop(d.dy, AtD, atD);
            d.dS = Rd - AtD;
            d.ds = rd - atD;
            d.dX = sigma_mu * Sinv - X - X * d.dS * Sinv;
            if (Q)
                d.dX -= *Q;
            d.dX = (0.5 * (d.dX + d.dX.transpose())).eval();
            d.dx.resize(L);
            for (int k = 0; k < L; ++k)
                d.dx(k) = sigma_mu / s(k) - x(k) - x(k) * d.ds(k) / s(k) - (q ? (*q)(k) : 0.0);
            return d;
        };
        auto steps = [&](const Dir& d, double frac) {
            double ap = std::min(max_step(X, d.dX), max_step_lp(x, d.dx));
            double ad = std::min(max_step(S, d.dS), max_step_lp(s, d.ds));
            return std::pair{std::min(1.0, frac * ap), std::min(1.0, frac * ad)};
        };

        Dir pred = direction(0.0, nullptr, nullptr);
        auto [ap0, ad0] = steps(pred, 1.0);
        const double mu_aff = (((X + ap0 * pred.dX).cwiseProduct(S + ad0 * pred.dS)).sum() +
                               (x + ap0 * pred.dx).dot(s + ad0 * pred.ds)) /
                              N;
        double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);
        RealMatrix Q = pred.dX * pred.dS * Sinv;
        RealVector q(L);
        for (int k = 0; k < L; ++k)
            q(k) = pred.dx(k) * pred.ds(k) / s(k);
        Dir corr = direction(sigma * mu, &Q, &q);
        auto [ap, ad] = steps(corr, 0.95);
        X += ap * corr.dX;
        X = (0.5 * (X + X.transpose())).eval();
        x += ap * corr.dx;
        y += ad * corr.dy;
        S += ad * corr.dS;
        S = (0.5 * (S + S.transpose())).eval();
        s += ad * corr.ds;
    }
    return res;
}

RealMatrix assemble(const AffineParametrization& par, const RealVector& z)
{
    RealMatrix G = par.f0;
    for (std::size_t k = 0; k < par.generators.size(); ++k)
        add_sym(G, par.generators[k], z(static_cast<Eigen::Index>(k)));
    return G;
}

double min_eigenvalue(const RealMatrix& G)
{
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(G, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace

SdpFeasibility sdp_max_min_eigenvalue(const SdpProblem& prob)
{
    SdpFeasibility out;
    AffineParametrization par = parametrize(prob);
    if (!par.consistent) {
        out.verdict = SdpVerdict::infeasible_affine;
        out.lambda_star = -std::numeric_limits<double>::infinity();
        out.converged = true;
        return out;
    }
    const int n = prob.n;
    const int mz = static_cast<int>(par.generators.size());
    LmiProblem P;
    P.n = n;
    P.C = par.f0;
    for (const auto& g : par.generators) {
        std::vector<EntryTerm> neg = g;
        for (auto& t : neg)
            t.coef = -t.coef;
        P.A.push_back(std::move(neg));
        P.a_lp.push_back({});
    }
    std::vector<EntryTerm> eye;
    for (int i = 0; i < n; ++i)
        eye.push_back({i, i, 1.0});
    P.A.push_back(eye);
    P.a_lp.push_back({{0, 1.0}});
    P.c_lp = RealVector::Ones(1);
    P.b = RealVector::Zero(mz + 1);
    P.b(mz) = 1.0;

    LmiResult r = solve_lmi(P);
    RealVector z = r.y.head(mz);
    out.gamma = assemble(par, z);
    out.iterations = r.iterations;
    out.converged = r.converged;
    const double lam_lo = min_eigenvalue(out.gamma);
    if (r.converged) {
        out.lambda_star = lam_lo;
        out.verdict = classify_lambda(lam_lo);
    } else if (lam_lo >= kFeasibleLambda) {
        out.lambda_star = lam_lo;
        out.verdict = SdpVerdict::feasible;
    } else if (r.pinf < 1e-7 && r.pobj < kInfeasibleLambda) {
        out.lambda_star = r.pobj;
        out.verdict = SdpVerdict::infeasible_with_margin;
    } else {
        out.lambda_star = r.dobj;
        out.verdict = SdpVerdict::indeterminate;
    }
    return out;
}

SdpOptimum sdp_maximize(const SdpProblem& prob)
{
    AffineParametrization par = parametrize(prob);
    if (!par.consistent)
        throw StructuralError("SDP affine constraints are inconsistent");
    const int n = prob.n;
    const int mz = static_cast<int>(par.generators.size());
    RealMatrix Cobj = RealMatrix::Zero(n, n);
    for (const auto& t : prob.objective) {
        if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n)
            throw StructuralError("objective index outside the matrix");
        // Objective coefficient applies to the shared entry once.
        if (t.i == t.j) {
            Cobj(t.i, t.i) += t.coef;
        } else {
            Cobj(t.i, t.j) += 0.5 * t.coef;
            Cobj(t.j, t.i) += 0.5 * t.coef;
        }
    }
    const double constant = Cobj.cwiseProduct(par.f0).sum();
    LmiProblem P;
    P.n = n;
    P.C = par.f0;
    P.b = RealVector::Zero(mz);
    for (int k = 0; k < mz; ++k) {
        std::vector<EntryTerm> neg = par.generators[k];
        P.b(k) = inner_sym(neg, Cobj);
        for (auto& t : neg)
            t.coef = -t.coef;
        P.A.push_back(std::move(neg));
        P.a_lp.push_back({});
    }
    P.c_lp = RealVector::Zero(0);

    SdpOptimum out;
    if (mz == 0) {
        out.gamma = par.f0;
        out.value = out.upper_bound = constant;
        out.converged = min_eigenvalue(par.f0) >= -1e-9;
        if (!out.converged)
            throw StructuralError("SDP feasible set is empty");
        return out;
    }
    LmiResult r = solve_lmi(P);
    if (r.diverged)
        throw UnboundedError("SDP objective appears unbounded (iterates diverge)");
    out.gamma = assemble(par, r.y);
    out.value = Cobj.cwiseProduct(out.gamma).sum();
    out.upper_bound = constant + r.pobj;
    out.iterations = r.iterations;
    out.converged = r.converged;
    return out;
}

} // namespace bellnl
