#include "bellnl/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>

#include <Eigen/QR>

#include "bellnl/games.hpp"
#include "bellnl/parallel.hpp"

namespace bellnl {

namespace {

using cd = std::complex<double>;

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Maps psi to the dA x dB coefficient matrix Psi(i, j) = psi[i * dB + j].
ComplexMatrix as_matrix(const ComplexVector& psi, Eigen::Index dA, Eigen::Index dB)
{
    ComplexMatrix m(dA, dB);
    for (Eigen::Index i = 0; i < dA; ++i)
        for (Eigen::Index j = 0; j < dB; ++j)
            m(i, j) = psi[i * dB + j];
    return m;
}

} // namespace

StateVector::StateVector(ComplexVector amp) : amp_(std::move(amp))
{
    if (std::fabs(amp_.norm() - 1.0) > 1e-12)
        throw StructuralError("state vector is not normalized (norm " + std::to_string(amp_.norm()) + ")");
}

StateVector maximally_entangled(int d)
{
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
    for (int i = 0; i < d; ++i)
        v[static_cast<Eigen::Index>(i) * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
    return StateVector(v);
}

ComplexMatrix pauli_string(const std::string& s)
{
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (char c : s) {
        ComplexMatrix p(2, 2);
        switch (c) {
        case 'I': p << 1, 0, 0, 1; break;
        case 'X': p << 0, 1, 1, 0; break;
        case 'Y': p << 0, cd(0, -1), cd(0, 1), 0; break;
        case 'Z': p << 1, 0, 0, -1; break;
        default: throw FormatError(std::string("unknown Pauli symbol '") + c + "'");
        }
        out = kron(out, p);
    }
    return out;
}

double JointMeasurement::defect() const
{
    if (projectors.empty())
        return 0.0;
    const Eigen::Index d = dimension();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    double worst = 0.0;
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const auto& p = projectors[i];
        sum += p;
        worst = std::max(worst, max_abs(p * p - p));
        worst = std::max(worst, max_abs(p - p.adjoint()));
        for (std::size_t j = i + 1; j < projectors.size(); ++j)
            worst = std::max(worst, max_abs(p * projectors[j]));
    }
    return std::max(worst, max_abs(sum - ComplexMatrix::Identity(d, d)));
}

JointMeasurement joint_projectors(const std::vector<ComplexMatrix>& obs, double tol)
{
    if (obs.empty())
        throw StructuralError("joint measurement needs at least one observable");
    const Eigen::Index d = obs.front().rows();
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (obs[i].rows() != d || obs[i].cols() != d)
            throw DimensionMismatchError("observables have different dimensions");
        if (max_abs(obs[i] - obs[i].adjoint()) > tol || max_abs(obs[i] * obs[i] - ComplexMatrix::Identity(d, d)) > tol)
            throw StructuralError("observable " + std::to_string(i) + " is not a Hermitian involution");
    }
    for (std::size_t i = 0; i < obs.size(); ++i)
        for (std::size_t j = i + 1; j < obs.size(); ++j)
            if (max_abs(obs[i] * obs[j] - obs[j] * obs[i]) > tol)
                throw CommutationError("observables " + std::to_string(i) + " and " + std::to_string(j) +
                                       " do not commute");
    const std::size_t k = obs.size();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    JointMeasurement m;
    for (std::size_t t = 0; t < (std::size_t{1} << k); ++t) {
        std::vector<int> label(k);
        ComplexMatrix p = id;
        for (std::size_t i = 0; i < k; ++i) {
            label[i] = static_cast<int>((t >> (k - 1 - i)) & 1U);
            p = p * (0.5 * (id + (label[i] ? -1.0 : 1.0) * obs[i]));
        }
        if (p.trace().real() > 0.5) {
            m.labels.push_back(std::move(label));
            m.projectors.push_back(std::move(p));
        }
    }
    return m;
}

JointMeasurement relabel(const JointMeasurement& m, const std::vector<std::vector<int>>& labels)
{
    const Eigen::Index d = m.dimension();
    JointMeasurement out;
    out.labels = labels;
    for (const auto& l : labels) {
        auto it = std::find(m.labels.begin(), m.labels.end(), l);
        out.projectors.push_back(it == m.labels.end() ? ComplexMatrix::Zero(d, d)
                                                      : m.projectors[it - m.labels.begin()]);
    }
    return out;
}

Scenario QuantumStrategy::scenario() const
{
    if (alice.empty() || bob.empty())
        throw StructuralError("strategy has no measurements");
    return Scenario(static_cast<int>(alice.size()), static_cast<int>(alice.front().projectors.size()),
                    static_cast<int>(bob.size()), static_cast<int>(bob.front().projectors.size()));
}

FloatBehavior behavior_from_strategy(const StateVector& psi, const std::vector<JointMeasurement>& alice,
                                     const std::vector<JointMeasurement>& bob)
{
    if (alice.empty() || bob.empty())
        throw StructuralError("strategy has no measurements");
    const int na = static_cast<int>(alice.front().projectors.size());
    const int nb = static_cast<int>(bob.front().projectors.size());
    const Eigen::Index dA = alice.front().dimension(), dB = bob.front().dimension();
    for (const auto& m : alice)
        if (static_cast<int>(m.projectors.size()) != na || m.dimension() != dA)
            throw DimensionMismatchError("Alice's measurements differ in outcome count or dimension");
    for (const auto& m : bob)
        if (static_cast<int>(m.projectors.size()) != nb || m.dimension() != dB)
            throw DimensionMismatchError("Bob's measurements differ in outcome count or dimension");
    if (psi.dimension() != dA * dB)
        throw DimensionMismatchError("state dimension " + std::to_string(psi.dimension()) + " is not " +
                                     std::to_string(dA) + " x " + std::to_string(dB));
    const Scenario sc(static_cast<int>(alice.size()), na, static_cast<int>(bob.size()), nb);
    const ComplexMatrix Psi = as_matrix(psi.amplitudes(), dA, dB);
    FloatBehavior p(sc);
    for (int x = 0; x < sc.nx(); ++x)
        for (int a = 0; a < na; ++a) {
            const ComplexMatrix left = Psi.adjoint() * alice[x].projectors[a] * Psi;  // dB x dB
            for (int y = 0; y < sc.ny(); ++y)
                for (int b = 0; b < nb; ++b) {
                    // <psi|A (x) B|psi> = tr(Psi^dag A Psi B^T)
                    const cd v = (left.array() * bob[y].projectors[b].array()).sum();
                    p(x, y, a, b) = std::max(0.0, v.real());
                }
        }
    return p;
}

FloatBehavior behavior_from_strategy(const QuantumStrategy& s) { return behavior_from_strategy(s.psi, s.alice, s.bob); }

namespace {

JointMeasurement transposed(JointMeasurement m)
{
    for (auto& p : m.projectors)
        p = p.transpose().eval();
    return m;
}

} // namespace

QuantumStrategy pentagram_strategy()
{
    static const std::map<std::string, std::string> symbol{
        {"A", "XZZ"}, {"B", "ZXZ"}, {"C", "ZZX"}, {"D", "XXX"}, {"ab", "IIZ"},
        {"ac", "IZI"}, {"ad", "XII"}, {"bc", "ZII"}, {"bd", "IXI"}, {"cd", "IIX"},
    };
    QuantumStrategy s;
    s.psi = maximally_entangled(8);
    for (int e = 0; e < 5; ++e) {
        std::vector<ComplexMatrix> obs;
        for (int v : pentagram_edge(e))
            obs.push_back(pauli_string(symbol.at(pentagram_vertex_names()[v])));
        std::vector<std::vector<int>> labels;
        for (int o = 0; o < 8; ++o) {
            const auto sg = pentagram_signs(e, o);
            labels.emplace_back(sg.begin(), sg.end());
        }
        auto m = relabel(joint_projectors(obs), labels);
        s.alice.push_back(m);
        s.bob.push_back(transposed(m));
    }
    return s;
}

QuantumStrategy magic_square_strategy()
{
    const ComplexMatrix cell[3][3] = {
        {pauli_string("XI"), pauli_string("IX"), pauli_string("XX")},
        {pauli_string("IZ"), pauli_string("ZI"), pauli_string("ZZ")},
        {-pauli_string("XZ"), -pauli_string("ZX"), pauli_string("YY")},
    };
    QuantumStrategy s;
    s.psi = maximally_entangled(4);
    for (int x = 0; x < 3; ++x) {
        std::vector<std::vector<int>> labels;
        for (int o = 0; o < 4; ++o) {
            const auto b = magic_square_row_bits(x, o);
            labels.emplace_back(b.begin(), b.end());
        }
        s.alice.push_back(relabel(joint_projectors({cell[x][0], cell[x][1], cell[x][2]}), labels));
    }
    for (int y = 0; y < 3; ++y) {
        std::vector<std::vector<int>> labels;
        for (int o = 0; o < 4; ++o) {
            const auto b = magic_square_column_bits(y, o);
            labels.emplace_back(b.begin(), b.end());
        }
        s.bob.push_back(transposed(relabel(joint_projectors({cell[0][y], cell[1][y], cell[2][y]}), labels)));
    }
    return s;
}

ExactBehavior snap_dyadic(const FloatBehavior& p, int max_log_den, double tol)
{
    if (max_log_den < 0 || max_log_den > 60)
        throw RationalizationError("dyadic denominator exponent out of range");
    const double scale = std::ldexp(1.0, max_log_den);
    ExactBehavior out(p.scenario());
    for (std::size_t i = 0; i < p.table().size(); ++i) {
        const double r = std::round(p[i] * scale);
        if (std::fabs(p[i] - r / scale) > tol)
            throw RationalizationError("entry " + std::to_string(i) + " = " + std::to_string(p[i]) +
                                       " is not a dyadic rational with denominator <= 2^" +
                                       std::to_string(max_log_den));
        Rational q(mpz_class(static_cast<long>(r)), mpz_class(1) << max_log_den);
        q.canonicalize();
        out[i] = q;
    }
    if (!validate_behavior(out, 0.0).valid())
        throw RationalizationError("snapped behavior is not a valid behavior");
    return out;
}

namespace {

struct SeesawRun {
    double objective = -1e300;
    double value = 0.0;
    QuantumStrategy strategy;
    int iterations = 0;
    bool monotone = true;
};

ComplexMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    ComplexMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            m(i, j) = cd(g(rng), g(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(m);
    return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

// Outcome k receives the basis vectors i with i % n == k.
JointMeasurement random_measurement(Eigen::Index d, int n, std::mt19937_64& rng)
{
    const ComplexMatrix u = random_unitary(d, rng);
    JointMeasurement m;
    for (int k = 0; k < n; ++k) {
        m.labels.push_back({k});
        m.projectors.push_back(ComplexMatrix::Zero(d, d));
    }
    for (Eigen::Index i = 0; i < d; ++i)
        m.projectors[i % n] += u.col(i) * u.col(i).adjoint();
    return m;
}

ComplexMatrix bell_operator(const Scenario& sc, const std::vector<double>& c, const QuantumStrategy& s)
{
    const Eigen::Index dA = s.alice.front().dimension(), dB = s.bob.front().dimension();
    ComplexMatrix w = ComplexMatrix::Zero(dA * dB, dA * dB);
    for (int x = 0; x < sc.nx(); ++x)
        for (int a = 0; a < sc.na(); ++a)
            for (int y = 0; y < sc.ny(); ++y) {
                ComplexMatrix bsum = ComplexMatrix::Zero(dB, dB);
                bool any = false;
                for (int b = 0; b < sc.nb(); ++b) {
                    const double v = c[sc.index(x, y, a, b)];
                    if (v != 0.0) {
                        bsum += v * s.bob[y].projectors[b];
                        any = true;
                    }
                }
                if (any)
                    w += kron(s.alice[x].projectors[a], bsum);
            }
    return 0.5 * (w + w.adjoint());
}

double objective_of(const Scenario& sc, const std::vector<double>& c, const FloatBehavior& p)
{
    double v = 0.0;
    for (std::size_t i = 0; i < sc.cell_count(); ++i)
        v += c[i] * p[i];
    return v;
}

// Optimal split of two outcomes' joint subspace given effective operators.
void split_pair(ComplexMatrix& pa, ComplexMatrix& pb, const ComplexMatrix& ma, const ComplexMatrix& mb)
{
    const ComplexMatrix s = pa + pb;
    ComplexMatrix k = s * (ma - mb) * s;
    k = (0.5 * (k + k.adjoint())).eval();
    const auto eig = eig_hermitian(k);
    const Eigen::Index d = s.rows();
    const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    ComplexMatrix plus = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        if (eig.values[i] > 1e-13 * scale)
            plus += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    pa = plus;
    pb = s - plus;
}

void update_party(const Scenario& sc, const std::vector<double>& c, QuantumStrategy& s, bool alice,
                  const ComplexMatrix& Psi)
{
    const int ns = alice ? sc.nx() : sc.ny();
    const int no = alice ? sc.na() : sc.nb();
    const int nr = alice ? sc.ny() : sc.nx();
    const int nq = alice ? sc.nb() : sc.na();
    auto& mine = alice ? s.alice : s.bob;
    const auto& other = alice ? s.bob : s.alice;
    // Reduced operators: value of (A, B) is tr(A R_B) for Alice with
    // R_B = Psi B^T Psi^dag, and tr(B Q_A) for Bob with Q_A = (Psi^dag A Psi)^T.
    std::vector<ComplexMatrix> red(static_cast<std::size_t>(nr) * nq);
    for (int r = 0; r < nr; ++r)
        for (int q = 0; q < nq; ++q) {
            const auto& P = other[r].projectors[q];
            red[r * nq + q] = alice ? ComplexMatrix(Psi * P.transpose() * Psi.adjoint())
                                    : ComplexMatrix((Psi.adjoint() * P * Psi).transpose());
        }
    const Eigen::Index d = mine.front().dimension();
    for (int t = 0; t < ns; ++t) {
        std::vector<ComplexMatrix> eff(no, ComplexMatrix::Zero(d, d));
        for (int o = 0; o < no; ++o)
            for (int r = 0; r < nr; ++r)
                for (int q = 0; q < nq; ++q) {
                    const double v = alice ? c[sc.index(t, r, o, q)] : c[sc.index(r, t, q, o)];
                    if (v != 0.0)
                        eff[o] += v * red[r * nq + q];
                }
        for (int o1 = 0; o1 < no; ++o1)
            for (int o2 = o1 + 1; o2 < no; ++o2)
                split_pair(mine[t].projectors[o1], mine[t].projectors[o2], eff[o1], eff[o2]);
    }
}

void set_top_state(QuantumStrategy& s, const ComplexMatrix& w)
{
    const auto eig = eig_hermitian(w);
    ComplexVector v = eig.vectors.col(eig.vectors.cols() - 1);
    v /= v.norm();
    s.psi = StateVector(v);
}

// Replaces the state by the best one inside the common kernel of the zero
// cells' product projectors, when that kernel is nontrivial.
void project_zeros(const Scenario& sc, const std::vector<double>& c0, const std::vector<std::uint32_t>& zeros,
                   QuantumStrategy& s)
{
    const Eigen::Index dA = s.alice.front().dimension(), dB = s.bob.front().dimension();
    ComplexMatrix h = ComplexMatrix::Zero(dA * dB, dA * dB);
    for (auto idx : zeros) {
        const Cell z = sc.cell(idx);
        h += kron(s.alice[z.x].projectors[z.a], s.bob[z.y].projectors[z.b]);
    }
    const auto eig = eig_hermitian(0.5 * (h + h.adjoint()));
    std::vector<Eigen::Index> ker;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        if (eig.values[i] < 1e-9)
            ker.push_back(i);
    if (ker.empty())
        return;
    ComplexMatrix v(dA * dB, static_cast<Eigen::Index>(ker.size()));
    for (std::size_t k = 0; k < ker.size(); ++k)
        v.col(static_cast<Eigen::Index>(k)) = eig.vectors.col(ker[k]);
    const ComplexMatrix w = bell_operator(sc, c0, s);
    ComplexMatrix small = v.adjoint() * w * v;
    small = (0.5 * (small + small.adjoint())).eval();
    const auto se = eig_hermitian(small);
    ComplexVector psi = v * se.vectors.col(se.vectors.cols() - 1);
    psi /= psi.norm();
    s.psi = StateVector(psi);
}

SeesawRun seesaw_once(const Scenario& sc, const std::vector<double>& c0, const std::vector<double>& c, int dA,
                      int dB, const SeesawOptions& opt, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    SeesawRun run;
    QuantumStrategy s;
    for (int x = 0; x < sc.nx(); ++x)
        s.alice.push_back(random_measurement(dA, sc.na(), rng));
    for (int y = 0; y < sc.ny(); ++y)
        s.bob.push_back(random_measurement(dB, sc.nb(), rng));
    double prev = -1e300;
    for (int it = 0; it < opt.max_iterations; ++it) {
        set_top_state(s, bell_operator(sc, c, s));
        const ComplexMatrix Psi = as_matrix(s.psi.amplitudes(), dA, dB);
        update_party(sc, c, s, true, Psi);
        update_party(sc, c, s, false, Psi);
        const double val = objective_of(sc, c, behavior_from_strategy(s));
        run.iterations = it + 1;
        if (val < prev - 1e-12)
            run.monotone = false;
        if (val - prev < opt.tolerance && it > 0) {
            prev = std::max(prev, val);
            break;
        }
        prev = val;
    }
    set_top_state(s, bell_operator(sc, c, s));
    if (!opt.zero_cells.empty())
        project_zeros(sc, c0, opt.zero_cells, s);
    const FloatBehavior p = behavior_from_strategy(s);
    run.objective = objective_of(sc, c, p);
    run.value = objective_of(sc, c0, p);
    run.strategy = std::move(s);
    return run;
}

} // namespace

SeesawResult seesaw_optimize(const BellExpression& e, int dA, int dB, const SeesawOptions& opt)
{
    if (dA < 1 || dB < 1)
        throw DimensionMismatchError("local dimensions must be positive");
    if (opt.restarts < 1)
        throw StructuralError("seesaw needs at least one restart");
    const Scenario& sc = e.scenario;
    const std::vector<double> c0 = e.float_coefficients();
    std::vector<double> c = c0;
    for (auto z : opt.zero_cells) {
        if (z >= sc.cell_count())
            throw InvalidScenarioError("zero cell outside the scenario");
        c[z] -= opt.penalty;
    }
    std::vector<SeesawRun> runs(opt.restarts);
    parallel_for(runs.size(), [&](std::size_t r) {
        runs[r] = seesaw_once(sc, c0, c, dA, dB, opt, opt.seed * 0x9e3779b97f4a7c15ULL + r);
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].objective > runs[best].objective + 1e-12)
            best = r;
    SeesawResult res;
    res.value = runs[best].value;
    res.penalized = runs[best].objective;
    res.strategy = std::move(runs[best].strategy);
    res.behavior = behavior_from_strategy(res.strategy);
    res.iterations = runs[best].iterations;
    res.best_restart = static_cast<int>(best);
    res.monotone = std::all_of(runs.begin(), runs.end(), [](const SeesawRun& r) { return r.monotone; });
    return res;
}

SeesawResult hardy_seesaw(const std::vector<std::uint32_t>& zero_cells, int restarts, std::uint64_t seed)
{
    const Scenario sc(2, 2, 2, 2);
    BellExpression e(sc);
    e(0, 0, 0, 0) = 1;
    SeesawOptions opt;
    opt.restarts = restarts;
    opt.seed = seed;
    opt.zero_cells = zero_cells;
    return seesaw_optimize(e, 2, 2, opt);
}

} // namespace bellnl
