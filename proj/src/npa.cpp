#include "bellnl/npa.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace bellnl {

std::string to_string(NpaLevel l) { return l == NpaLevel::one ? "1" : "1+AB"; }

NpaLevel parse_npa_level(const std::string& s)
{
    std::string u;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (u == "1" || u == "ONE")
        return NpaLevel::one;
    if (u == "1+AB")
        return NpaLevel::one_plus_ab;
    throw FormatError("unknown NPA level '" + s + "' (expected 1 or 1+AB)");
}

std::string to_string(const Monomial& m)
{
    std::string s;
    if (m.alice)
        s += "E(" + std::to_string(m.alice->second) + "|" + std::to_string(m.alice->first) + ")";
    if (m.bob)
        s += "F(" + std::to_string(m.bob->second) + "|" + std::to_string(m.bob->first) + ")";
    return s.empty() ? "1" : s;
}

int MomentStructure::alice_index(int x, int a) const
{
    if (x < 0 || x >= scenario.nx() || a < 0 || a >= scenario.na() - 1)
        throw InvalidScenarioError("Alice projector outside the retained basis");
    return 1 + x * (scenario.na() - 1) + a;
}

int MomentStructure::bob_index(int y, int b) const
{
    if (y < 0 || y >= scenario.ny() || b < 0 || b >= scenario.nb() - 1)
        throw InvalidScenarioError("Bob projector outside the retained basis");
    return 1 + scenario.nx() * (scenario.na() - 1) + y * (scenario.nb() - 1) + b;
}

namespace {

using Letter = std::pair<int, int>;
using Word = std::vector<Letter>;

struct Key {
    Word alice;
    Word bob;
    bool zero = false;
    auto operator<=>(const Key&) const = default;
};

// Product of two projector words on one party; only words of at most two
// letters occur at the levels supported here.
bool multiply(Word& w, const std::optional<Letter>& l, const std::optional<Letter>& r)
{
    w.clear();
    if (l)
        w.push_back(*l);
    if (r) {
        if (l && l->first == r->first) {
            return l->second == r->second;  // idempotent, or orthogonal (zero)
        }
        w.push_back(*r);
    }
    return true;
}

Key entry_key(const Monomial& mi, const Monomial& mj)
{
    Key k;
    const bool a = multiply(k.alice, mi.alice, mj.alice);
    const bool b = multiply(k.bob, mi.bob, mj.bob);
    if (!a || !b)
        return Key{{}, {}, true};
    Key r{Word(k.alice.rbegin(), k.alice.rend()), Word(k.bob.rbegin(), k.bob.rend()), false};
    return std::min(k, r);
}

} // namespace

MomentStructure build_moment_structure(const Scenario& sc, NpaLevel level)
{
    MomentStructure ms;
    ms.scenario = sc;
    ms.level = level;
    ms.monomials.push_back({});
    for (int x = 0; x < sc.nx(); ++x)
        for (int a = 0; a + 1 < sc.na(); ++a)
            ms.monomials.push_back({Letter{x, a}, std::nullopt});
    for (int y = 0; y < sc.ny(); ++y)
        for (int b = 0; b + 1 < sc.nb(); ++b)
            ms.monomials.push_back({std::nullopt, Letter{y, b}});
    if (level == NpaLevel::one_plus_ab)
        for (int x = 0; x < sc.nx(); ++x)
            for (int a = 0; a + 1 < sc.na(); ++a)
                for (int y = 0; y < sc.ny(); ++y)
                    for (int b = 0; b + 1 < sc.nb(); ++b)
                        ms.monomials.push_back({Letter{x, a}, Letter{y, b}});

    const int n = ms.size();
    ms.entry_class.assign(static_cast<std::size_t>(n) * n, -1);
    std::map<Key, int> ids;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const Key k = entry_key(ms.monomials[i], ms.monomials[j]);
            auto [it, fresh] = ids.try_emplace(k, static_cast<int>(ms.class_entry.size()));
            if (fresh) {
                ms.class_entry.emplace_back(i, j);
                if (k.zero)
                    ms.class_constant.emplace_back(0.0);
                else if (k.alice.empty() && k.bob.empty())
                    ms.class_constant.emplace_back(1.0);
                else
                    ms.class_constant.emplace_back(std::nullopt);
            }
            ms.entry_class[static_cast<std::size_t>(i) * n + j] = it->second;
            ms.entry_class[static_cast<std::size_t>(j) * n + i] = it->second;
        }
    return ms;
}

SdpProblem moment_problem(const MomentStructure& ms)
{
    SdpProblem p;
    p.n = ms.size();
    for (int i = 0; i < p.n; ++i)
        for (int j = i; j < p.n; ++j) {
            const int c = ms.cls(i, j);
            const auto& c0 = ms.class_constant[c];
            if (c0) {
                p.constraints.push_back({{{i, j, 1.0}}, *c0});
            } else if (ms.class_entry[c] != std::pair{i, j}) {
                const auto [r, s] = ms.class_entry[c];
                p.constraints.push_back({{{i, j, 1.0}, {r, s, -1.0}}, 0.0});
            }
        }
    return p;
}

std::pair<double, std::vector<EntryTerm>> probability_terms(const MomentStructure& ms, int x, int y, int a, int b)
{
    const Scenario& sc = ms.scenario;
    if (!sc.contains(Cell{x, y, a, b}))
        throw InvalidScenarioError("cell outside the scenario");
    const int la = sc.na() - 1, lb = sc.nb() - 1;
    // Each party's operator as a signed combination of retained projectors,
    // with index 0 standing for the identity.
    auto expand = [](bool last, int keep, int count, auto index) {
        std::vector<std::pair<int, double>> out;
        if (!last) {
            out.emplace_back(index(keep), 1.0);
        } else {
            out.emplace_back(0, 1.0);
            for (int k = 0; k < count; ++k)
                out.emplace_back(index(k), -1.0);
        }
        return out;
    };
    const auto ea = expand(a == la, a, la, [&](int k) { return ms.alice_index(x, k); });
    const auto eb = expand(b == lb, b, lb, [&](int k) { return ms.bob_index(y, k); });
    double constant = 0.0;
    std::vector<EntryTerm> terms;
    for (const auto& [i, ci] : ea)
        for (const auto& [j, cj] : eb) {
            // <A B> sits at Gamma(A, B); Gamma(0, 0) = 1.
            if (i == 0 && j == 0)
                constant += ci * cj;
            else
                terms.push_back({i, j, ci * cj});
        }
    return {constant, terms};
}

NpaFeasibility npa_feasible(const TableOfZeros& t, NpaLevel level, bool escalate)
{
    const Scenario& sc = t.scenario();
    const MomentStructure ms = build_moment_structure(sc, level);
    SdpProblem prob = moment_problem(ms);
    for (auto c : t.cells()) {
        const Cell z = sc.cell(c);
        auto [k, terms] = probability_terms(ms, z.x, z.y, z.a, z.b);
        prob.constraints.push_back({std::move(terms), -k});
    }
    const SdpFeasibility r = sdp_max_min_eigenvalue(prob);
    if (r.verdict == SdpVerdict::indeterminate && escalate && level == NpaLevel::one)
        return npa_feasible(t, NpaLevel::one_plus_ab, false);
    NpaFeasibility out;
    // An inconsistent affine system is a certificate of infeasibility.
    out.verdict = r.verdict == SdpVerdict::infeasible_affine ? SdpVerdict::infeasible_with_margin : r.verdict;
    out.level = level;
    out.affine_inconsistent = r.verdict == SdpVerdict::infeasible_affine;
    out.lambda_star = r.lambda_star;
    out.iterations = r.iterations;
    if (r.verdict == SdpVerdict::feasible)
        out.witness = r.gamma;
    return out;
}

NpaBound npa_upper_bound(const BellExpression& e, NpaLevel level)
{
    const Scenario& sc = e.scenario;
    const MomentStructure ms = build_moment_structure(sc, level);
    SdpProblem prob = moment_problem(ms);
    const auto coef = e.float_coefficients();
    double constant = 0.0;
    std::map<std::pair<int, int>, double> obj;
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y)
            for (int a = 0; a < sc.na(); ++a)
                for (int b = 0; b < sc.nb(); ++b) {
                    const double c = coef[sc.index(x, y, a, b)];
                    if (c == 0.0)
                        continue;
                    auto [k, terms] = probability_terms(ms, x, y, a, b);
                    constant += c * k;
                    for (const auto& t : terms)
                        obj[{std::min(t.i, t.j), std::max(t.i, t.j)}] += c * t.coef;
                }
    for (const auto& [ij, c] : obj)
        if (c != 0.0)
            prob.objective.push_back({ij.first, ij.second, c});
    NpaBound out;
    out.level = level;
    if (prob.objective.empty()) {
        out.value = out.attained = constant;
        out.reliable = true;
        return out;
    }
    const SdpOptimum r = sdp_maximize(prob);
    out.value = constant + r.upper_bound;
    out.attained = constant + r.value;
    out.reliable = r.converged;
    out.iterations = r.iterations;
    return out;
}

RealMatrix moment_matrix(const MomentStructure& ms, const QuantumStrategy& s)
{
    const Scenario sc = s.scenario();
    if (!(sc == ms.scenario))
        throw ScenarioMismatchError("strategy and moment structure scenarios differ");
    const Eigen::Index dA = s.alice.front().dimension(), dB = s.bob.front().dimension();
    ComplexMatrix Psi(dA, dB);
    for (Eigen::Index i = 0; i < dA; ++i)
        for (Eigen::Index j = 0; j < dB; ++j)
            Psi(i, j) = s.psi.amplitudes()[i * dB + j];
    // Column k holds (A_k (x) B_k)|psi>, reshaped: A Psi B^T.
    const int n = ms.size();
    ComplexMatrix V(dA * dB, n);
    for (int k = 0; k < n; ++k) {
        const Monomial& m = ms.monomials[k];
        ComplexMatrix w = Psi;
        if (m.alice)
            w = s.alice[m.alice->first].projectors[m.alice->second] * w;
        if (m.bob)
            w = w * s.bob[m.bob->first].projectors[m.bob->second].transpose();
        for (Eigen::Index i = 0; i < dA; ++i)
            for (Eigen::Index j = 0; j < dB; ++j)
                V(i * dB + j, k) = w(i, j);
    }
    return (V.adjoint() * V).real();
}

double structural_residual(const MomentStructure& ms, const RealMatrix& g)
{
    const int n = ms.size();
    if (g.rows() != n || g.cols() != n)
        throw DimensionMismatchError("moment matrix has the wrong size");
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int c = ms.cls(i, j);
            const double ref = ms.class_constant[c] ? *ms.class_constant[c]
                                                    : g(ms.class_entry[c].first, ms.class_entry[c].second);
            worst = std::max(worst, std::fabs(g(i, j) - ref));
        }
    return worst;
}

} // namespace bellnl
