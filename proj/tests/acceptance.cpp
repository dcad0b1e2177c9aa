// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "bellnl/equivalence.hpp"
#include "bellnl/games.hpp"
#include "bellnl/io.hpp"
#include "bellnl/npa.hpp"
#include "bellnl/polytope.hpp"
#include "bellnl/quantum.hpp"
#include "bellnl/symmetry.hpp"
#include "bellnl/zeros.hpp"
#include "oracles.hpp"

using namespace bellnl;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

TableOfZeros fixture(const std::string& name)
{
    return zeros_from_json(read_json_file(std::string(BELLNL_FIXTURE_DIR) + "/" + name));
}

double seconds_since(std::chrono::steady_clock::time_point t)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

FloatBehavior chsh_optimal_behavior()
{
    SeesawOptions opt;
    opt.restarts = 8;
    return seesaw_optimize(chsh_correlator_expression(), 2, 2, opt).behavior;
}

TableOfZeros hardy_zeros() { return fixture("hardy.json"); }

void classical_values(Verdict& v)
{
    const auto chsh = classical_value(chsh_game());
    v.require(chsh.omega_classical == Rational(3, 4) && chsh.optimizer_count == 8, "CHSH 3/4 with 8 optimizers");
    const auto ms = classical_value(magic_square_game());
    v.require(ms.omega_classical == Rational(8, 9) && ms.optimizer_count == 144, "magic square 8/9 with 144");
    const auto t0 = std::chrono::steady_clock::now();
    const auto pg = classical_value(pentagram_game());
    const double s = seconds_since(t0);
    v.require(pg.omega_classical == Rational(23, 25), "pentagram 23/25");
    v.require(s <= 600.0, "pentagram within 10 minutes");
    v.detail << "CHSH " << chsh.omega_classical << " (" << chsh.optimizer_count << "), MS " << ms.omega_classical
             << " (" << ms.optimizer_count << "), pentagram " << pg.omega_classical << " in " << s << " s";
}

void pentagram_pt(Verdict& v)
{
    const QuantumStrategy s = pentagram_strategy();
    const FloatBehavior p = behavior_from_strategy(s);
    const Game g = pentagram_game();
    const auto& names = pentagram_vertex_names();
    auto abcd = [&](const std::array<int, 4>& e) {
        return std::all_of(e.begin(), e.end(), [&](int v) { return names[v].size() == 1; });
    };
    double worst = 0.0;
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) {
            double win = 0, one = 0, two = 0, three = 0;
            const auto& ex = pentagram_edge(x);
            const auto& ey = pentagram_edge(y);
            for (int a = 0; a < 8; ++a)
                for (int b = 0; b < 8; ++b) {
                    const double q = p(x, y, a, b);
                    const auto& la = s.alice[x].labels[a];
                    const auto& lb = s.bob[y].labels[b];
                    win += g.wins(x, y, a, b) ? q : 0.0;
                    if ((la[0] ^ la[1] ^ la[2] ^ la[3]) == abcd(ex) && (lb[0] ^ lb[1] ^ lb[2] ^ lb[3]) == abcd(ey))
                        one += q;
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j)
                            if (ex[i] == ey[j] && la[i] == lb[j])
                                two += q;
                    three += la == lb ? q : 0.0;
                }
            worst = std::max({worst, std::fabs(win - 1), std::fabs(one - 1)});
            worst = std::max(worst, std::fabs((x == y ? three : two) - 1));
        }
    v.require(worst <= 1e-9, "all 25 pairs won with conditions (I)-(III)");
    v.require(std::fabs(winning_probability(g, p) - 1.0) <= 1e-9, "omega = 1");
    v.detail << "largest deviation from probability 1: " << worst;
}

void pentagram_tightness(Verdict& v)
{
    const auto e = expression_from_game(pentagram_game());
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = tightness_verdict(e, Rational(23, 25));
    const double s = seconds_since(t0);
    v.require(r.saturating == 628, "628 saturating vertices");
    v.require(r.linear_rank == 460, "linear rank 460");
    v.require(r.required_rank == 1295, "dimension 1295");
    v.require(!r.tight, "verdict not tight");
    v.require(s <= 7200.0, "within 2 hours");
    v.detail << "saturating " << r.saturating << ", rank " << r.linear_rank << " of " << r.required_rank << ", "
             << (r.tight ? "tight" : "not tight") << " in " << s << " s";
}

void lifting_ranks(Verdict& v)
{
    auto rank_of = [](const Game& g, std::uint64_t* count = nullptr) {
        const auto r = classical_value(g, std::size_t{1} << 24);
        if (count)
            *count = r.optimizer_count;
        return vertex_rank(g.scenario, r.optimizers);
    };
    const std::size_t chsh = rank_of(chsh_game());
    v.require(chsh == 8, "CHSH rank 8");
    v.detail << "CHSH " << chsh;
    const std::size_t want[] = {23, 46, 77};
    for (int n = 2; n <= 4; ++n) {
        const std::size_t r = rank_of(lift_game(chsh_game(), n));
        v.require(r == want[n - 2], "lifted CHSH n=" + std::to_string(n));
        v.detail << ", n=" << n << " " << r;
    }
    const std::size_t ms = rank_of(magic_square_game());
    v.require(ms == 99, "magic square rank 99");
    std::uint64_t count = 0;
    const std::size_t ms2 = rank_of(lift_game(magic_square_game(), 2), &count);
    v.require(count == 20736 && ms2 == 359, "lifted magic square 20736 optimizers, rank 359");
    v.detail << "; MS " << ms << ", MS n=2 " << count << " optimizers rank " << ms2;
}

void local_contents(Verdict& v)
{
    const ExactBehavior chsh = rationalize_collins_gisin(chsh_optimal_behavior());
    const auto c = local_content(chsh);
    const double qc = c.q_nonlocal.get_d();
    v.require(std::fabs(qc - (std::sqrt(2.0) - 1.0)) <= 1e-6, "CHSH q_NL = sqrt2 - 1");

    const auto h = hardy_seesaw(hardy_zeros().cells());
    LocalContentOptions opt;
    opt.zero_tol = 1e-9;
    const double qh = local_content(h.behavior, opt).q_nonlocal;
    v.require(std::fabs(qh - (5.0 * std::sqrt(5.0) - 11.0)) <= 1e-3, "Hardy q_NL = 5 sqrt5 - 11");

    const ExactBehavior ms = snap_dyadic(behavior_from_strategy(magic_square_strategy()));
    const auto m = local_content(ms);
    bool supported = true;
    for (std::size_t i = 0; i < ms.table().size(); ++i)
        supported = supported && (m.dual.coefficients[i] == 0 || ms[i] == 0);
    v.require(m.q_local == 0, "magic square q_L = 0 exactly");
    v.require(supported && min_vertex_value(m.dual) >= 1, "dual supported on the zeros");
    v.detail << "CHSH q_NL " << qc << ", Hardy q_NL " << qh << ", MS q_L " << m.q_local;
}

void tables_of_zeros(Verdict& v)
{
    const auto hardy = hardy_zeros();
    v.require(is_lhv_realizable(hardy).realizable, "Hardy realizable");
    v.require(assignment_avoids(hardy, LhvAssignment{{1, 0}, {0, 1}}), "textbook Hardy witness");
    const auto avn = fixture("avn_3434.json");
    v.require(!is_lhv_realizable(avn).realizable, "AVN table nonlocal");
    int realizable_blocks = 0;
    const Scenario& sc = avn.scenario();
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            TableOfZeros d = avn;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    d = d.without(static_cast<std::uint32_t>(sc.index(x, y, a, b)));
            realizable_blocks += is_lhv_realizable(d).realizable;
        }
    v.require(realizable_blocks == 9, "all 9 block deletions realizable");
    const auto c = fixture("cntz_3233.json");
    v.require(!is_lhv_realizable(c).realizable && is_critical(c), "(3,2;3,3) table critical");
    v.detail << "block deletions realizable " << realizable_blocks << "/9";
}

void cntz_oracle(Verdict& v)
{
    const Scenario sc(2, 2, 2, 2);
    const auto expected = oracle::critical_classes(sc);
    const auto group = oracle::all_relabelings(sc);
    const auto r = enumerate_cntz(sc);
    std::set<std::uint64_t> got;
    for (const auto& t : r.critical)
        got.insert(oracle::orbit_min(group, oracle::to_mask(t)));
    v.require(r.critical.size() == expected.size() && got == expected, "class sets equal");
    v.detail << "library " << r.critical.size() << " classes, brute force " << expected.size();

    // Reported only; the class count does not gate the criterion.
    if (std::getenv("BELLNL_ACCEPTANCE_SKIP_STRETCH") == nullptr) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto big = enumerate_cntz(Scenario(3, 3, 3, 2));
        std::size_t critical = 0, infeasible = 0;
        for (const auto& t : big.critical) {
            critical += is_critical(t);
            infeasible += npa_feasible(t).verdict == SdpVerdict::infeasible_with_margin;
        }
        v.detail << "; stretch (3,3;3,2): " << big.critical.size() << " classes (223 expected, not gating), "
                 << critical << " critical, " << infeasible << " NPA-infeasible, " << seconds_since(t0) << " s";
    } else {
        v.detail << "; stretch (3,3;3,2) skipped";
    }
}

void npa(Verdict& v)
{
    const double ch = npa_upper_bound(ch_expression()).value;
    v.require(std::fabs(ch - 0.2071) <= 1e-3, "CH bound 0.2071");
    const double chsh = npa_upper_bound(chsh_correlator_expression()).value;
    v.require(std::fabs(chsh - 2.0 * std::sqrt(2.0)) <= 1e-3, "CHSH bound 2 sqrt2");
    const auto avn = npa_feasible(fixture("avn_3434.json"));
    v.require(avn.verdict == SdpVerdict::feasible, "AVN table feasible");
    int infeasible = 0;
    for (int i = 0; i < 8; ++i)
        infeasible += npa_feasible(fixture("cntz_3332_" + std::to_string(i) + ".json")).verdict ==
                      SdpVerdict::infeasible_with_margin;
    v.require(infeasible >= 5, "at least 5 sampled CNTZs infeasible with margin");
    v.detail << "CH " << ch << ", CHSH " << chsh << ", AVN lambda " << avn.lambda_star << ", infeasible "
             << infeasible << "/8";
}

void equivalence(Verdict& v)
{
    auto run = [&](const std::string& name, const AnyBehavior& p, bool want) {
        const auto r = verify_equivalence(p);
        const bool ok = r.avn == want && r.pt == want && r.fn == want && r.fns == want;
        v.require(ok, name);
        v.detail << name << " " << (r.avn ? "Y" : "N") << (r.pt ? "Y" : "N") << (r.fn ? "Y" : "N")
                 << (r.fns ? "Y" : "N") << " ";
    };
    run("magic square", snap_dyadic(behavior_from_strategy(magic_square_strategy())), true);
    run("pentagram", snap_dyadic(behavior_from_strategy(pentagram_strategy())), true);
    run("CHSH", chsh_optimal_behavior(), false);
    run("Hardy", hardy_seesaw(hardy_zeros().cells()).behavior, false);
    v.detail << "(AVN PT FN FNS)";
}

// Generalized PR box: p = 1/d iff b = a + f(x,y) mod d.
ExactBehavior shifted_box(const Scenario& sc, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> f(0, sc.na() - 1);
    ExactBehavior p(sc);
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y) {
            const int s = f(rng);
            for (int a = 0; a < sc.na(); ++a)
                p(x, y, a, (a + s) % sc.na()) = Rational(1, sc.na());
        }
    return p;
}

ExactBehavior random_ns(const Scenario& sc, std::mt19937_64& rng, bool interior)
{
    std::uniform_int_distribution<int> w(1, 20), pick_a(0, sc.na() - 1), pick_b(0, sc.nb() - 1);
    DeterministicStrategy s{std::vector<int>(sc.nx()), std::vector<int>(sc.ny())};
    for (auto& a : s.alice)
        a = pick_a(rng);
    for (auto& b : s.bob)
        b = pick_b(rng);
    ExactBehavior p = mix(oracle::frac(w(rng), 21), shifted_box(sc, rng), induced_behavior<Rational>(s, sc));
    if (interior)
        p = mix(oracle::frac(w(rng), 21), p, uniform_behavior<Rational>(sc));
    return p;
}

void properties(Verdict& v)
{
    std::mt19937_64 rng(2024);
    const Scenario scs[] = {Scenario(2, 2, 2, 2), Scenario(3, 2, 3, 2), Scenario(2, 3, 2, 3), Scenario(3, 3, 3, 3)};
    int gap_ok = 0, bound_ok = 0;
    for (int t = 0; t < 100; ++t) {
        const Scenario& sc = scs[t % 4];
        const ExactBehavior p = random_ns(sc, rng, false);
        const auto r = local_content(p);
        Rational primal = 0;
        std::vector<Rational> rest = p.table();
        for (const auto& [s, w] : r.weights) {
            primal += w;
            for (auto c : vertex_support(sc, s))
                rest[c] -= w;
        }
        bool feasible = std::all_of(rest.begin(), rest.end(), [](const Rational& x) { return x >= 0; });
        feasible = feasible && std::all_of(r.dual.coefficients.begin(), r.dual.coefficients.end(),
                                           [](const Rational& x) { return x >= 0; });
        feasible = feasible && min_vertex_value(r.dual) >= 1;
        gap_ok += feasible && primal == r.q_local && evaluate(r.dual, p) == r.q_local;

        const ExactBehavior q = random_ns(sc, rng, true);
        Rational pmin = 1;
        for (const auto& x : q.table())
            pmin = std::min(pmin, x);
        bound_ok += pmin > 0 && local_content(q).q_local >= pmin * sc.na() * sc.nb();
    }
    v.require(gap_ok == 100, "zero duality gap on 100 behaviors");
    v.require(bound_ok == 100, "q_L >= p_min |A||B| on 100 interior points");

    int groups = 0, groups_ok = 0;
    for (int nx = 1; nx <= 7; ++nx)
        for (int na = 1; na <= 7; ++na)
            for (int ny = 1; ny <= 7; ++ny)
                for (int nb = 1; nb <= 7; ++nb) {
                    const Scenario sc(nx, na, ny, nb);
                    const mpz_class order = bell_group_order(sc);
                    if (order > 10000)
                        continue;
                    ++groups;
                    groups_ok += closure_size(bell_group(sc), 20000) == order.get_ui();
                }
    v.require(groups == groups_ok, "group order equals closure size");

    SeesawOptions opt;
    opt.restarts = 2;
    std::vector<QuantumStrategy> strategies{pentagram_strategy(), magic_square_strategy(),
                                            seesaw_optimize(ch_expression(), 2, 2, opt).strategy,
                                            hardy_seesaw(hardy_zeros().cells(), 4).strategy};
    BellExpression random_expr(Scenario(3, 3, 2, 3));
    std::uniform_int_distribution<int> c(-3, 3);
    for (auto& x : random_expr.coefficients)
        x = c(rng);
    strategies.push_back(seesaw_optimize(random_expr, 3, 3, opt).strategy);
    double worst_eig = 0.0, worst_res = 0.0;
    for (const auto& s : strategies)
        for (NpaLevel level : {NpaLevel::one, NpaLevel::one_plus_ab}) {
            const auto ms = build_moment_structure(s.scenario(), level);
            const RealMatrix g = moment_matrix(ms, s);
            worst_eig = std::min(worst_eig, eig_symmetric(g).values(0));
            worst_res = std::max(worst_res, structural_residual(ms, g));
        }
    v.require(worst_eig >= -1e-9 && worst_res <= 1e-9, "moment matrices PSD and structured");
    v.detail << "duality " << gap_ok << "/100, content bound " << bound_ok << "/100, groups " << groups_ok << "/"
             << groups << ", min moment eigenvalue " << worst_eig;
}

} // namespace

int main()
{
    const std::pair<int, std::function<void(Verdict&)>> criteria[] = {
        {1, classical_values}, {2, pentagram_pt}, {3, pentagram_tightness}, {4, lifting_ranks},
        {5, local_contents},   {6, tables_of_zeros}, {7, cntz_oracle},       {8, npa},
        {9, equivalence},      {10, properties},
    };
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "[exception: " << e.what() << "]";
        }
        failed += !v.pass;
        std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << " (" << seconds_since(t0)
                  << " s) " << v.detail.str() << std::endl;
    }
    std::cout << (10 - failed) << "/10 criteria pass" << std::endl;
    return failed == 0 ? 0 : 1;
}
