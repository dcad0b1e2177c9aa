#include <doctest.h>

#include <cmath>

#include "bellnl/lp.hpp"
#include "bellnl/matrix.hpp"
#include "bellnl/sdp.hpp"

using namespace bellnl;

namespace {

// Dual objective of lp_solve's sign convention: sum rhs * dual + upper * upper_dual.
template <class T> T dual_objective(const LinearProgramT<T>& lp, const LpResultT<T>& r)
{
    T s{};
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
        s += lp.rows[i].rhs * r.dual[i];
    for (std::size_t j = 0; j < lp.upper.size(); ++j)
        if (lp.upper[j])
            s += *lp.upper[j] * r.upper_dual[j];
    return s;
}

} // namespace

TEST_CASE("small exact LP with its duals")
{
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {1, 1};
    lp.add_row({{0, 1}, {1, 2}}, Sense::le, 4);
    lp.add_row({{0, 3}, {1, 1}}, Sense::le, 6);
    const auto r = lp_solve(lp);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == Rational(14, 5));
    CHECK(r.primal[0] == Rational(8, 5));
    CHECK(r.primal[1] == Rational(6, 5));
    CHECK(r.dual[0] == Rational(2, 5));
    CHECK(r.dual[1] == Rational(1, 5));
    CHECK(dual_objective(lp, r) == r.value);
}

TEST_CASE("minimization with equality and ge rows")
{
    LinearProgram lp;
    lp.num_vars = 3;
    lp.maximize = false;
    lp.objective = {2, 3, 1};
    lp.add_row({{0, 1}, {1, 1}, {2, 1}}, Sense::eq, 1);
    lp.add_row({{0, 1}, {1, -1}}, Sense::ge, Rational(1, 2));
    const auto r = lp_solve(lp);
    REQUIRE(r.status == LpStatus::optimal);
    // x2 is cheapest but x0 - x1 >= 1/2 forces x0 >= 1/2.
    CHECK(r.value == Rational(3, 2));
    CHECK(dual_objective(lp, r) == r.value);
}

TEST_CASE("infeasible and unbounded programs")
{
    LinearProgram inf;
    inf.num_vars = 1;
    inf.objective = {1};
    inf.add_row({{0, 1}}, Sense::le, 1);
    inf.add_row({{0, 1}}, Sense::ge, 2);
    CHECK(lp_solve(inf).status == LpStatus::infeasible);

    LinearProgram unb;
    unb.num_vars = 2;
    unb.objective = {1, 0};
    unb.add_row({{0, 1}, {1, -1}}, Sense::le, 1);
    CHECK(lp_solve(unb).status == LpStatus::unbounded);
}

TEST_CASE("Bland's rule terminates on Beale's cycling example")
{
    LinearProgram lp;
    lp.num_vars = 4;
    lp.objective = {Rational(3, 4), -20, Rational(1, 2), -6};
    lp.add_row({{0, Rational(1, 4)}, {1, -8}, {2, -1}, {3, 9}}, Sense::le, 0);
    lp.add_row({{0, Rational(1, 2)}, {1, -12}, {2, Rational(-1, 2)}, {3, 3}}, Sense::le, 0);
    lp.add_row({{2, 1}}, Sense::le, 1);
    const auto r = lp_solve(lp);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == Rational(5, 4));
    CHECK(dual_objective(lp, r) == r.value);
}

TEST_CASE("variable bounds, free variables and upper duals")
{
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {1, -1};
    lp.lower = {Rational(0), std::nullopt};
    lp.upper = {Rational(3), std::nullopt};
    lp.add_row({{1, 1}}, Sense::ge, -2);
    const auto r = lp_solve(lp);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == 5);
    CHECK(r.primal[1] == -2);
    CHECK(dual_objective(lp, r) == r.value);
}

TEST_CASE("float LP agrees with the exact one")
{
    FloatLinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {1, 1};
    lp.add_row({{0, 1.0}, {1, 2.0}}, Sense::le, 4.0);
    lp.add_row({{0, 3.0}, {1, 1.0}}, Sense::le, 6.0);
    const auto r = lp_solve(lp);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == doctest::Approx(2.8).epsilon(1e-12));
}

TEST_CASE("exact and float ranks")
{
    RationalMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            m(i, j) = static_cast<long>(i + j);
    CHECK(exact_rank(m) == 2);
    CHECK(exact_rank(RationalMatrix::identity(4)) == 4);
    CHECK(float_rank(RealMatrix::Identity(5, 5)) == 5);
    CHECK(certified_rank_01({{0, 1}, {1, 2}, {0, 2}, {0, 1, 2}}, 3) == 3);
    CHECK(certified_rank_01({{0, 1}, {2, 3}, {0, 2}, {1, 3}}, 4) == 3);
}

TEST_CASE("Hermitian eigendecomposition is ascending and orthonormal")
{
    ComplexMatrix h(2, 2);
    h << 1.0, Complex(0, 1), Complex(0, -1), 1.0;
    const auto e = eig_hermitian(h);
    CHECK(e.values(0) == doctest::Approx(0.0));
    CHECK(e.values(1) == doctest::Approx(2.0));
    CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
    ComplexMatrix bad(2, 2);
    bad << 1.0, 1.0, 0.0, 1.0;
    CHECK_THROWS_AS(eig_hermitian(bad), SymmetryError);
}

TEST_CASE("SDP maximization of an off-diagonal entry")
{
    SdpProblem p;
    p.n = 2;
    p.constraints.push_back({{{0, 0, 1.0}}, 1.0});
    p.constraints.push_back({{{1, 1, 1.0}}, 1.0});
    p.objective.push_back({0, 1, 1.0});
    const auto r = sdp_maximize(p);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.upper_bound >= r.value - 1e-9);
}

TEST_CASE("SDP feasibility verdicts")
{
    SdpProblem p;
    p.n = 2;
    p.constraints.push_back({{{0, 0, 1.0}}, 1.0});
    p.constraints.push_back({{{1, 1, 1.0}}, 1.0});

    auto ok = p;
    ok.constraints.push_back({{{0, 1, 1.0}}, 0.5});
    const auto f = sdp_max_min_eigenvalue(ok);
    CHECK(f.verdict == SdpVerdict::feasible);
    CHECK(f.lambda_star == doctest::Approx(0.5).epsilon(1e-6));

    // The only point has eigenvalues -1 and 3.
    auto bad = p;
    bad.constraints.push_back({{{0, 1, 1.0}}, 2.0});
    const auto g = sdp_max_min_eigenvalue(bad);
    CHECK(g.verdict == SdpVerdict::infeasible_with_margin);
    CHECK(g.lambda_star == doctest::Approx(-1.0).epsilon(1e-6));

    auto clash = p;
    clash.constraints.push_back({{{0, 0, 1.0}}, 2.0});
    CHECK(sdp_max_min_eigenvalue(clash).verdict == SdpVerdict::infeasible_affine);
    CHECK_THROWS_AS(sdp_maximize(clash), StructuralError);

    CHECK(classify_lambda(0.0) == SdpVerdict::feasible);
    CHECK(classify_lambda(-1e-6) == SdpVerdict::indeterminate);
    CHECK(classify_lambda(-1e-3) == SdpVerdict::infeasible_with_margin);
}

TEST_CASE("unbounded SDP objective is reported")
{
    SdpProblem p;
    p.n = 2;
    p.objective.push_back({0, 0, 1.0});
    CHECK_THROWS_AS(sdp_maximize(p), UnboundedError);
}
