#include "bellnl/equivalence.hpp"

#include <cmath>

#include "bellnl/games.hpp"
#include "bellnl/polytope.hpp"
#include "bellnl/zeros.hpp"

namespace bellnl {

namespace {

bool supported_on(const BellExpression& d, const TableOfZeros& zeros)
{
    for (std::size_t i = 0; i < d.coefficients.size(); ++i)
        if (d.coefficients[i] != 0 && !zeros.contains(static_cast<std::uint32_t>(i)))
            return false;
    return true;
}

} // namespace

EquivalenceReport verify_equivalence(const std::variant<ExactBehavior, FloatBehavior>& any, double tol)
{
    EquivalenceReport r;
    const bool exact = std::holds_alternative<ExactBehavior>(any);
    r.zeros = exact ? zeros_from_behavior(std::get<ExactBehavior>(any))
                    : zeros_from_behavior(std::get<FloatBehavior>(any), tol);

    r.avn = !is_lhv_realizable(r.zeros).realizable;

    const Game g = game_from_zeros(r.zeros);
    r.omega_classical = classical_value(g, 0).omega_classical;
    bool wins = false;
    if (exact) {
        const Rational w = winning_probability(g, std::get<ExactBehavior>(any));
        r.omega_quantum = w.get_d();
        wins = w == 1;
    } else {
        r.omega_quantum = winning_probability(g, std::get<FloatBehavior>(any));
        wins = std::fabs(r.omega_quantum - 1.0) <= tol;
    }
    r.pt = r.omega_classical < 1 && wins;

    LocalContentOptions opt;
    opt.zero_tol = tol;
    if (exact) {
        const auto c = local_content(std::get<ExactBehavior>(any), opt);
        r.fn = c.q_nonlocal == 1;
        r.fns = c.q_local == 0 && supported_on(c.dual, r.zeros) && min_vertex_value(c.dual) > 0;
        r.q_nonlocal = c.q_nonlocal.get_d();
        r.q_nonlocal_exact = c.q_nonlocal;
    } else {
        const auto c = local_content(std::get<FloatBehavior>(any), opt);
        r.fn = std::fabs(c.q_nonlocal - 1.0) <= tol;
        r.fns = std::fabs(c.q_local) <= tol && supported_on(c.dual, r.zeros) && min_vertex_value(c.dual) > 0;
        r.q_nonlocal = c.q_nonlocal;
    }
    return r;
}

} // namespace bellnl
