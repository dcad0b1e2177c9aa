#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bellnl/errors.hpp"
#include "bellnl/rational.hpp"

namespace bellnl {

enum class Sense { le, eq, ge };

/// max/min c.x subject to rows (a.x sense rhs) and per-variable bounds.
/// Unset lower bound means 0; lower = nullopt with free_lower means -inf.
template <class T> struct LinearProgramT {
    struct Row {
        std::vector<std::pair<std::size_t, T>> terms;
        Sense sense = Sense::le;
        T rhs{};
    };
    std::size_t num_vars = 0;
    std::vector<T> objective;
    std::vector<Row> rows;
    bool maximize = true;
    std::vector<std::optional<T>> lower;  ///< empty or num_vars long; nullopt = -inf
    std::vector<std::optional<T>> upper;  ///< empty or num_vars long; nullopt = +inf

    void add_row(std::vector<std::pair<std::size_t, T>> terms, Sense s, T rhs)
    {
        rows.push_back({std::move(terms), s, std::move(rhs)});
    }
};

using LinearProgram = LinearProgramT<Rational>;
using FloatLinearProgram = LinearProgramT<double>;

enum class LpStatus { optimal, infeasible, unbounded };

template <class T> struct LpResultT {
    LpStatus status = LpStatus::infeasible;
    T value{};
    std::vector<T> primal;
    /// One multiplier per user row, signed so that the dual objective
    /// sum(rhs * dual) plus the bound terms equals value at optimality.
    std::vector<T> dual;
    /// Multipliers of finite upper bounds (0 where absent).
    std::vector<T> upper_dual;
    std::size_t iterations = 0;
};

using LpResult = LpResultT<Rational>;
using FloatLpResult = LpResultT<double>;

/// Two-phase revised simplex with Bland's rule. Exact in Rational mode.
template <class T> LpResultT<T> lp_solve(const LinearProgramT<T>& lp);

/// Revised simplex over max c.x, A x = b, x >= 0, b >= 0, started from unit
/// basic columns. Columns may be appended between optimizations, which is how
/// column generation drives it.
template <class T> class SimplexCore {
public:
    struct Column {
        std::vector<std::pair<std::uint32_t, T>> entries;
        T cost{};
    };

    explicit SimplexCore(std::vector<T> b, double tol = 1e-9);

    std::size_t rows() const { return b_.size(); }
    std::size_t cols() const { return cols_.size(); }

    std::size_t add_column(Column c, bool enterable = true);
    /// Declares column j basic in row i; column j must be the unit vector e_i.
    void set_initial_basic(std::size_t row, std::size_t col);

    void set_cost(std::size_t col, T cost) { cols_[col].cost = std::move(cost); }
    void set_enterable(std::size_t col, bool e) { enterable_[col] = e; }

    enum class Outcome { optimal, unbounded, iteration_limit };

    /// Pivots until no enterable column has positive reduced cost. When
    /// generate is set it is called at each apparent optimum and may append
    /// columns; returning false ends the loop.
    Outcome optimize(const std::function<bool(SimplexCore&)>& generate = {},
                     std::size_t max_iterations = 50'000'000);

    /// Row duals y = c_B B^-1.
    std::vector<T> duals() const;
    T objective() const;
    std::vector<T> primal() const;
    T reduced_cost(std::size_t col, const std::vector<T>& y) const;
    T reduced_cost(const Column& c, const std::vector<T>& y) const;

    /// Tries to pivot an unwanted basic column (e.g. an artificial at zero)
    /// out of its row using any allowed nonbasic column.
    bool drive_out(std::size_t row, const std::function<bool(std::size_t)>& allowed);
    std::size_t basic_col(std::size_t row) const { return basis_[row]; }
    const std::vector<std::size_t>& basis() const { return basis_; }
    /// Replaces the basis, recomputing B^-1 and the basic values. Returns
    /// false (leaving the old basis) if B is singular or the point infeasible.
    bool set_basis(const std::vector<std::size_t>& cols);
    bool is_basic(std::size_t col) const { return pos_[col] >= 0; }

    std::size_t iterations() const { return iterations_; }

private:
    std::vector<T> solve_column(const Column& c) const;
    void pivot(std::size_t row, std::size_t col, const std::vector<T>& u);
    void refactor();
    bool positive(const T& v) const;

    std::vector<T> b_;
    std::vector<Column> cols_;
    std::vector<bool> enterable_;
    std::vector<long> pos_;
    std::vector<std::size_t> basis_;
    std::vector<T> binv_;  // row-major m x m
    std::vector<T> xb_;
    double tol_;
    std::size_t iterations_ = 0;
    std::size_t since_refactor_ = 0;
};

} // namespace bellnl
