#pragma once

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "bellnl/errors.hpp"
#include "bellnl/rational.hpp"

namespace bellnl {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static RationalMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    RationalMatrix transpose() const;
    RationalMatrix operator*(const RationalMatrix& o) const;
    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> a_;
};

RationalMatrix kron(const RationalMatrix& a, const RationalMatrix& b);

template <class Derived1, class Derived2>
Eigen::Matrix<typename Derived1::Scalar, Eigen::Dynamic, Eigen::Dynamic>
kron(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b)
{
    static_assert(std::is_same_v<typename Derived1::Scalar, typename Derived2::Scalar>,
                  "kron operands must share an entry mode");
    Eigen::Matrix<typename Derived1::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                                  a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

struct HermitianEigen {
    RealVector values;      ///< ascending
    ComplexMatrix vectors;  ///< orthonormal columns
};

struct SymmetricEigen {
    RealVector values;   ///< ascending
    RealMatrix vectors;  ///< orthonormal columns
};

/// Throws SymmetryError if M deviates from M^dagger by more than 1e-12 * max(1, |M|).
HermitianEigen eig_hermitian(const ComplexMatrix& m);
SymmetricEigen eig_symmetric(const RealMatrix& m);

/// Fraction-free (Bareiss) elimination.
std::size_t exact_rank(const RationalMatrix& m);

/// Singular values below 1e-8 * max are treated as zero.
std::size_t float_rank(const RealMatrix& m, double rel_tol = 1e-8);

/// Exact rank of an integer matrix given as sparse rows (column, value).
///
/// A lower bound comes from elimination modulo a prime and an upper bound from
/// a kernel basis lifted to Q and checked exactly against every row, so the
/// answer is exact whenever the bounds meet. Falls back to Bareiss otherwise.
struct SparseIntRow {
    std::vector<std::uint32_t> cols;
    std::vector<std::int64_t> vals;
};
std::size_t certified_rank(const std::vector<SparseIntRow>& rows, std::size_t cols);

/// Convenience for 0/1 rows given by their support.
std::size_t certified_rank_01(const std::vector<std::vector<std::uint32_t>>& supports, std::size_t cols);

} // namespace bellnl
