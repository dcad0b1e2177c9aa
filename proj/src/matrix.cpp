#include "bellnl/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace bellnl {

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const
{
    if (cols_ != o.rows_)
        throw DimensionMismatchError("matrix product of incompatible shapes");
    RationalMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& aik = (*this)(i, k);
            if (sgn(aik) == 0)
                continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                out(i, j) += aik * o(k, j);
        }
    return out;
}

RationalMatrix kron(const RationalMatrix& a, const RationalMatrix& b)
{
    RationalMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

HermitianEigen eig_hermitian(const ComplexMatrix& m)
{
    if (m.rows() != m.cols())
        throw DimensionMismatchError("eigendecomposition of a non-square matrix");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw SymmetryError("matrix is not Hermitian (deviation " + std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success)
        throw Error("Hermitian eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

SymmetricEigen eig_symmetric(const RealMatrix& m)
{
    if (m.rows() != m.cols())
        throw DimensionMismatchError("eigendecomposition of a non-square matrix");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw SymmetryError("matrix is not symmetric (deviation " + std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (m + m.transpose()));
    if (es.info() != Eigen::Success)
        throw Error("symmetric eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

std::size_t float_rank(const RealMatrix& m, double rel_tol)
{
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<RealMatrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0)
        return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0))
            ++r;
    return r;
}

} // namespace bellnl
