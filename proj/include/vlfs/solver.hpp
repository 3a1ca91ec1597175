#pragma once

#include <complex>
#include <memory>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "vlfs/errors.hpp"

namespace vlfs {

/// Sparse LU with partial pivoting (COLAMD column ordering; deterministic).
/// Immutable after construction; concurrent solves with distinct right-hand
/// sides are safe.
template <class Scalar>
class Factorization {
public:
    using Matrix = Eigen::SparseMatrix<Scalar>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit Factorization(const Matrix& A);

    int rows() const { return rows_; }

    /// Solves A x = b; throws DimensionError on size mismatch.
    Vector solve(const Vector& b) const;

    /// Relative residual ||A x - b|| / ||b|| (0 for b = 0).
    double residual(const Matrix& A, const Vector& x, const Vector& b) const;

private:
    std::shared_ptr<Eigen::SparseLU<Matrix>> lu_;
    int rows_ = 0;
};

template <class Scalar>
Factorization<Scalar> factorize(const Eigen::SparseMatrix<Scalar>& A) {
    return Factorization<Scalar>(A);
}

extern template class Factorization<double>;
extern template class Factorization<std::complex<double>>;

} // namespace vlfs
