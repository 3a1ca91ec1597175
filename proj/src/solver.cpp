#include "vlfs/solver.hpp"

#include <sstream>

namespace vlfs {

namespace {

long parse_pivot_index(const std::string& message) {
    // Eigen reports e.g. "...SINGULAR AT COLUMN 3"; pull the trailing number.
    long pivot = -1;
    std::size_t pos = message.find_last_not_of("0123456789");
    if (pos != std::string::npos && pos + 1 < message.size())
        pivot = std::stol(message.substr(pos + 1));
    return pivot;
}

} // namespace

template <class Scalar>
Factorization<Scalar>::Factorization(const Matrix& A) {
    if (A.rows() != A.cols())
        throw DimensionError("factorize: matrix must be square");
    rows_ = static_cast<int>(A.rows());
    Matrix compressed = A;
    compressed.makeCompressed();
    lu_ = std::make_shared<Eigen::SparseLU<Matrix>>();
    lu_->compute(compressed);
    if (lu_->info() != Eigen::Success) {
        const std::string msg = lu_->lastErrorMessage();
        throw SingularMatrixError("factorize: " + (msg.empty() ? "singular matrix" : msg),
                                  parse_pivot_index(msg));
    }
}

template <class Scalar>
typename Factorization<Scalar>::Vector
Factorization<Scalar>::solve(const Vector& b) const {
    if (b.size() != rows_) {
        std::ostringstream msg;
        msg << "solve: rhs size " << b.size() << " does not match system size " << rows_;
        throw DimensionError(msg.str());
    }
    Vector x = lu_->solve(b);
    if (lu_->info() != Eigen::Success)
        throw SingularMatrixError("solve: back-substitution failed", -1);
    return x;
}

template <class Scalar>
double Factorization<Scalar>::residual(const Matrix& A, const Vector& x,
                                       const Vector& b) const {
    const double nb = b.norm();
    if (nb == 0.0) return (A * x).norm() == 0.0 ? 0.0 : (A * x).norm();
    return (A * x - b).norm() / nb;
}

template class Factorization<double>;
template class Factorization<std::complex<double>>;

} // namespace vlfs
