#include "core/linalg.hpp"

#include <Eigen/Dense>

namespace codedlab {

namespace {

Eigen::MatrixXcd to_eigen(const Matrix& m) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.at(i, j);
    return out;
}

Matrix from_eigen(const Eigen::MatrixXcd& e, Field field) {
    Matrix out(static_cast<size_t>(e.rows()), static_cast<size_t>(e.cols()), field);
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            out.at(static_cast<size_t>(i), static_cast<size_t>(j)) = e(i, j);
    return out;
}

}  // namespace

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

size_t numerical_rank(const Matrix& m) {
    if (m.size() == 0) return 0;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(to_eigen(m));
    return static_cast<size_t>(qr.rank());
}

Matrix orthonormal_basis(const Matrix& m) {
    require(m.rows() >= m.cols() && m.cols() >= 1, ErrorKind::InvalidInput,
            "orthonormal_basis expects a tall matrix");
    const Eigen::MatrixXcd a = to_eigen(m);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    require(static_cast<size_t>(qr.rank()) == m.cols(), ErrorKind::RankDeficient,
            "matrix loses column rank");
    // Column pivoting reorders columns but leaves the span intact, so the
    // first d Householder directions still span col(A).
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(
                                                 a.rows(), static_cast<Eigen::Index>(m.cols()));
    return from_eigen(q, Field::Complex);
}

Matrix pseudoinverse(const Matrix& m) {
    const Eigen::MatrixXcd a = to_eigen(m);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff =
        sv.size() == 0 ? 0.0
                       : sv(0) * std::max(m.rows(), m.cols()) *
                             std::numeric_limits<double>::epsilon();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    const Eigen::MatrixXcd pinv =
        svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    return from_eigen(pinv, m.field());
}

std::vector<double> sym_eigenvalues(const Matrix& m) {
    require(m.rows() == m.cols() && m.rows() >= 1, ErrorKind::InvalidInput,
            "eigenvalues need a square matrix");
    const double scale = std::max(m.frobenius_norm(), 1.0);
    require((m - m.adjoint()).frobenius_norm() <= 1e-10 * scale, ErrorKind::InvalidInput,
            "eigenvalues need a symmetric/Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m));
    require(solver.info() == Eigen::Success, ErrorKind::InvalidInput,
            "eigenvalue iteration failed");
    std::vector<double> out(static_cast<size_t>(solver.eigenvalues().size()));
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = solver.eigenvalues()(static_cast<Eigen::Index>(out.size() - 1 - i));
    return out;
}

Matrix solve_lu(const Matrix& a, const Matrix& rhs) {
    require(a.rows() == a.cols(), ErrorKind::InvalidInput, "LU solve needs a square system");
    require(a.rows() == rhs.rows(), ErrorKind::InvalidInput, "RHS row mismatch");
    const Eigen::MatrixXcd ae = to_eigen(a);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ae);
    const Eigen::MatrixXcd x = lu.solve(to_eigen(rhs));
    const double residual = (ae * x - to_eigen(rhs)).norm();
    const double scale = std::max(1.0, to_eigen(rhs).norm());
    require(std::isfinite(residual) && residual <= 1e-6 * scale, ErrorKind::SingularSystem,
            "linear system is singular or ill-conditioned");
    return from_eigen(x, Field::Complex);
}

Matrix solve_least_squares(const Matrix& a, const Matrix& rhs) {
    require(a.rows() == rhs.rows(), ErrorKind::InvalidInput, "RHS row mismatch");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(to_eigen(a));
    require(static_cast<size_t>(qr.rank()) == a.cols(), ErrorKind::RankDeficient,
            "least-squares matrix loses column rank");
    return from_eigen(qr.solve(to_eigen(rhs)),
                      (a.field() == Field::Complex || rhs.field() == Field::Complex)
                          ? Field::Complex
                          : Field::Real);
}

}  // namespace codedlab
