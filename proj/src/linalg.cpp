#include "ousem/linalg.hpp"

#include <complex>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "ousem/errors.hpp"

namespace ousem {

Matrix expm(const Matrix& a) {
    return a.exp();
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    if (a.rows() <= 32) return a.jacobiSvd().singularValues()(0);
    return a.bdcSvd().singularValues()(0);
}

Matrix psd_sqrt(const Matrix& a, double floor_rel) {
    Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    Vector lam = es.eigenvalues();
    const double lmax = lam.size() ? std::max(0.0, lam.maxCoeff()) : 0.0;
    Vector root(lam.size());
    for (int i = 0; i < lam.size(); ++i) {
        double v = lam(i);
        if (v < floor_rel * lmax) v = 0.0;
        root(i) = v > 0.0 ? std::sqrt(v) : 0.0;
    }
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

Matrix spd_inv_sqrt(const Matrix& a, double floor_rel) {
    Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    Vector lam = es.eigenvalues();
    const double lmax = lam.maxCoeff();
    if (lmax <= 0.0) throw SingularQ("matrix is not positive definite");
    Vector root(lam.size());
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) < floor_rel * lmax)
            throw SingularQ("eigenvalue below relative floor " + std::to_string(floor_rel));
        root(i) = 1.0 / std::sqrt(lam(i));
    }
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

Matrix solve_lyapunov_bartels_stewart(const Matrix& a, const Matrix& c) {
    using CMatrix = Eigen::MatrixXcd;
    const int d = static_cast<int>(a.rows());

    Eigen::ComplexSchur<Matrix> schur(a);
    if (schur.info() != Eigen::Success)
        throw NoUniqueSolution("Schur decomposition failed");
    const CMatrix t = schur.matrixT();
    const CMatrix u = schur.matrixU();

    // Transformed equation T Y + Y T^H = C~ with C~ = U^H C U.
    CMatrix ct = u.adjoint() * c.cast<std::complex<double>>() * u;

    // Eigenvalue clash test: lambda_i + conj(lambda_j) == 0 for some pair.
    const double scale = t.diagonal().cwiseAbs().maxCoeff() + 1e-300;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (std::abs(t(i, i) + std::conj(t(j, j))) < 1e-14 * scale)
                throw NoUniqueSolution("A and -A* share an eigenvalue");
        }
    }

    // Back-substitute column by column, last column first: column j couples
    // only to columns k > j through the upper triangle of T^H.
    CMatrix y = CMatrix::Zero(d, d);
    for (int j = d - 1; j >= 0; --j) {
        Eigen::VectorXcd rhs = ct.col(j);
        for (int k = j + 1; k < d; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
        CMatrix lhs = t;
        lhs.diagonal().array() += std::conj(t(j, j));
        y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }

    Matrix x = (u * y * u.adjoint()).real();
    // By uniqueness the solution of A X + X A^T = -C with symmetric C is
    // symmetric; remove roundoff skew.
    return -0.5 * (x + x.transpose());
}

double lyapunov_residual(const Matrix& a, const Matrix& x, const Matrix& c) {
    return (a * x + x * a.transpose() + c).norm();
}

bool is_hurwitz(const Matrix& a, double margin_rel) {
    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    const double scale = a.norm() + 1e-300;
    for (int i = 0; i < a.rows(); ++i) {
        if (es.eigenvalues()(i).real() >= -margin_rel * scale) return false;
    }
    return true;
}

} // namespace ousem
