#include "ousem/symmetry.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ousem/errors.hpp"
#include "ousem/linalg.hpp"

namespace ousem {

namespace {

bool exactly_diagonal(const Matrix& q) {
    for (int i = 0; i < q.rows(); ++i)
        for (int j = 0; j < q.cols(); ++j)
            if (i != j && q(i, j) != 0.0) return false;
    return true;
}

// Deterministic eigenvector orientation: first component of significant
// magnitude made positive.
void fix_column_signs(Matrix& cols) {
    for (int j = 0; j < cols.cols(); ++j) {
        const double lead = cols.col(j).cwiseAbs().maxCoeff();
        for (int i = 0; i < cols.rows(); ++i) {
            if (std::abs(cols(i, j)) > 1e-12 * lead) {
                if (cols(i, j) < 0.0) cols.col(j) *= -1.0;
                break;
            }
        }
    }
}

} // namespace

SymmetryReport check_reversibility(const OUModel& m, double tol_factor) {
    SymmetryReport r;
    const double norm_a = spectral_norm(m.A);
    const double norm_q = spectral_norm(m.Q);
    r.scale = std::max(norm_a * norm_q, 1e-300);
    r.tol = tol_factor * r.scale;

    r.commutator_residual = (m.A * m.Q - m.Q * m.A.transpose()).norm();
    bool ok = r.commutator_residual <= r.tol;

    const double t0 = 1.0 / std::max(norm_a, 1e-12);
    for (double f : {0.01, 0.1, 1.0, 10.0}) {
        const double t = f * t0;
        Matrix s = transition_matrix(m, t);
        const double res = (s * m.Q - m.Q * s.transpose()).norm();
        r.semigroup_residuals[t] = res;
        ok = ok && res <= tol_factor * std::max(spectral_norm(s) * norm_q, 1e-300);
    }
    r.is_symmetric = ok;

    // Contraction margin of S_Q over the same grid (diagnostic only; requires
    // an invertible Q).
    r.contraction_margin = std::numeric_limits<double>::quiet_NaN();
    try {
        Matrix qis = spd_inv_sqrt(m.Q);
        Matrix qs = psd_sqrt(m.Q);
        double margin = std::numeric_limits<double>::infinity();
        for (const auto& [t, res] : r.semigroup_residuals) {
            (void)res;
            Matrix sq = qis * transition_matrix(m, t) * qs;
            margin = std::min(margin, 1.0 - spectral_norm(sq));
        }
        r.contraction_margin = margin;
    } catch (const SingularQ&) {
    }
    return r;
}

bool classify_2x2(double a, double b, double c, double d, double q) {
    const double det = a * b - c * d;
    const bool drift_ok = a < 0.0 && det > 0.0;
    const bool balance = std::abs(d - c * q) <= 1e-14 * (std::abs(d) + std::abs(c * q) + 1.0);
    const bool split = (a - b) * (a - b) + 4.0 * c * c * q > 0.0;
    return drift_ok && balance && split;
}

Matrix OperatorBundle::s_q(double t) const {
    return frame_q * (-t * beta.array()).exp().matrix().asDiagonal() * frame_q.transpose();
}

Matrix OperatorBundle::s_0(double t) const {
    return frame_0 * (-t * beta_0.array()).exp().matrix().asDiagonal() * frame_0.transpose();
}

OperatorBundle build_operator_bundle(const OUModel& m, const GramianSet& g) {
    SymmetryReport rep = check_reversibility(m);
    if (!rep.is_symmetric)
        throw NotSymmetric("model failed the reversibility check (commutator residual " +
                           std::to_string(rep.commutator_residual) + ")");

    OperatorBundle b;
    if (exactly_diagonal(m.Q)) {
        // Entrywise roots keep the conjugation exact; the eigenvalue floor
        // applies all the same.
        Vector q = m.Q.diagonal();
        if (q.minCoeff() < 1e-13 * q.maxCoeff())
            throw SingularQ("diagonal noise entry below the relative floor 1e-13");
        b.q_sqrt = Matrix(q.array().sqrt().matrix().asDiagonal());
        b.q_inv_sqrt = Matrix(q.array().rsqrt().matrix().asDiagonal());
    } else {
        b.q_sqrt = psd_sqrt(m.Q);
        b.q_inv_sqrt = spd_inv_sqrt(m.Q); // throws SingularQ below the floor
    }
    b.qinf_sqrt = psd_sqrt(g.q_inf);
    b.qinf_inv_sqrt = spd_inv_sqrt(g.q_inf);

    // A Q and A Qinf are symmetric here; conjugating them keeps symmetry exact
    // up to roundoff, which the final symmetrization removes.
    Matrix aq = b.q_inv_sqrt * (m.A * m.Q) * b.q_inv_sqrt;
    b.a_q = 0.5 * (aq + aq.transpose());
    Matrix a0 = b.qinf_inv_sqrt * (m.A * g.q_inf) * b.qinf_inv_sqrt;
    b.a_0 = 0.5 * (a0 + a0.transpose());

    b.v = b.q_sqrt * b.qinf_inv_sqrt;

    Eigen::JacobiSVD<Matrix> svd(b.v, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Matrix w = svd.matrixU();
    Matrix x = svd.matrixV();
    for (int j = 0; j < w.cols(); ++j) {
        const double lead = w.col(j).cwiseAbs().maxCoeff();
        for (int i = 0; i < w.rows(); ++i) {
            if (std::abs(w(i, j)) > 1e-12 * lead) {
                if (w(i, j) < 0.0) {
                    w.col(j) *= -1.0;
                    x.col(j) *= -1.0;
                }
                break;
            }
        }
    }
    b.u = w * x.transpose();

    Eigen::SelfAdjointEigenSolver<Matrix> es_q(-b.a_q);
    b.beta = es_q.eigenvalues();
    b.frame_q = es_q.eigenvectors();
    fix_column_signs(b.frame_q);

    Eigen::SelfAdjointEigenSolver<Matrix> es_0(-b.a_0);
    b.beta_0 = es_0.eigenvalues();
    b.frame_0 = es_0.eigenvectors();
    fix_column_signs(b.frame_0);

    if (b.beta.minCoeff() <= 0.0)
        throw Error("conjugated generator is not negative definite; hypothesis fails");
    return b;
}

} // namespace ousem
