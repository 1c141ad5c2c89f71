#include "ousem/presets.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ousem/errors.hpp"

namespace ousem {

OUModel preset_example1(int n) {
    if (n < 1) throw SchemaViolation("example1 truncation must be >= 1");
    OUModel m;
    m.kind = ModelKind::Diagonal;
    m.dim = n;
    Vector alpha(n), q(n);
    for (int k = 1; k <= n; ++k) {
        alpha(k - 1) = -1.0 / k;
        q(k - 1) = 1.0 / (static_cast<double>(k) * k * k);
    }
    m.alpha = alpha;
    m.qdiag = q;
    m.A = Matrix(alpha.asDiagonal());
    m.Q = Matrix(q.asDiagonal());
    return m;
}

OUModel preset_example2(double kappa, double m_mass, double halfwidth, int n) {
    if (!(kappa > 0.0) || !(m_mass > 0.0))
        throw SchemaViolation("example2 requires kappa > 0 and m > 0");
    if (n < 16) throw SchemaViolation("example2 requires n >= 16");
    if (!(halfwidth > 0.0)) throw SchemaViolation("example2 requires halfwidth > 0");

    const double h = 2.0 * halfwidth / (n + 1);

    Vector rho_sqrt(n);
    for (int i = 0; i < n; ++i) {
        const double z = -halfwidth + (i + 1) * h;
        rho_sqrt(i) = std::exp(-0.5 * kappa * std::abs(z));
    }

    // Flat-frame drift: Dirichlet Laplacian minus the mass term.
    Matrix b = Matrix::Zero(n, n);
    const double inv_h2 = 1.0 / (h * h);
    for (int i = 0; i < n; ++i) {
        b(i, i) = -2.0 * inv_h2 - m_mass;
        if (i > 0) b(i, i - 1) = inv_h2;
        if (i + 1 < n) b(i, i + 1) = inv_h2;
    }

    OUModel m;
    m.kind = ModelKind::Example2;
    m.dim = n;
    m.ex2 = Example2Params{kappa, m_mass, halfwidth, n};
    // A = D^{1/2} B D^{-1/2}: entrywise scaling keeps the band structure.
    m.A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j)
            m.A(i, j) = rho_sqrt(i) * b(i, j) / rho_sqrt(j);
    }
    m.Q = Matrix(rho_sqrt.array().square().matrix().asDiagonal());
    return m;
}

Vector example2_harmonic_direction(const OUModel& m) {
    if (m.kind != ModelKind::Example2 || !m.ex2)
        throw Error("harmonic direction is defined for example2 models only");
    const auto& p = *m.ex2;
    const double h = 2.0 * p.halfwidth / (p.n + 1);
    const double root_m = std::sqrt(p.m);
    Vector g(p.n);
    for (int i = 0; i < p.n; ++i) {
        const double z = -p.halfwidth + (i + 1) * h;
        g(i) = std::sqrt(h) * std::exp(-0.5 * p.kappa * std::abs(z)) * std::exp(root_m * z);
    }
    return g;
}

double example2_harmonic_residual(const OUModel& m) {
    Vector g = example2_harmonic_direction(m);
    return (m.A * g).norm() / g.norm();
}

Matrix example2_conjugated_drift(const OUModel& m) {
    if (m.kind != ModelKind::Example2)
        throw Error("conjugated drift accessor is for example2 models");
    const int n = m.dim;
    Matrix b(n, n);
    for (int i = 0; i < n; ++i) {
        const double qi = std::sqrt(m.Q(i, i));
        for (int j = 0; j < n; ++j) b(i, j) = m.A(i, j) * std::sqrt(m.Q(j, j)) / qi;
    }
    return 0.5 * (b + b.transpose());
}

double example2_sq_norm(const OUModel& m, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(-example2_conjugated_drift(m));
    return std::exp(-es.eigenvalues().minCoeff() * t);
}

} // namespace ousem
