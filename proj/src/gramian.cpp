#include "ousem/gramian.hpp"

#include <Eigen/Cholesky>

#include "ousem/errors.hpp"
#include "ousem/linalg.hpp"

namespace ousem {

namespace {

// Flat-frame pieces of the example2 discretization: the similarity
// A = D^{1/2} B D^{-1/2} with B = Delta_h - m symmetric negative definite
// and Q = D = diag(rho(z_i)). See presets.cpp for the construction.
struct Example2Frame {
    Vector rho_sqrt; // diag of D^{1/2}
    Matrix b;        // Delta_h - m I
};

Example2Frame example2_frame(const OUModel& m) {
    const auto& p = *m.ex2;
    const int n = p.n;
    const double h = 2.0 * p.halfwidth / (n + 1);
    Example2Frame f;
    f.rho_sqrt.resize(n);
    for (int i = 0; i < n; ++i) {
        const double z = -p.halfwidth + (i + 1) * h;
        f.rho_sqrt(i) = std::exp(-0.5 * p.kappa * std::abs(z));
    }
    f.b = Matrix::Zero(n, n);
    const double inv_h2 = 1.0 / (h * h);
    for (int i = 0; i < n; ++i) {
        f.b(i, i) = -2.0 * inv_h2 - p.m;
        if (i > 0) f.b(i, i - 1) = inv_h2;
        if (i + 1 < n) f.b(i, i + 1) = inv_h2;
    }
    return f;
}

} // namespace

Matrix transition_matrix(const OUModel& m, double t) {
    if (m.kind == ModelKind::Diagonal)
        return (t * m.A.diagonal()).array().exp().matrix().asDiagonal();
    return expm(m.A * t);
}

Matrix solve_lyapunov(const OUModel& m) {
    switch (m.kind) {
    case ModelKind::Diagonal: {
        Vector q_inf = -0.5 * m.qdiag->array() / m.alpha->array();
        return q_inf.asDiagonal();
    }
    case ModelKind::Example2: {
        // Q_inf = -1/2 A^{-1} Q = 1/2 D^{1/2} (-B)^{-1} D^{1/2}; the solve
        // happens on the well-conditioned symmetric factor (-B).
        Example2Frame f = example2_frame(m);
        Matrix rhs = f.rho_sqrt.asDiagonal();
        Matrix y = (-f.b).llt().solve(rhs);
        Matrix x = 0.5 * f.rho_sqrt.asDiagonal() * y;
        return 0.5 * (x + x.transpose());
    }
    case ModelKind::Dense:
    default:
        return solve_lyapunov_bartels_stewart(m.A, m.Q);
    }
}

Matrix finite_time_gramian(const OUModel& m, const Matrix& q_inf, double t) {
    if (t < 0.0) throw Error("finite_time_gramian: t must be nonnegative");
    if (t == 0.0) return Matrix::Zero(m.dim, m.dim);
    Matrix s = transition_matrix(m, t);
    Matrix q_t = q_inf - s * q_inf * s.transpose();
    return 0.5 * (q_t + q_t.transpose());
}

Matrix finite_time_gramian_direct(const OUModel& m, double t) {
    if (t < 0.0) throw Error("finite_time_gramian_direct: t must be nonnegative");
    const int d = m.dim;
    if (t == 0.0) return Matrix::Zero(d, d);
    // exp([[ -A, Q ], [ 0, A^T ]] t) has upper-right block
    // G = int_0^t exp(-A(t-s)) Q exp(A^T s) ds, and S(t) G = Q_t.
    Matrix block = Matrix::Zero(2 * d, 2 * d);
    block.topLeftCorner(d, d) = -m.A;
    block.topRightCorner(d, d) = m.Q;
    block.bottomRightCorner(d, d) = m.A.transpose();
    Matrix e = expm(block * t);
    Matrix q_t = transition_matrix(m, t) * e.topRightCorner(d, d);
    return 0.5 * (q_t + q_t.transpose());
}

GramianSet make_gramians(const OUModel& m) {
    GramianSet g;
    g.q_inf = solve_lyapunov(m);
    g.lyapunov_residual = lyapunov_residual(m.A, g.q_inf, m.Q);
    return g;
}

} // namespace ousem
