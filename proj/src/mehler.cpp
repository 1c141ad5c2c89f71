#include "ousem/mehler.hpp"

#include <cmath>

#include "ousem/errors.hpp"
#include "ousem/linalg.hpp"
#include "ousem/rng.hpp"

namespace ousem {

TransitionKernel make_transition_kernel(const OUModel& m, const GramianSet& g, double t) {
    if (t < 0.0) throw Error("transition kernel needs t >= 0");
    TransitionKernel k;
    k.t = t;
    k.s_t = transition_matrix(m, t);
    k.q_t = finite_time_gramian(m, g.q_inf, t);
    k.q_t_sqrt = psd_sqrt(k.q_t, 1e-15);
    return k;
}

namespace {

double rt_quadrature_impl(const OUModel& m, const GramianSet& g,
                          const std::function<double(const Vector&)>& phi, const Vector& x,
                          double t, int nodes) {
    TransitionKernel k = make_transition_kernel(m, g, t);
    Vector mean = k.s_t * x;
    return gaussian_expectation(m.dim, nodes, [&](const Vector& xi) {
        return phi(mean + k.q_t_sqrt * xi);
    });
}

} // namespace

double evaluate_rt_quadrature(const OUModel& m, const GramianSet& g, const Polynomial& phi,
                              const Vector& x, double t, int nodes_per_axis) {
    if (phi.degree() >= 2 * nodes_per_axis)
        throw QuadratureOrderTooLow("degree " + std::to_string(phi.degree()) +
                                    " needs more than " + std::to_string(nodes_per_axis) +
                                    " nodes per axis");
    return rt_quadrature_impl(
        m, g, [&phi](const Vector& y) { return phi.evaluate(y); }, x, t, nodes_per_axis);
}

double evaluate_rt_quadrature(const OUModel& m, const GramianSet& g,
                              const std::function<double(const Vector&)>& phi, const Vector& x,
                              double t, int nodes_per_axis) {
    return rt_quadrature_impl(m, g, phi, x, t, nodes_per_axis);
}

McEstimate evaluate_rt_monte_carlo(const OUModel& m, const GramianSet& g,
                                   const std::function<double(const Vector&)>& phi,
                                   const Vector& x, double t, long samples, std::uint64_t seed) {
    if (samples < 2) throw Error("monte carlo estimate needs at least 2 samples");
    TransitionKernel k = make_transition_kernel(m, g, t);
    Vector mean_map = k.s_t * x;

    double acc = 0.0, acc2 = 0.0;
    Vector xi(m.dim);
    for (long i = 0; i < samples; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        for (int j = 0; j < m.dim; ++j) xi(j) = rng.normal();
        const double v = phi(mean_map + k.q_t_sqrt * xi);
        acc += v;
        acc2 += v * v;
    }
    McEstimate est;
    est.samples = samples;
    est.mean = acc / samples;
    const double var = std::max(0.0, acc2 / samples - est.mean * est.mean);
    est.std_error = std::sqrt(var / samples);
    return est;
}

GradientBoundReport check_gradient_bound(const OUModel& m, const GramianSet& g,
                                         const OperatorBundle& b,
                                         const std::function<double(const Vector&)>& phi,
                                         double phi_sup_norm, const std::vector<double>& t_grid,
                                         const GradientBoundOptions& opts) {
    GradientBoundReport rep;
    const double norm_a = spectral_norm(m.A);
    const double scale = std::sqrt(std::max(g.q_inf.diagonal().maxCoeff(), 1e-30));
    const double h = opts.fd_step_rel * scale;

    // Point cloud drawn once from the invariant measure.
    std::vector<Vector> cloud;
    for (int j = 0; j < opts.cloud_size; ++j) {
        CounterRng rng(opts.seed, static_cast<std::uint64_t>(j));
        Vector z(m.dim);
        for (int i = 0; i < m.dim; ++i) z(i) = rng.normal();
        cloud.push_back(b.qinf_sqrt * z);
    }

    for (double t : t_grid) {
        if (t < 1e-8 / std::max(norm_a, 1e-30))
            throw SingularQt("t below 1e-8/||A||; Q_t is numerically singular");
        GradientBoundPoint pt;
        pt.t = t;
        Matrix s = transition_matrix(m, t);
        Matrix q_t = finite_time_gramian(m, g.q_inf, t);
        Matrix qt_inv_sqrt;
        try {
            qt_inv_sqrt = spd_inv_sqrt(q_t, 1e-15);
        } catch (const SingularQ&) {
            throw SingularQt("Q_t numerically singular at t = " + std::to_string(t));
        }
        pt.matrix_norm = spectral_norm(qt_inv_sqrt * s * b.q_sqrt);
        pt.matrix_bound = 1.0 / std::sqrt(t);
        rep.matrix_ok = rep.matrix_ok && pt.matrix_norm <= pt.matrix_bound + 1e-12;

        double sup = 0.0;
        Vector grad(m.dim);
        for (const Vector& x : cloud) {
            for (int i = 0; i < m.dim; ++i) {
                Vector xp = x, xm = x;
                xp(i) += h;
                xm(i) -= h;
                const double fp =
                    evaluate_rt_quadrature(m, g, phi, xp, t, opts.nodes_per_axis);
                const double fm =
                    evaluate_rt_quadrature(m, g, phi, xm, t, opts.nodes_per_axis);
                grad(i) = (fp - fm) / (2.0 * h);
            }
            sup = std::max(sup, (b.q_sqrt * grad).norm());
        }
        pt.sampled_sup = sup;
        pt.sampled_bound = std::sqrt(2.0 / M_PI) / std::sqrt(t) * phi_sup_norm * (1.0 + opts.slack);
        rep.sampled_ok = rep.sampled_ok && pt.sampled_sup <= pt.sampled_bound;
        rep.points.push_back(pt);
    }
    return rep;
}

AdaptiveResult integrate_under_mu(const OperatorBundle& b,
                                  const std::function<double(const Vector&)>& f,
                                  const QuadratureControl& ctrl) {
    Matrix push = b.qinf_sqrt * b.frame_0;
    const int d = static_cast<int>(push.rows());
    auto whitened = [&](const Vector& y) { return f(push * y); };
    AdaptiveResult r = gaussian_expectation_adaptive(d, whitened, ctrl);
    if (!r.converged && d <= 2) {
        // Kinked integrands (odd absolute powers, entropy terms) defeat the
        // fixed-node rule; fall back to locally refining panels with an
        // explicit error budget.
        const double tol = ctrl.atol + ctrl.rtol * std::abs(r.value);
        r.value = gaussian_expectation_nested(d, whitened, tol);
        r.converged = true;
    }
    return r;
}

double lp_norm_under_mu(const OperatorBundle& b, const std::function<double(const Vector&)>& f,
                        double p, const QuadratureControl& ctrl) {
    AdaptiveResult r = integrate_under_mu(
        b, [&](const Vector& x) { return std::pow(std::abs(f(x)), p); }, ctrl);
    if (!r.converged)
        throw QuadratureOrderTooLow("L^p quadrature did not stabilize by " +
                                    std::to_string(ctrl.max_nodes) + " nodes per axis");
    return std::pow(r.value, 1.0 / p);
}

HypercontractivityReport check_hypercontractivity_lsi(const OUModel& m, const GramianSet& g,
                                                      const OperatorBundle& b,
                                                      const Polynomial& phi, double p, double t,
                                                      const QuadratureControl& ctrl) {
    (void)m;
    (void)g;
    HypercontractivityReport rep;
    rep.p = p;
    rep.t = t;
    rep.beta = spectral_gap(b);
    rep.q_critical = 1.0 + (p - 1.0) * std::exp(2.0 * rep.beta * t);

    ChaosCoefficients c = expand(phi, b);
    Polynomial rt_phi = chaos_to_polynomial(apply_rt_spectral(c, b, t), b);

    rep.rhs = lp_norm_under_mu(
        b, [&](const Vector& x) { return phi.evaluate(x); }, p, ctrl);
    rep.lhs = lp_norm_under_mu(
        b, [&](const Vector& x) { return rt_phi.evaluate(x); }, rep.q_critical, ctrl);
    rep.margin = rep.rhs - rep.lhs;

    // LSI with the entropy integrand defined as 0 at zeros of phi.
    rep.entropy = integrate_under_mu(
                      b,
                      [&](const Vector& x) {
                          const double v = phi.evaluate(x);
                          if (v == 0.0) return 0.0;
                          return v * v * std::log(std::abs(v));
                      },
                      ctrl)
                      .value;
    ChaosCoefficients lc = apply_generator_spectral(c, b);
    double dirichlet = 0.0;
    for (const auto& [n, v] : lc.coeffs) {
        auto it = c.coeffs.find(n);
        if (it != c.coeffs.end()) dirichlet += -v * it->second;
    }
    rep.dirichlet = dirichlet;
    const double l2 = std::sqrt(c.l2_norm_sq());
    rep.lsi_rhs = (2.0 / rep.beta) * dirichlet + l2 * l2 * std::log(l2);
    rep.lsi_margin = rep.lsi_rhs - rep.entropy;
    return rep;
}

KolmogorovResult kolmogorov_residual(const OUModel& m, const GramianSet& g,
                                     const OperatorBundle& b, const Polynomial& phi, double t,
                                     const std::vector<Vector>& points) {
    (void)g;
    if (t <= 0.0) throw Error("kolmogorov_residual needs t > 0");
    const int d = m.dim;

    ChaosCoefficients c = expand(phi, b);
    ChaosCoefficients ct = apply_rt_spectral(c, b, t);
    Polynomial u = chaos_to_polynomial(ct, b);
    Polynomial du_dt = chaos_to_polynomial(apply_generator_spectral(ct, b), b);

    std::vector<Polynomial> grad = u.gradient();
    std::vector<Polynomial> hess = u.hessian();

    Matrix a_qs = b.a_q * b.q_sqrt; // A_Q composed with the Q-direction derivative

    KolmogorovResult out;
    Vector gx(d);
    Matrix hx(d, d);
    for (const Vector& x : points) {
        for (int i = 0; i < d; ++i) gx(i) = grad[i].evaluate(x);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) hx(i, j) = hess[static_cast<size_t>(i) * d + j].evaluate(x);

        const double dt_val = du_dt.evaluate(x);
        const double drift_form =
            dt_val - 0.5 * (m.Q * hx).trace() - x.dot(m.A.transpose() * gx);

        // Whitened form: 1/2 tr((D^Q)^2 u) + <Q^{-1/2} x, A_Q D^Q u> with
        // D^Q u = Q^{1/2} D u.
        const double whitened_form = dt_val -
                                     0.5 * (b.q_sqrt * hx * b.q_sqrt).trace() -
                                     (b.q_inv_sqrt * x).dot(a_qs * gx);

        out.residual_drift_form = std::max(out.residual_drift_form, std::abs(drift_form));
        out.residual_whitened_form =
            std::max(out.residual_whitened_form, std::abs(whitened_form));
        out.form_agreement =
            std::max(out.form_agreement, std::abs(drift_form - whitened_form));
    }
    return out;
}

} // namespace ousem
