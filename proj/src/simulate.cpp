#include "ousem/simulate.hpp"

#include <cmath>

#include "ousem/errors.hpp"
#include "ousem/linalg.hpp"
#include "ousem/rng.hpp"

namespace ousem {

Matrix sample_transition(const TransitionKernel& k, const Vector& x, int n, std::uint64_t seed) {
    if (n < 1) throw Error("sample_transition needs n >= 1");
    const int d = static_cast<int>(x.size());
    Vector mean = k.s_t * x;
    Matrix out(n, d);
    Vector xi(d);
    for (int i = 0; i < n; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        for (int j = 0; j < d; ++j) xi(j) = rng.normal();
        out.row(i) = (mean + k.q_t_sqrt * xi).transpose();
    }
    return out;
}

PathEnsemble simulate_paths(const OUModel& m, const GramianSet& g, StartLaw start,
                            const Vector& x0, double dt, int steps, int samples,
                            std::uint64_t seed) {
    if (dt <= 0.0) throw Error("simulate_paths needs dt > 0");
    if (steps < 1 || samples < 1) throw Error("simulate_paths needs steps >= 1, samples >= 1");
    const int d = m.dim;

    Matrix s_dt = transition_matrix(m, dt);
    Matrix q_dt_sqrt = psd_sqrt(finite_time_gramian(m, g.q_inf, dt), 1e-15);
    Matrix qinf_sqrt = psd_sqrt(g.q_inf, 1e-15);

    PathEnsemble e;
    e.dt = dt;
    e.steps = steps;
    e.samples = samples;
    e.start = start;
    e.seed = seed;
    e.model_hash = m.hash();
    e.states.assign(steps + 1, Matrix(samples, d));

    Vector z(d), xi(d);
    for (int i = 0; i < samples; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        if (start == StartLaw::Stationary) {
            for (int j = 0; j < d; ++j) xi(j) = rng.normal();
            z = qinf_sqrt * xi;
        } else {
            z = x0;
        }
        e.states[0].row(i) = z.transpose();
        for (int k = 0; k < steps; ++k) {
            for (int j = 0; j < d; ++j) xi(j) = rng.normal();
            z = s_dt * z + q_dt_sqrt * xi;
            e.states[k + 1].row(i) = z.transpose();
        }
    }
    return e;
}

DetailedBalanceResult test_detailed_balance(const PathEnsemble& e,
                                            const std::function<double(const Vector&)>& phi,
                                            const std::function<double(const Vector&)>& psi) {
    if (e.start != StartLaw::Stationary)
        throw NotStationaryStart("detailed balance requires a stationary-start ensemble");
    if (e.steps < 1) throw Error("detailed balance requires at least one step");

    const Matrix& z0 = e.states.front();
    const Matrix& z1 = e.states[1];
    const long n = e.samples;

    double acc = 0.0, acc2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const Vector a = z0.row(i).transpose();
        const Vector b = z1.row(i).transpose();
        const double diff = psi(a) * phi(b) - phi(a) * psi(b);
        acc += diff;
        acc2 += diff * diff;
    }
    DetailedBalanceResult r;
    r.samples = n;
    r.difference = acc / n;
    const double var = std::max(0.0, acc2 / n - r.difference * r.difference);
    r.std_error = std::sqrt(var / n);
    r.z = r.std_error > 0.0 ? r.difference / r.std_error : 0.0;
    return r;
}

double estimate_decay_rate(const OperatorBundle& b, const Polynomial& phi,
                           const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) throw Error("decay-rate fit needs at least two times");
    ChaosCoefficients c = remove_mean(expand(phi, b));
    if (c.coeffs.empty()) throw Error("observable is constant; no decay to fit");

    // Least-squares slope of log || Gamma(t) c || against t.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double t : t_grid) {
        const double norm2 = apply_rt_spectral(c, b, t).l2_norm_sq();
        const double y = 0.5 * std::log(norm2);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
    }
    const double n = static_cast<double>(t_grid.size());
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double estimate_decay_rate_mc(const OUModel& m, const GramianSet& g, const Polynomial& phi,
                              const std::vector<double>& t_grid, int samples,
                              std::uint64_t seed) {
    if (t_grid.size() < 2) throw Error("decay-rate fit needs at least two times");
    const int d = m.dim;
    Matrix qinf_sqrt = psd_sqrt(g.q_inf, 1e-15);

    // Mean under mu, removed so that the fitted norm is of R_t(phi - mean).
    double mean = 0.0;
    {
        Vector xi(d);
        for (int i = 0; i < samples; ++i) {
            CounterRng rng(seed ^ 0x5851F42D4C957F2DULL, static_cast<std::uint64_t>(i));
            for (int j = 0; j < d; ++j) xi(j) = rng.normal();
            mean += phi.evaluate(qinf_sqrt * xi);
        }
        mean /= samples;
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t ti = 0; ti < t_grid.size(); ++ti) {
        const double t = t_grid[ti];
        Matrix s_t = transition_matrix(m, t);
        Matrix q_t_sqrt = psd_sqrt(finite_time_gramian(m, g.q_inf, t), 1e-15);
        // ||R_t phi||^2 = E[ phi(Z^a_t) phi(Z^b_t) ] with two conditionally
        // independent continuations from the same stationary start.
        double acc = 0.0;
        Vector x0(d), xi(d);
        for (int i = 0; i < samples; ++i) {
            CounterRng rng(seed + ti, static_cast<std::uint64_t>(i));
            for (int j = 0; j < d; ++j) xi(j) = rng.normal();
            x0 = qinf_sqrt * xi;
            Vector mean_t = s_t * x0;
            for (int j = 0; j < d; ++j) xi(j) = rng.normal();
            const double va = phi.evaluate(mean_t + q_t_sqrt * xi) - mean;
            for (int j = 0; j < d; ++j) xi(j) = rng.normal();
            const double vb = phi.evaluate(mean_t + q_t_sqrt * xi) - mean;
            acc += va * vb;
        }
        const double norm2 = std::max(acc / samples, 1e-300);
        const double y = 0.5 * std::log(norm2);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
    }
    const double n = static_cast<double>(t_grid.size());
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double whitened_coupling_discrepancy(const OUModel& m, const GramianSet& g,
                                     const OperatorBundle& b, const Vector& x, double dt,
                                     int steps, std::uint64_t seed) {
    const int d = m.dim;
    Matrix s_dt = transition_matrix(m, dt);
    Matrix q_dt = finite_time_gramian(m, g.q_inf, dt);
    Matrix noise = psd_sqrt(q_dt, 1e-15);

    // The same xi feeds both paths; the whitened path sees the increments
    // through Q^{-1/2}, which is the transformed exact discretization.
    Matrix s_q = b.s_q(dt);
    Matrix noise_w = b.q_inv_sqrt * noise;

    Vector z = x;
    Vector zw = b.q_inv_sqrt * x;
    Vector xi(d);
    double worst = 0.0;
    CounterRng rng(seed, 0);
    for (int k = 0; k < steps; ++k) {
        for (int j = 0; j < d; ++j) xi(j) = rng.normal();
        z = s_dt * z + noise * xi;
        zw = s_q * zw + noise_w * xi;
        worst = std::max(worst, (b.q_inv_sqrt * z - zw).cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace ousem
