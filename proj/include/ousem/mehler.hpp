#pragma once

#include <functional>
#include <vector>

#include "ousem/chaos.hpp"
#include "ousem/gramian.hpp"
#include "ousem/quadrature.hpp"

namespace ousem {

/// Gaussian law N(S(t) x, Q_t) of the process at time t: the kernel shared
/// by the quadrature and Monte Carlo realizations of R_t.
struct TransitionKernel {
    double t = 0.0;
    Matrix s_t;      ///< mean map
    Matrix q_t;      ///< covariance
    Matrix q_t_sqrt; ///< symmetric PSD square root of the covariance
};

TransitionKernel make_transition_kernel(const OUModel& m, const GramianSet& g, double t);

/// R_t phi(x) = E phi(S(t) x + Q_t^{1/2} xi) by tensor Gauss-Hermite.
/// The polynomial overload enforces exactness (degree < 2 * nodes), the
/// callable overload integrates at the requested order without a guarantee.
double evaluate_rt_quadrature(const OUModel& m, const GramianSet& g, const Polynomial& phi,
                              const Vector& x, double t, int nodes_per_axis = 40);
double evaluate_rt_quadrature(const OUModel& m, const GramianSet& g,
                              const std::function<double(const Vector&)>& phi, const Vector& x,
                              double t, int nodes_per_axis = 40);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

McEstimate evaluate_rt_monte_carlo(const OUModel& m, const GramianSet& g,
                                   const std::function<double(const Vector&)>& phi,
                                   const Vector& x, double t, long samples,
                                   std::uint64_t seed);

struct GradientBoundPoint {
    double t = 0.0;
    double matrix_norm = 0.0;  ///< ||Q_t^{-1/2} S(t) Q^{1/2}||
    double matrix_bound = 0.0; ///< 1/sqrt(t)
    double sampled_sup = 0.0;  ///< max over the cloud of |Q^{1/2} grad R_t phi|
    double sampled_bound = 0.0;
};

struct GradientBoundReport {
    std::vector<GradientBoundPoint> points;
    bool matrix_ok = true;
    bool sampled_ok = true;
};

struct GradientBoundOptions {
    int nodes_per_axis = 60;
    int cloud_size = 24;
    std::uint64_t seed = 7;
    double slack = 0.05;       ///< tolerated finite-difference overshoot
    double fd_step_rel = 1e-4; ///< step relative to the Qinf length scale
};

/// Checks the smoothing estimate: the matrix bound 1/sqrt(t) and the sampled
/// gradient bound sqrt(2/pi) t^{-1/2} ||phi||_inf for a bounded observable.
GradientBoundReport check_gradient_bound(const OUModel& m, const GramianSet& g,
                                         const OperatorBundle& b,
                                         const std::function<double(const Vector&)>& phi,
                                         double phi_sup_norm, const std::vector<double>& t_grid,
                                         const GradientBoundOptions& opts = {});

struct HypercontractivityReport {
    double p = 0.0;
    double t = 0.0;
    double beta = 0.0;
    double q_critical = 0.0; ///< 1 + (p-1) exp(2 beta t)
    double lhs = 0.0;        ///< ||R_t phi||_q
    double rhs = 0.0;        ///< ||phi||_p
    double margin = 0.0;     ///< rhs - lhs
    double entropy = 0.0;    ///< integral of phi^2 log|phi|
    double dirichlet = 0.0;  ///< <-L phi, phi>
    double lsi_rhs = 0.0;    ///< (2/beta) dirichlet + ||phi||^2 log ||phi||
    double lsi_margin = 0.0; ///< lsi_rhs - entropy
};

/// Verifies hypercontractivity at the critical exponent and the logarithmic
/// Sobolev inequality. Margins are reported, including failures.
HypercontractivityReport check_hypercontractivity_lsi(const OUModel& m, const GramianSet& g,
                                                      const OperatorBundle& b,
                                                      const Polynomial& phi, double p, double t,
                                                      const QuadratureControl& ctrl = {});

struct KolmogorovResult {
    double residual_drift_form = 0.0;    ///< max |du/dt - 1/2 tr(Q D^2 u) - <x, A* D u>|
    double residual_whitened_form = 0.0; ///< max residual of the Q-derivative form
    double form_agreement = 0.0;         ///< max pointwise gap between the two forms
};

/// u(t,.) = R_t phi in closed polynomial form; time derivative spectrally,
/// space derivatives symbolically, residuals evaluated at the given points.
KolmogorovResult kolmogorov_residual(const OUModel& m, const GramianSet& g,
                                     const OperatorBundle& b, const Polynomial& phi, double t,
                                     const std::vector<Vector>& points);

/// E_mu of a callable by adaptive quadrature in the whitened frame.
AdaptiveResult integrate_under_mu(const OperatorBundle& b,
                                  const std::function<double(const Vector&)>& f,
                                  const QuadratureControl& ctrl = {});

/// L^p(mu) norm of a scalar function of x.
double lp_norm_under_mu(const OperatorBundle& b, const std::function<double(const Vector&)>& f,
                        double p, const QuadratureControl& ctrl = {});

} // namespace ousem
