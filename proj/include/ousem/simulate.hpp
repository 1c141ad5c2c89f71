#pragma once

#include <cstdint>
#include <vector>

#include "ousem/chaos.hpp"
#include "ousem/mehler.hpp"

namespace ousem {

enum class StartLaw { Point, Stationary };

/// Exact-in-law path sample: states[k] holds the ensemble at time k * dt as
/// a samples x dim matrix. One step is Z_{k+1} = S(dt) Z_k + xi_k with
/// xi_k ~ N(0, Q_dt); bit-for-bit reproducible from (seed, model, grid).
struct PathEnsemble {
    double dt = 0.0;
    int steps = 0;
    int samples = 0;
    StartLaw start = StartLaw::Point;
    std::uint64_t seed = 0;
    std::uint64_t model_hash = 0;
    std::vector<Matrix> states;
};

/// n draws from N(S(t) x, Q_t); rows are samples.
Matrix sample_transition(const TransitionKernel& k, const Vector& x, int n, std::uint64_t seed);

PathEnsemble simulate_paths(const OUModel& m, const GramianSet& g, StartLaw start,
                            const Vector& x0, double dt, int steps, int samples,
                            std::uint64_t seed);

struct DetailedBalanceResult {
    double z = 0.0;          ///< studentized cross-moment difference
    double difference = 0.0; ///< mean of psi(Z_0) phi(Z_dt) - phi(Z_0) psi(Z_dt)
    double std_error = 0.0;
    long samples = 0;
};

/// Empirical detailed balance from a stationary one-step ensemble. Throws
/// NotStationaryStart unless the ensemble was started from the invariant law.
DetailedBalanceResult test_detailed_balance(const PathEnsemble& e,
                                            const std::function<double(const Vector&)>& phi,
                                            const std::function<double(const Vector&)>& psi);

/// -slope of log ||R_t phi - Pi_0 phi||_2 against t, norms via the spectral
/// path. Equals the gap exactly when phi loads the bottom eigenfunction.
double estimate_decay_rate(const OperatorBundle& b, const Polynomial& phi,
                           const std::vector<double>& t_grid);

/// Monte Carlo variant: ||R_t phi||_2^2 estimated by averaging the product of
/// two conditionally independent copies over a stationary start.
double estimate_decay_rate_mc(const OUModel& m, const GramianSet& g, const Polynomial& phi,
                              const std::vector<double>& t_grid, int samples,
                              std::uint64_t seed);

/// Coupling check of the whitening identity: paths of the original model and
/// the unit-noise model with drift A_Q driven by the same Gaussian increments
/// satisfy Q^{-1/2} Z(t, x) = Z~(t, Q^{-1/2} x) exactly. Returns the maximum
/// coordinate discrepancy across steps.
double whitened_coupling_discrepancy(const OUModel& m, const GramianSet& g,
                                     const OperatorBundle& b, const Vector& x, double dt,
                                     int steps, std::uint64_t seed);

} // namespace ousem
