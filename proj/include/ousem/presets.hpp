#pragma once

#include "ousem/model.hpp"

namespace ousem {

/// Diagonal model with alpha_k = -1/k and q_k = k^{-3}, k = 1..n. The gap of
/// the conjugated generator is 1/n and vanishes as the truncation grows.
OUModel preset_example1(int n);

/// Finite-difference truncation of the weighted heat equation dZ = (Lap - m)Z dt + J dW
/// on [-halfwidth, halfwidth] with Dirichlet ends, represented in the
/// orthonormal frame of the exp(-kappa|z|)-weighted space: A = D^{1/2} (Lap_h - m) D^{-1/2},
/// Q = D with D = diag of the weight at the n interior nodes.
OUModel preset_example2(double kappa, double m, double halfwidth, int n);

/// Grid restriction of the harmonic direction g(z) = exp(sqrt(m) z), expressed
/// in the same orthonormal frame as the model (coordinates sqrt(rho_i h) g(z_i)).
Vector example2_harmonic_direction(const OUModel& m);

/// |A g_h| / |g_h| for the harmonic direction; order h^2 for m < kappa^2/4
/// once the Dirichlet boundary contribution is below the discretization error.
double example2_harmonic_residual(const OUModel& m);

/// A_Q = Q^{-1/2} A Q^{1/2} computed entrywise from the materialized pair.
/// Exact for the diagonal Q of this kind even when Q is too ill-conditioned
/// for the generic bundle construction (the default halfwidth puts the
/// boundary weight near the double-precision floor).
Matrix example2_conjugated_drift(const OUModel& m);

/// ||S_Q(t)|| = exp(-beta_1 t) from the conjugated drift.
double example2_sq_norm(const OUModel& m, double t);

} // namespace ousem
