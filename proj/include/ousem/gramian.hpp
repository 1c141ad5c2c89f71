#pragma once

#include <map>

#include "ousem/model.hpp"
#include "ousem/types.hpp"

namespace ousem {

/// Stationary covariance plus bookkeeping for the Lyapunov identities.
struct GramianSet {
    Matrix q_inf;
    double lyapunov_residual = 0.0;
    std::map<double, Matrix> q_t; ///< finite-time covariances cached per t
};

/// Transition matrix S(t) = exp(A t).
Matrix transition_matrix(const OUModel& m, double t);

/// Unique solution of A X + X A^T = -Q. Diagonal models use the closed form
/// q_k / (2|alpha_k|); the example2 kind uses its structured factorization
/// (the flat-frame drift is symmetric negative definite); dense models go
/// through the Schur-form recursion.
Matrix solve_lyapunov(const OUModel& m);

/// Q_t through the identity Q_t = Q_inf - S(t) Q_inf S*(t).
Matrix finite_time_gramian(const OUModel& m, const Matrix& q_inf, double t);

/// Q_t by the block-exponential integral of S(s) Q S*(s); works for
/// non-Hurwitz drifts where no stationary covariance exists.
Matrix finite_time_gramian_direct(const OUModel& m, double t);

/// Convenience bundle: solves for Q_inf and records the residual.
GramianSet make_gramians(const OUModel& m);

} // namespace ousem
