#pragma once

#include <map>

#include "ousem/gramian.hpp"
#include "ousem/model.hpp"

namespace ousem {

/// Verdict of the reversibility test with the residuals that produced it.
struct SymmetryReport {
    bool is_symmetric = false;
    double commutator_residual = 0.0;            ///< ||A Q - Q A^T||_F
    std::map<double, double> semigroup_residuals; ///< t -> ||S(t) Q - Q S^T(t)||_F
    double contraction_margin = 0.0;              ///< min over grid of 1 - ||S_Q(t)||
    double scale = 0.0;                           ///< residual scale ||A|| ||Q||
    double tol = 0.0;                             ///< absolute threshold used
};

/// Decides reversibility: the matrix criterion A Q = Q A^T plus the semigroup
/// criterion S(t) Q = Q S^T(t) on a geometric t-grid.
SymmetryReport check_reversibility(const OUModel& m, double tol_factor = 1e-10);

/// Closed-form classifier for A = [[a, c], [d, b]], Q = diag(1, q), q > 0,
/// q != 1: symmetric + hypothesis iff a < 0, det A > 0, d = c q and
/// (a-b)^2 + 4 c^2 q > 0.
bool classify_2x2(double a, double b, double c, double d, double q);

/// Derived operators of a symmetric model. All eigen-frames carry a
/// deterministic sign convention (first nonzero component positive).
struct OperatorBundle {
    Matrix a_q; ///< Q^{-1/2} A Q^{1/2}, symmetric negative definite
    Matrix a_0; ///< Qinf^{-1/2} A Qinf^{1/2}, symmetric negative definite
    Matrix v;   ///< Q^{1/2} Qinf^{-1/2}
    Matrix u;   ///< orthogonal factor of the polar decomposition V = U sqrt(-2 A_0)

    Vector beta;    ///< ascending eigenvalues of -A_Q (== -A_0 up to roundoff)
    Matrix frame_q; ///< eigenvectors f_i of A_Q, columns matching beta
    Vector beta_0;  ///< ascending eigenvalues of -A_0
    Matrix frame_0; ///< eigenvectors g_i of A_0 (the chaos frame)

    Matrix q_sqrt, q_inv_sqrt;
    Matrix qinf_sqrt, qinf_inv_sqrt;

    Matrix s_q(double t) const; ///< exp(A_Q t) through the eigen-frame
    Matrix s_0(double t) const;
};

/// Builds the bundle. Throws NotSymmetric when the reversibility check fails
/// and SingularQ when Q (or Q_inf) is numerically singular.
OperatorBundle build_operator_bundle(const OUModel& m, const GramianSet& g);

} // namespace ousem
