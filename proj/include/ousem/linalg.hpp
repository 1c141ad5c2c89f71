#pragma once

#include "ousem/types.hpp"

namespace ousem {

/// Matrix exponential exp(A) (Pade scaling-and-squaring).
Matrix expm(const Matrix& a);

/// Operator 2-norm via SVD.
double spectral_norm(const Matrix& a);

/// Symmetric PSD square root. Eigenvalues below floor_rel * max(eig, 0)
/// are clamped to zero. Input is symmetrized first.
Matrix psd_sqrt(const Matrix& a, double floor_rel = 0.0);

/// Inverse square root of an SPD matrix. Throws SingularQ when an
/// eigenvalue falls below floor_rel * lambda_max.
Matrix spd_inv_sqrt(const Matrix& a, double floor_rel = 1e-13);

/// Solves A X + X A^T + C = 0 (Bartels-Stewart on the complex Schur form).
/// Throws NoUniqueSolution when A and -A^T share an eigenvalue.
Matrix solve_lyapunov_bartels_stewart(const Matrix& a, const Matrix& c);

/// Residual ||A X + X A^T + C||_F.
double lyapunov_residual(const Matrix& a, const Matrix& x, const Matrix& c);

/// True when every eigenvalue of A has negative real part (margin relative
/// to ||A||).
bool is_hurwitz(const Matrix& a, double margin_rel = 1e-12);

} // namespace ousem
