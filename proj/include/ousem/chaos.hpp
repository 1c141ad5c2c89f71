#pragma once

#include <map>

#include "ousem/polynomial.hpp"
#include "ousem/symmetry.hpp"

namespace ousem {

/// Expansion of a polynomial observable over products of unit-normalized
/// probabilists' Hermite polynomials in the whitened coordinates
/// y_i = <Qinf^{-1/2} x, g_i>, where g_i are the eigenvectors of A_0.
/// In this frame the transition semigroup acts diagonally across chaos
/// grades, so applying R_t, L or sqrt(I - L) is a coefficient multiply.
struct ChaosCoefficients {
    int dim = 0;
    int degree = 0;
    std::map<MultiIndex, double> coeffs;

    /// Parseval: squared L^2(mu) norm equals the coefficient sum of squares.
    double l2_norm_sq() const;
};

/// Default cap on the chaos order; (cap + d choose d) coefficients.
constexpr int kDefaultDegreeCap = 6;

/// Exact change of basis to the Hermite frame. Throws DegreeOverflow when
/// deg(phi) exceeds the cap.
ChaosCoefficients expand(const Polynomial& phi, const OperatorBundle& b,
                         int degree_cap = kDefaultDegreeCap);

/// Inverse change of basis: the expansion as a polynomial in the original
/// x coordinates.
Polynomial chaos_to_polynomial(const ChaosCoefficients& c, const OperatorBundle& b);

/// Pointwise evaluation without materializing the polynomial.
double chaos_evaluate(const ChaosCoefficients& c, const OperatorBundle& b, const Vector& x);

/// coeff[n] *= exp(-t sum_i n_i beta_i): the second-quantization action of
/// the transition operator.
ChaosCoefficients apply_rt_spectral(const ChaosCoefficients& c, const OperatorBundle& b,
                                    double t);

/// coeff[n] *= -(sum_i n_i beta_i): the generator.
ChaosCoefficients apply_generator_spectral(const ChaosCoefficients& c, const OperatorBundle& b);

/// coeff[n] *= sqrt(1 + sum_i n_i beta_i).
ChaosCoefficients apply_sqrt_shifted_generator(const ChaosCoefficients& c,
                                               const OperatorBundle& b);

/// Smallest eigenvalue of -A_Q; the L^2(mu) decay rate of R_t - Pi_0.
double spectral_gap(const OperatorBundle& b);

/// Drops the order-0 coefficient (projection onto mean-zero observables).
ChaosCoefficients remove_mean(const ChaosCoefficients& c);

} // namespace ousem
