#pragma once

#include <functional>

#include "ousem/types.hpp"

namespace ousem {

/// Nodes and weights integrating exactly against the standard normal density
/// (probabilists' Gauss-Hermite): sum w_i f(y_i) = E f(Y), exact for
/// polynomials of degree < 2n.
struct QuadratureRule {
    Vector nodes;
    Vector weights;
};

QuadratureRule gauss_hermite(int n);

/// Tensorized E f(Y), Y ~ N(0, I_dim). Throws QuadratureDimensionExceeded
/// for dim > 4: the node count is explicit, never silently truncated.
double gaussian_expectation(int dim, int nodes_per_axis,
                            const std::function<double(const Vector&)>& f);

struct AdaptiveResult {
    double value = 0.0;
    int nodes_used = 0;
    bool converged = false;
};

struct QuadratureControl {
    double atol = 1e-10;
    double rtol = 1e-8;
    int start_nodes = 10;
    int max_nodes = 640;
};

/// Doubles the per-axis node count until two successive refinements agree.
AdaptiveResult gaussian_expectation_adaptive(int dim,
                                             const std::function<double(const Vector&)>& f,
                                             const QuadratureControl& ctrl = {});

/// Adaptive Simpson on [a, b] with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

/// E f(Y) by nested locally-refining panels against the explicit normal
/// density. Slower than Gauss-Hermite but handles integrands with isolated
/// kinks (|p|^q for odd q, p^2 log|p|). Limited to dim <= 2.
double gaussian_expectation_nested(int dim, const std::function<double(const Vector&)>& f,
                                   double tol);

} // namespace ousem
