#include "ousem/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ousem/errors.hpp"

namespace ousem {

QuadratureRule gauss_hermite(int n) {
    if (n < 1) throw Error("gauss_hermite: need at least one node");
    // Golub-Welsch on the Jacobi matrix of the probabilists' recurrence
    // He_{k+1} = y He_k - k He_{k-1}: zero diagonal, off-diagonal sqrt(k).
    Matrix jacobi = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
        jacobi(k - 1, k) = jacobi(k, k - 1);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(jacobi);
    QuadratureRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double first = es.eigenvectors()(0, i);
        rule.weights(i) = first * first;
    }
    return rule;
}

double gaussian_expectation(int dim, int nodes_per_axis,
                            const std::function<double(const Vector&)>& f) {
    if (dim > 4)
        throw QuadratureDimensionExceeded(
            "tensor quadrature limited to dim <= 4; use the Monte Carlo path");
    QuadratureRule rule = gauss_hermite(nodes_per_axis);
    std::vector<int> idx(dim, 0);
    Vector y(dim);
    double acc = 0.0;
    while (true) {
        double w = 1.0;
        for (int i = 0; i < dim; ++i) {
            y(i) = rule.nodes(idx[i]);
            w *= rule.weights(idx[i]);
        }
        acc += w * f(y);
        int axis = 0;
        while (axis < dim && ++idx[axis] == nodes_per_axis) {
            idx[axis] = 0;
            ++axis;
        }
        if (axis == dim) break;
    }
    return acc;
}

AdaptiveResult gaussian_expectation_adaptive(int dim,
                                             const std::function<double(const Vector&)>& f,
                                             const QuadratureControl& ctrl) {
    AdaptiveResult res;
    int n = ctrl.start_nodes;
    double prev = gaussian_expectation(dim, n, f);
    while (2 * n <= ctrl.max_nodes) {
        n *= 2;
        const double cur = gaussian_expectation(dim, n, f);
        if (std::abs(cur - prev) <= ctrl.atol + ctrl.rtol * std::abs(cur)) {
            res.value = cur;
            res.nodes_used = n;
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    res.value = prev;
    res.nodes_used = n;
    res.converged = false;
    return res;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double gaussian_expectation_nested(int dim, const std::function<double(const Vector&)>& f,
                                   double tol) {
    if (dim < 1 || dim > 2)
        throw QuadratureDimensionExceeded("nested quadrature supports dim 1 and 2 only");
    constexpr double kRadius = 14.0; // normal mass beyond is ~1e-44
    const double norm_const = 1.0 / std::sqrt(2.0 * M_PI);
    if (dim == 1) {
        Vector y(1);
        return adaptive_simpson(
            [&](double t) {
                y(0) = t;
                return f(y) * norm_const * std::exp(-0.5 * t * t);
            },
            -kRadius, kRadius, tol);
    }
    // Outer variable integrated adaptively; each evaluation resolves the
    // inner integral to a finer budget.
    return adaptive_simpson(
        [&](double t) {
            Vector y(2);
            y(1) = t;
            const double w = norm_const * std::exp(-0.5 * t * t);
            const double inner = adaptive_simpson(
                [&](double s) {
                    y(0) = s;
                    return f(y) * norm_const * std::exp(-0.5 * s * s);
                },
                -kRadius, kRadius, tol / (8.0 * kRadius));
            return w * inner;
        },
        -kRadius, kRadius, tol);
}

} // namespace ousem
