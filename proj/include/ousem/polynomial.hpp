#pragma once

#include <map>
#include <vector>

#include "ousem/types.hpp"

namespace ousem {

/// Exponent vector of a monomial; index i holds the power of x_i.
using MultiIndex = std::vector<int>;

/// Total degree |n| = sum of entries.
int order_of(const MultiIndex& n);

/// Sparse real polynomial on R^d stored as monomial -> coefficient.
///
/// This is the observable class: every spectral, quadrature and symbolic
/// path in the library manipulates these. Coefficients smaller than 1e-300
/// in magnitude are dropped on normalization.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(int dim) : dim_(dim) {}

    static Polynomial constant(int dim, double c);
    static Polynomial coordinate(int dim, int i);

    int dim() const { return dim_; }
    int degree() const;
    bool empty() const { return terms_.empty(); }
    const std::map<MultiIndex, double>& terms() const { return terms_; }

    /// Adds c * x^n to the polynomial.
    void add_term(const MultiIndex& n, double c);

    double evaluate(const Vector& x) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(double s) const;

    /// Partial derivative with respect to x_i.
    Polynomial derivative(int i) const;

    /// Gradient as a vector of polynomials.
    std::vector<Polynomial> gradient() const;

    /// Hessian as a dense dim x dim array of polynomials (row-major).
    std::vector<Polynomial> hessian() const;

    /// Composition with a linear map: returns q(y) = p(M y).
    /// M has rows indexed by the old variables, columns by the new ones.
    Polynomial substitute_linear(const Matrix& m) const;

private:
    int dim_ = 0;
    std::map<MultiIndex, double> terms_;
};

/// L phi = 1/2 tr(Q D^2 phi) + <x, A^T D phi>, evaluated symbolically.
Polynomial generator_apply_symbolic(const Polynomial& phi, const Matrix& a, const Matrix& q);

} // namespace ousem
