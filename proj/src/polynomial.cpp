#include "ousem/polynomial.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ousem {

namespace {
constexpr double kDropTol = 1e-300;
}

int order_of(const MultiIndex& n) {
    int s = 0;
    for (int k : n) s += k;
    return s;
}

Polynomial Polynomial::constant(int dim, double c) {
    Polynomial p(dim);
    p.add_term(MultiIndex(dim, 0), c);
    return p;
}

Polynomial Polynomial::coordinate(int dim, int i) {
    Polynomial p(dim);
    MultiIndex n(dim, 0);
    n[i] = 1;
    p.add_term(n, 1.0);
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [n, c] : terms_) d = std::max(d, order_of(n));
    return d;
}

void Polynomial::add_term(const MultiIndex& n, double c) {
    if (static_cast<int>(n.size()) != dim_)
        throw std::invalid_argument("Polynomial::add_term: index size mismatch");
    double& slot = terms_[n];
    slot += c;
    if (std::abs(slot) < kDropTol) terms_.erase(n);
}

double Polynomial::evaluate(const Vector& x) const {
    double acc = 0.0;
    for (const auto& [n, c] : terms_) {
        double t = c;
        for (int i = 0; i < dim_; ++i) {
            for (int k = 0; k < n[i]; ++k) t *= x[i];
        }
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    Polynomial out = *this;
    for (const auto& [n, c] : other.terms_) out.add_term(n, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    Polynomial out = *this;
    for (const auto& [n, c] : other.terms_) out.add_term(n, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    Polynomial out(dim_);
    for (const auto& [n1, c1] : terms_) {
        for (const auto& [n2, c2] : other.terms_) {
            MultiIndex n(dim_);
            for (int i = 0; i < dim_; ++i) n[i] = n1[i] + n2[i];
            out.add_term(n, c1 * c2);
        }
    }
    return out;
}

Polynomial Polynomial::operator*(double s) const {
    Polynomial out(dim_);
    for (const auto& [n, c] : terms_) out.add_term(n, c * s);
    return out;
}

Polynomial Polynomial::derivative(int i) const {
    Polynomial out(dim_);
    for (const auto& [n, c] : terms_) {
        if (n[i] == 0) continue;
        MultiIndex m = n;
        m[i] -= 1;
        out.add_term(m, c * n[i]);
    }
    return out;
}

std::vector<Polynomial> Polynomial::gradient() const {
    std::vector<Polynomial> g;
    g.reserve(dim_);
    for (int i = 0; i < dim_; ++i) g.push_back(derivative(i));
    return g;
}

std::vector<Polynomial> Polynomial::hessian() const {
    std::vector<Polynomial> h;
    h.reserve(static_cast<size_t>(dim_) * dim_);
    for (int i = 0; i < dim_; ++i) {
        Polynomial di = derivative(i);
        for (int j = 0; j < dim_; ++j) h.push_back(di.derivative(j));
    }
    return h;
}

Polynomial Polynomial::substitute_linear(const Matrix& m) const {
    const int new_dim = static_cast<int>(m.cols());
    if (m.rows() != dim_)
        throw std::invalid_argument("substitute_linear: row count must match polynomial dimension");

    // Images of the old coordinates as degree-1 polynomials in y.
    std::vector<Polynomial> images;
    images.reserve(dim_);
    for (int i = 0; i < dim_; ++i) {
        Polynomial li(new_dim);
        for (int j = 0; j < new_dim; ++j) {
            if (m(i, j) != 0.0) {
                MultiIndex n(new_dim, 0);
                n[j] = 1;
                li.add_term(n, m(i, j));
            }
        }
        images.push_back(li);
    }

    Polynomial out(new_dim);
    for (const auto& [n, c] : terms_) {
        Polynomial t = Polynomial::constant(new_dim, c);
        for (int i = 0; i < dim_; ++i) {
            for (int k = 0; k < n[i]; ++k) t = t * images[i];
        }
        out = out + t;
    }
    return out;
}

Polynomial generator_apply_symbolic(const Polynomial& phi, const Matrix& a, const Matrix& q) {
    const int d = phi.dim();
    Polynomial out(d);

    // 1/2 tr(Q D^2 phi) = 1/2 sum_{ij} Q_ij d2phi/dx_i dx_j
    for (int i = 0; i < d; ++i) {
        Polynomial di = phi.derivative(i);
        for (int j = 0; j < d; ++j) {
            if (q(i, j) == 0.0) continue;
            out = out + di.derivative(j) * (0.5 * q(i, j));
        }
    }
    // <x, A^T D phi> = sum_{ij} x_i A_ji dphi/dx_j
    for (int j = 0; j < d; ++j) {
        Polynomial dj = phi.derivative(j);
        for (int i = 0; i < d; ++i) {
            if (a(j, i) == 0.0) continue;
            out = out + Polynomial::coordinate(d, i) * dj * a(j, i);
        }
    }
    return out;
}

} // namespace ousem
