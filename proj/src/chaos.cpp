#include "ousem/chaos.hpp"

#include <cmath>
#include <functional>

#include "ousem/errors.hpp"

namespace ousem {

namespace {

// he_table[k][j]: coefficient of He_j in the monomial y^k. Built from
// y He_j = He_{j+1} + j He_{j-1}.
std::vector<std::vector<double>> monomial_to_hermite_table(int max_deg) {
    std::vector<std::vector<double>> t(max_deg + 1);
    t[0] = {1.0};
    for (int k = 0; k < max_deg; ++k) {
        t[k + 1].assign(k + 2, 0.0);
        for (int j = 0; j <= k; ++j) {
            const double c = t[k][j];
            if (c == 0.0) continue;
            t[k + 1][j + 1] += c;
            if (j > 0) t[k + 1][j - 1] += c * j;
        }
    }
    return t;
}

// mono_table[j][k]: coefficient of y^k in He_j, from He_{j+1} = y He_j - j He_{j-1}.
std::vector<std::vector<double>> hermite_to_monomial_table(int max_deg) {
    std::vector<std::vector<double>> t(max_deg + 1);
    t[0] = {1.0};
    if (max_deg >= 1) t[1] = {0.0, 1.0};
    for (int j = 1; j < max_deg; ++j) {
        t[j + 1].assign(j + 2, 0.0);
        for (int k = 0; k <= j; ++k) {
            t[j + 1][k + 1] += t[j][k];
        }
        for (int k = 0; k <= j - 1; ++k) {
            t[j + 1][k] -= j * t[j - 1][k];
        }
    }
    return t;
}

double sqrt_factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return std::sqrt(f);
}

} // namespace

double ChaosCoefficients::l2_norm_sq() const {
    double s = 0.0;
    for (const auto& [n, c] : coeffs) s += c * c;
    return s;
}

ChaosCoefficients expand(const Polynomial& phi, const OperatorBundle& b, int degree_cap) {
    const int d = phi.dim();
    if (phi.degree() > degree_cap)
        throw DegreeOverflow("observable degree " + std::to_string(phi.degree()) +
                             " exceeds the chaos cap " + std::to_string(degree_cap));

    // x = Qinf^{1/2} G y with y standard normal under mu.
    Matrix to_y = b.qinf_sqrt * b.frame_0;
    Polynomial in_y = phi.substitute_linear(to_y);

    const int deg = std::max(in_y.degree(), 0);
    auto table = monomial_to_hermite_table(deg);
    std::vector<double> norm(deg + 1);
    for (int j = 0; j <= deg; ++j) norm[j] = sqrt_factorial(j);

    ChaosCoefficients out;
    out.dim = d;
    out.degree = degree_cap;

    // Tensor conversion: each monomial splits axis by axis.
    for (const auto& [mono, coeff] : in_y.terms()) {
        std::vector<MultiIndex> frontier{MultiIndex(d, 0)};
        std::vector<double> weights{coeff};
        for (int axis = 0; axis < d; ++axis) {
            const int k = mono[axis];
            std::vector<MultiIndex> next_frontier;
            std::vector<double> next_weights;
            for (size_t s = 0; s < frontier.size(); ++s) {
                for (int j = 0; j <= k; ++j) {
                    const double t = table[k][j];
                    if (t == 0.0) continue;
                    MultiIndex n = frontier[s];
                    n[axis] = j;
                    next_frontier.push_back(std::move(n));
                    next_weights.push_back(weights[s] * t * norm[j]);
                }
            }
            frontier = std::move(next_frontier);
            weights = std::move(next_weights);
        }
        for (size_t s = 0; s < frontier.size(); ++s) {
            double& slot = out.coeffs[frontier[s]];
            slot += weights[s];
            if (slot == 0.0) out.coeffs.erase(frontier[s]);
        }
    }
    return out;
}

Polynomial chaos_to_polynomial(const ChaosCoefficients& c, const OperatorBundle& b) {
    const int d = c.dim;
    int deg = 0;
    for (const auto& [n, v] : c.coeffs) deg = std::max(deg, order_of(n));
    auto table = hermite_to_monomial_table(deg);

    Polynomial in_y(d);
    for (const auto& [n, v] : c.coeffs) {
        double scale = v;
        for (int i = 0; i < d; ++i) scale /= sqrt_factorial(n[i]);
        // Product over axes of He_{n_i}(y_i): expand into monomials.
        std::vector<MultiIndex> frontier{MultiIndex(d, 0)};
        std::vector<double> weights{scale};
        for (int axis = 0; axis < d; ++axis) {
            const int j = n[axis];
            std::vector<MultiIndex> nf;
            std::vector<double> nw;
            for (size_t s = 0; s < frontier.size(); ++s) {
                for (int k = 0; k <= j; ++k) {
                    const double t = table[j][k];
                    if (t == 0.0) continue;
                    MultiIndex m = frontier[s];
                    m[axis] = k;
                    nf.push_back(std::move(m));
                    nw.push_back(weights[s] * t);
                }
            }
            frontier = std::move(nf);
            weights = std::move(nw);
        }
        for (size_t s = 0; s < frontier.size(); ++s) in_y.add_term(frontier[s], weights[s]);
    }

    // y = G^T Qinf^{-1/2} x.
    Matrix to_x = b.frame_0.transpose() * b.qinf_inv_sqrt;
    return in_y.substitute_linear(to_x);
}

double chaos_evaluate(const ChaosCoefficients& c, const OperatorBundle& b, const Vector& x) {
    const int d = c.dim;
    Vector y = b.frame_0.transpose() * (b.qinf_inv_sqrt * x);
    int deg = 0;
    for (const auto& [n, v] : c.coeffs) deg = std::max(deg, order_of(n));

    // h[i][k] = He_k(y_i) / sqrt(k!)
    std::vector<std::vector<double>> h(d, std::vector<double>(deg + 1, 1.0));
    for (int i = 0; i < d; ++i) {
        double prev = 1.0, cur = y(i);
        if (deg >= 1) h[i][1] = cur;
        for (int k = 1; k < deg; ++k) {
            const double next = y(i) * cur - k * prev;
            prev = cur;
            cur = next;
            h[i][k + 1] = next;
        }
        for (int k = 0; k <= deg; ++k) h[i][k] /= sqrt_factorial(k);
    }

    double acc = 0.0;
    for (const auto& [n, v] : c.coeffs) {
        double t = v;
        for (int i = 0; i < d; ++i) t *= h[i][n[i]];
        acc += t;
    }
    return acc;
}

namespace {

ChaosCoefficients map_coeffs(const ChaosCoefficients& c, const OperatorBundle& b,
                             const std::function<double(double)>& factor_of_energy) {
    ChaosCoefficients out;
    out.dim = c.dim;
    out.degree = c.degree;
    for (const auto& [n, v] : c.coeffs) {
        double energy = 0.0;
        for (int i = 0; i < c.dim; ++i) energy += n[i] * b.beta_0(i);
        out.coeffs[n] = v * factor_of_energy(energy);
    }
    return out;
}

} // namespace

ChaosCoefficients apply_rt_spectral(const ChaosCoefficients& c, const OperatorBundle& b,
                                    double t) {
    if (t < 0.0) throw Error("apply_rt_spectral: t must be nonnegative");
    return map_coeffs(c, b, [t](double e) { return std::exp(-t * e); });
}

ChaosCoefficients apply_generator_spectral(const ChaosCoefficients& c, const OperatorBundle& b) {
    return map_coeffs(c, b, [](double e) { return -e; });
}

ChaosCoefficients apply_sqrt_shifted_generator(const ChaosCoefficients& c,
                                               const OperatorBundle& b) {
    return map_coeffs(c, b, [](double e) { return std::sqrt(1.0 + e); });
}

double spectral_gap(const OperatorBundle& b) {
    return b.beta(0);
}

ChaosCoefficients remove_mean(const ChaosCoefficients& c) {
    ChaosCoefficients out = c;
    out.coeffs.erase(MultiIndex(c.dim, 0));
    return out;
}

} // namespace ousem
