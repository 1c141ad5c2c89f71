#include "ousem/spaces.hpp"

#include <cmath>

#include "ousem/errors.hpp"
#include "ousem/linalg.hpp"

namespace ousem {

std::vector<Polynomial> apply_matrix(const Matrix& m, const std::vector<Polynomial>& v) {
    const int rows = static_cast<int>(m.rows());
    const int dim = v.empty() ? 0 : v[0].dim();
    std::vector<Polynomial> out(rows, Polynomial(dim));
    for (int i = 0; i < rows; ++i) {
        Polynomial acc(dim);
        for (int j = 0; j < m.cols(); ++j) {
            if (m(i, j) == 0.0) continue;
            acc = acc + v[j] * m(i, j);
        }
        out[i] = acc;
    }
    return out;
}

std::vector<Polynomial> gradient_a0(const Polynomial& phi, const OperatorBundle& b) {
    Matrix op = psd_sqrt(-b.a_0) * b.qinf_sqrt;
    return apply_matrix(op, phi.gradient());
}

namespace {

double vector_lp(const OperatorBundle& b, const std::vector<Polynomial>& v, double p,
                 const QuadratureControl& ctrl) {
    return lp_norm_under_mu(
        b,
        [&](const Vector& x) {
            double s = 0.0;
            for (const auto& poly : v) {
                const double t = poly.evaluate(x);
                s += t * t;
            }
            return std::sqrt(s);
        },
        p, ctrl);
}

double matrix_hs_lp(const OperatorBundle& b, const std::vector<Polynomial>& entries, int d,
                    double p, const QuadratureControl& ctrl) {
    return lp_norm_under_mu(
        b,
        [&](const Vector& x) {
            double s = 0.0;
            for (int k = 0; k < d * d; ++k) {
                const double t = entries[k].evaluate(x);
                s += t * t;
            }
            return std::sqrt(s);
        },
        p, ctrl);
}

std::vector<Polynomial> sandwich_hessian(const Polynomial& phi, const Matrix& left,
                                         const Matrix& right) {
    const int d = phi.dim();
    std::vector<Polynomial> hess = phi.hessian();
    std::vector<Polynomial> out(static_cast<size_t>(d) * d, Polynomial(d));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Polynomial acc(d);
            for (int k = 0; k < d; ++k) {
                for (int l = 0; l < d; ++l) {
                    const double w = left(i, k) * right(l, j);
                    if (w == 0.0) continue;
                    acc = acc + hess[static_cast<size_t>(k) * d + l] * w;
                }
            }
            out[static_cast<size_t>(i) * d + j] = acc;
        }
    }
    return out;
}

// Log-log slope of s_k against k over the tail half of the sequence.
double tail_exponent(const Vector& s) {
    const int n = static_cast<int>(s.size());
    const int lo = std::max(1, n / 2);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int cnt = 0;
    for (int k = lo; k < n; ++k) {
        if (s(k) <= 0.0) continue;
        const double x = std::log(static_cast<double>(k + 1));
        const double y = std::log(s(k));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

} // namespace

SobolevReport sobolev_norms(const Polynomial& phi, const OUModel& m, const GramianSet& g,
                            const OperatorBundle& b, double p, const QuadratureControl& ctrl) {
    (void)g;
    if (!(p > 1.0)) throw Error("sobolev_norms needs p in (1, inf)");
    const int d = phi.dim();
    SobolevReport rep;
    rep.p = p;
    rep.lp = lp_norm_under_mu(
        b, [&](const Vector& x) { return phi.evaluate(x); }, p, ctrl);

    std::vector<Polynomial> grad_q = apply_matrix(b.q_sqrt, phi.gradient());
    rep.grad_q = vector_lp(b, grad_q, p, ctrl);

    std::vector<Polynomial> hess_q = sandwich_hessian(phi, b.q_sqrt, b.q_sqrt);
    rep.hess_q = matrix_hs_lp(b, hess_q, d, p, ctrl);

    // -AQ = -QA^T is symmetric nonnegative for a reversible model.
    Matrix minus_aq_sqrt = psd_sqrt(-(m.A * m.Q));
    std::vector<Polynomial> grad_aq = apply_matrix(minus_aq_sqrt, phi.gradient());
    rep.grad_aq = vector_lp(b, grad_aq, p, ctrl);

    rep.w1p_q = std::pow(std::pow(rep.lp, p) + std::pow(rep.grad_q, p), 1.0 / p);
    rep.w2p_q = std::pow(std::pow(rep.w1p_q, p) + std::pow(rep.hess_q, p), 1.0 / p);
    rep.w1p_aq = std::pow(std::pow(rep.lp, p) + std::pow(rep.grad_aq, p), 1.0 / p);
    return rep;
}

MeyerReport meyer_ratio(const std::vector<Polynomial>& corpus, const OUModel& m,
                        const GramianSet& g, const OperatorBundle& b, double p,
                        const QuadratureControl& ctrl) {
    (void)m;
    (void)g;
    if (corpus.empty()) throw Error("meyer_ratio needs a nonempty corpus");
    MeyerReport rep;
    rep.p = p;
    rep.first_min = rep.second_min = std::numeric_limits<double>::infinity();
    rep.first_max = rep.second_max = 0.0;

    Matrix sqrt_minus_a0 = psd_sqrt(-b.a_0);
    Matrix sqrt_shift_a0 = psd_sqrt(Matrix::Identity(b.a_0.rows(), b.a_0.cols()) - b.a_0);

    for (const Polynomial& phi : corpus) {
        ChaosCoefficients c = expand(phi, b);

        const double phi_p = lp_norm_under_mu(
            b, [&](const Vector& x) { return phi.evaluate(x); }, p, ctrl);

        Polynomial sqrt_phi = chaos_to_polynomial(apply_sqrt_shifted_generator(c, b), b);
        const double sqrt_p = lp_norm_under_mu(
            b, [&](const Vector& x) { return sqrt_phi.evaluate(x); }, p, ctrl);

        std::vector<Polynomial> da0 = gradient_a0(phi, b);
        const double da0_p = vector_lp(b, da0, p, ctrl);

        const double first = sqrt_p / (phi_p + da0_p);
        rep.first_min = std::min(rep.first_min, first);
        rep.first_max = std::max(rep.first_max, first);

        // Second order: ||(I - L) phi||_p against
        // ||phi||_p + ||sqrt(I - A_0) D_A0 phi||_p + ||D^2_A0 phi||_p.
        ChaosCoefficients lc = apply_generator_spectral(c, b);
        ChaosCoefficients shifted = c;
        for (auto& [n, v] : shifted.coeffs) {
            auto it = lc.coeffs.find(n);
            if (it != lc.coeffs.end()) v -= it->second;
        }
        Polynomial il_phi = chaos_to_polynomial(shifted, b);
        const double il_p = lp_norm_under_mu(
            b, [&](const Vector& x) { return il_phi.evaluate(x); }, p, ctrl);

        std::vector<Polynomial> mixed = apply_matrix(sqrt_shift_a0, da0);
        const double mixed_p = vector_lp(b, mixed, p, ctrl);

        Matrix half = sqrt_minus_a0 * b.qinf_sqrt;
        std::vector<Polynomial> da0_2 = sandwich_hessian(phi, half, half.transpose());
        const double da0_2_p = matrix_hs_lp(b, da0_2, phi.dim(), p, ctrl);

        const double second = il_p / (phi_p + mixed_p + da0_2_p);
        rep.second_min = std::min(rep.second_min, second);
        rep.second_max = std::max(rep.second_max, second);

        // ||sqrt(I - L) phi||_2^2 = ||phi||_2^2 + ||D_A0 phi||_2^2: exact by
        // the Dirichlet-form Parseval; recorded for every p, asserted at 2.
        ChaosCoefficients sq = apply_sqrt_shifted_generator(c, b);
        const double lhs2 = sq.l2_norm_sq();
        const double da0_2norm = vector_lp(b, da0, 2.0, ctrl);
        const double rhs2 = c.l2_norm_sq() + da0_2norm * da0_2norm;
        rep.p2_identity_residual = std::max(
            rep.p2_identity_residual, std::abs(lhs2 - rhs2) / std::max(1.0, std::abs(rhs2)));
    }
    return rep;
}

DiagnosticsReport semigroup_diagnostics(const OUModel& m, const GramianSet& g,
                                        const OperatorBundle& b) {
    (void)g;
    DiagnosticsReport rep;
    rep.gap = spectral_gap(b);

    // 1/2 tr(-A_Q^{-1}) from a direct solve.
    Matrix inv = (-b.a_q).ldlt().solve(Matrix::Identity(m.dim, m.dim));
    rep.trace_half_inv = 0.5 * inv.trace();

    // The integral of ||S_Q(t)||_HS^2: adaptive quadrature on the matrix
    // realization for desk sizes, eigenvalue sum beyond that.
    const double beta1 = b.beta(0);
    const double horizon = 12.0 / beta1;
    std::function<double(double)> hs2;
    if (m.dim <= 64) {
        hs2 = [&](double t) {
            Matrix sq = b.q_inv_sqrt * transition_matrix(m, t) * b.q_sqrt;
            return sq.squaredNorm();
        };
    } else {
        hs2 = [&](double t) { return (-2.0 * t * b.beta.array()).exp().sum(); };
    }
    rep.hs_integral = adaptive_simpson(hs2, 0.0, horizon, 1e-9 * rep.trace_half_inv);
    rep.trace_identity_residual =
        std::abs(rep.hs_integral - rep.trace_half_inv) / std::abs(rep.trace_half_inv);

    if (m.kind == ModelKind::Diagonal) {
        const Vector& alpha = *m.alpha;
        const Vector& q = *m.qdiag;
        const int n = m.dim;
        Vector beta_seq = -alpha; // A_Q = A for a diagonal model

        SequenceIndicator mass;
        Vector mass_terms(n);
        double psum = 0.0;
        for (int k = 0; k < n; ++k) {
            mass_terms(k) = 0.5 / beta_seq(k);
            psum += mass_terms(k);
        }
        mass.value = psum;
        mass.growth_exponent = tail_exponent(mass_terms);
        mass.verdict = mass.growth_exponent < -1.05 ? "converges" : "diverges";
        rep.mu_hq_mass = mass;

        SequenceIndicator feller;
        const double t_ref = 1.0;
        Vector ratios(n);
        for (int k = 0; k < n; ++k)
            ratios(k) = std::exp(alpha(k) * t_ref) * std::sqrt(beta_seq(k) / q(k));
        feller.value = ratios.maxCoeff();
        feller.growth_exponent = tail_exponent(ratios);
        double sup_head = 0.0;
        for (int k = 0; k < std::max(1, n / 2); ++k) sup_head = std::max(sup_head, ratios(k));
        feller.verdict = feller.value > sup_head * (1.0 + 1e-9) ? "grows with truncation"
                                                                : "bounded";
        rep.strong_feller = feller;

        SequenceIndicator comp;
        comp.value = beta_seq(n - 1);
        comp.growth_exponent = tail_exponent(beta_seq);
        comp.verdict = comp.growth_exponent > 0.05 ? "tends to infinity" : "stays bounded";
        rep.compactness = comp;
    }
    return rep;
}

} // namespace ousem
