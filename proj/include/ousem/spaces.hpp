#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ousem/chaos.hpp"
#include "ousem/mehler.hpp"

namespace ousem {

/// Gauss-Sobolev norms of a polynomial observable under mu.
struct SobolevReport {
    double p = 2.0;
    double lp = 0.0;      ///< ||phi||_p
    double grad_q = 0.0;  ///< L^p norm of |Q^{1/2} D phi|
    double hess_q = 0.0;  ///< L^p norm of ||Q^{1/2} D^2 phi Q^{1/2}||_HS
    double grad_aq = 0.0; ///< L^p norm of |(-AQ)^{1/2} D phi|
    double w1p_q = 0.0;   ///< (lp^p + grad_q^p)^{1/p}
    double w2p_q = 0.0;   ///< (w1p_q^p + hess_q^p)^{1/p}
    double w1p_aq = 0.0;  ///< (lp^p + grad_aq^p)^{1/p}
};

SobolevReport sobolev_norms(const Polynomial& phi, const OUModel& m, const GramianSet& g,
                            const OperatorBundle& b, double p,
                            const QuadratureControl& ctrl = {});

/// D_{A0} phi = sqrt(-A_0) Qinf^{1/2} D phi as a vector of polynomials.
std::vector<Polynomial> gradient_a0(const Polynomial& phi, const OperatorBundle& b);

/// Applies a matrix to a vector of polynomials.
std::vector<Polynomial> apply_matrix(const Matrix& m, const std::vector<Polynomial>& v);

/// Envelope of the Meyer-type ratios over an observable corpus.
struct MeyerReport {
    double p = 2.0;
    double first_min = 0.0;  ///< min of ||sqrt(I-L) phi||_p / (||phi||_p + ||D_A0 phi||_p)
    double first_max = 0.0;
    double second_min = 0.0; ///< same for the second-order bound
    double second_max = 0.0;
    double p2_identity_residual = 0.0; ///< exact identity check, meaningful at p = 2
};

MeyerReport meyer_ratio(const std::vector<Polynomial>& corpus, const OUModel& m,
                        const GramianSet& g, const OperatorBundle& b, double p,
                        const QuadratureControl& ctrl = {});

/// Verdict derived analytically from a defining sequence (diagonal models).
struct SequenceIndicator {
    std::string verdict;          ///< converges / diverges / bounded / grows / ...
    double value = 0.0;           ///< partial sum, sup or final term
    double growth_exponent = 0.0; ///< log-log slope over the tail
};

struct DiagnosticsReport {
    double gap = 0.0;
    double hs_integral = 0.0;     ///< integral of ||S_Q(t)||_HS^2 over [0, inf)
    double trace_half_inv = 0.0;  ///< 1/2 tr(-A_Q^{-1})
    double trace_identity_residual = 0.0; ///< relative gap between the two
    std::optional<SequenceIndicator> mu_hq_mass;    ///< sum 1/(2 beta_k)
    std::optional<SequenceIndicator> strong_feller; ///< sup_k e^{alpha_k t} sqrt(beta_k/q_k) at t = 1
    std::optional<SequenceIndicator> compactness;   ///< beta_k -> infinity?
};

/// Hilbert-Schmidt integral vs the trace identity, plus the analytic sequence
/// predicates for diagonal models. Throws NotSymmetric on a nonsymmetric model.
DiagnosticsReport semigroup_diagnostics(const OUModel& m, const GramianSet& g,
                                        const OperatorBundle& b);

} // namespace ousem
