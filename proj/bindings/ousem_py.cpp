// Python bindings for the core operations: model loading, Gramians,
// reversibility, the chaos calculus, quadrature/Monte-Carlo transition
// averages, Sobolev diagnostics and exact sampling.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "ousem/ousem.hpp"

namespace py = pybind11;
using namespace ousem;

namespace {

OUModel dense_model(const Matrix& a, const Matrix& q) {
    nlohmann::json doc;
    doc["kind"] = "dense";
    std::vector<std::vector<double>> aj(a.rows()), qj(q.rows());
    for (int i = 0; i < a.rows(); ++i) {
        aj[i].assign(a.row(i).begin(), a.row(i).end());
        qj[i].assign(q.row(i).begin(), q.row(i).end());
    }
    doc["A"] = aj;
    doc["Q"] = qj;
    return load_model(doc);
}

OUModel diagonal_model(const Vector& alpha, const Vector& q) {
    nlohmann::json doc;
    doc["kind"] = "diagonal";
    doc["alpha"] = std::vector<double>(alpha.data(), alpha.data() + alpha.size());
    doc["q"] = std::vector<double>(q.data(), q.data() + q.size());
    return load_model(doc);
}

Polynomial make_polynomial(int dim, const std::vector<std::pair<double, std::vector<int>>>& terms) {
    Polynomial p(dim);
    for (const auto& [c, n] : terms) p.add_term(n, c);
    return p;
}

} // namespace

PYBIND11_MODULE(_ousem, mod) {
    mod.doc() = "Symmetric Ornstein-Uhlenbeck semigroups: reversibility, "
                "second quantization, Gauss-Sobolev diagnostics.";

    py::register_exception<SchemaViolation>(mod, "SchemaViolation");
    py::register_exception<NotPSD>(mod, "NotPSD");
    py::register_exception<NoUniqueSolution>(mod, "NoUniqueSolution");
    py::register_exception<NotSymmetric>(mod, "NotSymmetricError");
    py::register_exception<SingularQ>(mod, "SingularQError");
    py::register_exception<DegreeOverflow>(mod, "DegreeOverflow");
    py::register_exception<QuadratureOrderTooLow>(mod, "QuadratureOrderTooLow");

    py::class_<OUModel>(mod, "OUModel")
        .def_readonly("dim", &OUModel::dim)
        .def_readonly("A", &OUModel::A)
        .def_readonly("Q", &OUModel::Q)
        .def_property_readonly("kind", [](const OUModel& m) { return to_string(m.kind); })
        .def("hash", &OUModel::hash)
        .def("__repr__", [](const OUModel& m) {
            return "<OUModel kind=" + to_string(m.kind) + " dim=" + std::to_string(m.dim) + ">";
        });

    mod.def("dense_model", &dense_model, py::arg("A"), py::arg("Q"));
    mod.def("diagonal_model", &diagonal_model, py::arg("alpha"), py::arg("q"));
    mod.def("load_model", [](const std::string& text) { return load_model(nlohmann::json::parse(text)); },
            py::arg("json_text"));
    mod.def("load_model_file", &load_model_file, py::arg("path"));
    mod.def("example1", &preset_example1, py::arg("n"));
    mod.def("example2", &preset_example2, py::arg("kappa"), py::arg("m"), py::arg("halfwidth"),
            py::arg("n"));
    mod.def("example2_harmonic_residual", &example2_harmonic_residual);

    py::class_<HypothesisVerdict>(mod, "HypothesisVerdict")
        .def_readonly("holds", &HypothesisVerdict::holds)
        .def_readonly("trace_integral", &HypothesisVerdict::trace_integral)
        .def_readonly("qinf_min_eig", &HypothesisVerdict::qinf_min_eig);
    mod.def("validate_hypothesis", &validate_hypothesis);

    py::class_<GramianSet>(mod, "GramianSet")
        .def_readonly("q_inf", &GramianSet::q_inf)
        .def_readonly("lyapunov_residual", &GramianSet::lyapunov_residual);
    mod.def("make_gramians", &make_gramians);
    mod.def("solve_lyapunov", &solve_lyapunov);
    mod.def("finite_time_gramian", &finite_time_gramian, py::arg("model"), py::arg("q_inf"),
            py::arg("t"));
    mod.def("transition_matrix", &transition_matrix, py::arg("model"), py::arg("t"));

    py::class_<SymmetryReport>(mod, "SymmetryReport")
        .def_readonly("is_symmetric", &SymmetryReport::is_symmetric)
        .def_readonly("commutator_residual", &SymmetryReport::commutator_residual)
        .def_readonly("semigroup_residuals", &SymmetryReport::semigroup_residuals)
        .def_readonly("contraction_margin", &SymmetryReport::contraction_margin)
        .def_readonly("scale", &SymmetryReport::scale)
        .def_readonly("tol", &SymmetryReport::tol);
    mod.def("check_reversibility", &check_reversibility, py::arg("model"),
            py::arg("tol_factor") = 1e-10);
    mod.def("classify_2x2", &classify_2x2, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"),
            py::arg("q"));

    py::class_<OperatorBundle>(mod, "OperatorBundle")
        .def_readonly("a_q", &OperatorBundle::a_q)
        .def_readonly("a_0", &OperatorBundle::a_0)
        .def_readonly("v", &OperatorBundle::v)
        .def_readonly("u", &OperatorBundle::u)
        .def_readonly("beta", &OperatorBundle::beta)
        .def_readonly("beta_0", &OperatorBundle::beta_0)
        .def_readonly("frame_q", &OperatorBundle::frame_q)
        .def_readonly("frame_0", &OperatorBundle::frame_0)
        .def("s_q", &OperatorBundle::s_q, py::arg("t"))
        .def("s_0", &OperatorBundle::s_0, py::arg("t"));
    mod.def("build_operator_bundle", &build_operator_bundle);

    py::class_<Polynomial>(mod, "Polynomial")
        .def(py::init(&make_polynomial), py::arg("dim"), py::arg("terms"))
        .def_property_readonly("dim", &Polynomial::dim)
        .def_property_readonly("degree", &Polynomial::degree)
        .def("evaluate", &Polynomial::evaluate)
        .def("terms", [](const Polynomial& p) {
            std::vector<std::pair<std::vector<int>, double>> out(p.terms().begin(),
                                                                 p.terms().end());
            return out;
        });
    mod.def("load_observable",
            [](const std::string& text, int dim) {
                return load_observable(nlohmann::json::parse(text), dim);
            },
            py::arg("json_text"), py::arg("dim"));

    py::class_<ChaosCoefficients>(mod, "ChaosCoefficients")
        .def_readonly("dim", &ChaosCoefficients::dim)
        .def_readonly("degree", &ChaosCoefficients::degree)
        .def("l2_norm_sq", &ChaosCoefficients::l2_norm_sq)
        .def("items", [](const ChaosCoefficients& c) {
            std::vector<std::pair<std::vector<int>, double>> out(c.coeffs.begin(),
                                                                 c.coeffs.end());
            return out;
        });
    mod.def("expand", &expand, py::arg("phi"), py::arg("bundle"),
            py::arg("degree_cap") = kDefaultDegreeCap);
    mod.def("chaos_to_polynomial", &chaos_to_polynomial);
    mod.def("chaos_evaluate", &chaos_evaluate);
    mod.def("apply_rt_spectral", &apply_rt_spectral);
    mod.def("apply_generator_spectral", &apply_generator_spectral);
    mod.def("apply_sqrt_shifted_generator", &apply_sqrt_shifted_generator);
    mod.def("spectral_gap", &spectral_gap);

    mod.def("evaluate_rt_quadrature",
            [](const OUModel& m, const GramianSet& g, const Polynomial& phi, const Vector& x,
               double t, int nodes) { return evaluate_rt_quadrature(m, g, phi, x, t, nodes); },
            py::arg("model"), py::arg("gramians"), py::arg("phi"), py::arg("x"), py::arg("t"),
            py::arg("nodes_per_axis") = 40);
    py::class_<McEstimate>(mod, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("samples", &McEstimate::samples);
    mod.def("evaluate_rt_monte_carlo",
            [](const OUModel& m, const GramianSet& g, const Polynomial& phi, const Vector& x,
               double t, long samples, std::uint64_t seed) {
                return evaluate_rt_monte_carlo(
                    m, g, [&phi](const Vector& y) { return phi.evaluate(y); }, x, t, samples,
                    seed);
            },
            py::arg("model"), py::arg("gramians"), py::arg("phi"), py::arg("x"), py::arg("t"),
            py::arg("samples"), py::arg("seed") = 12345);

    py::class_<HypercontractivityReport>(mod, "HypercontractivityReport")
        .def_readonly("p", &HypercontractivityReport::p)
        .def_readonly("q_critical", &HypercontractivityReport::q_critical)
        .def_readonly("lhs", &HypercontractivityReport::lhs)
        .def_readonly("rhs", &HypercontractivityReport::rhs)
        .def_readonly("margin", &HypercontractivityReport::margin)
        .def_readonly("lsi_margin", &HypercontractivityReport::lsi_margin);
    mod.def("check_hypercontractivity_lsi",
            [](const OUModel& m, const GramianSet& g, const OperatorBundle& b,
               const Polynomial& phi, double p, double t) {
                return check_hypercontractivity_lsi(m, g, b, phi, p, t);
            },
            py::arg("model"), py::arg("gramians"), py::arg("bundle"), py::arg("phi"),
            py::arg("p"), py::arg("t"));

    py::class_<KolmogorovResult>(mod, "KolmogorovResult")
        .def_readonly("residual_drift_form", &KolmogorovResult::residual_drift_form)
        .def_readonly("residual_whitened_form", &KolmogorovResult::residual_whitened_form)
        .def_readonly("form_agreement", &KolmogorovResult::form_agreement);
    mod.def("kolmogorov_residual", &kolmogorov_residual, py::arg("model"), py::arg("gramians"),
            py::arg("bundle"), py::arg("phi"), py::arg("t"), py::arg("points"));

    py::class_<SobolevReport>(mod, "SobolevReport")
        .def_readonly("p", &SobolevReport::p)
        .def_readonly("lp", &SobolevReport::lp)
        .def_readonly("grad_q", &SobolevReport::grad_q)
        .def_readonly("hess_q", &SobolevReport::hess_q)
        .def_readonly("grad_aq", &SobolevReport::grad_aq)
        .def_readonly("w1p_q", &SobolevReport::w1p_q)
        .def_readonly("w2p_q", &SobolevReport::w2p_q)
        .def_readonly("w1p_aq", &SobolevReport::w1p_aq);
    mod.def("sobolev_norms",
            [](const Polynomial& phi, const OUModel& m, const GramianSet& g,
               const OperatorBundle& b, double p) { return sobolev_norms(phi, m, g, b, p); },
            py::arg("phi"), py::arg("model"), py::arg("gramians"), py::arg("bundle"),
            py::arg("p") = 2.0);

    py::class_<SequenceIndicator>(mod, "SequenceIndicator")
        .def_readonly("verdict", &SequenceIndicator::verdict)
        .def_readonly("value", &SequenceIndicator::value)
        .def_readonly("growth_exponent", &SequenceIndicator::growth_exponent);
    py::class_<DiagnosticsReport>(mod, "DiagnosticsReport")
        .def_readonly("gap", &DiagnosticsReport::gap)
        .def_readonly("hs_integral", &DiagnosticsReport::hs_integral)
        .def_readonly("trace_half_inv", &DiagnosticsReport::trace_half_inv)
        .def_readonly("trace_identity_residual", &DiagnosticsReport::trace_identity_residual)
        .def_readonly("mu_hq_mass", &DiagnosticsReport::mu_hq_mass)
        .def_readonly("strong_feller", &DiagnosticsReport::strong_feller)
        .def_readonly("compactness", &DiagnosticsReport::compactness);
    mod.def("semigroup_diagnostics", &semigroup_diagnostics);

    py::enum_<StartLaw>(mod, "StartLaw")
        .value("Point", StartLaw::Point)
        .value("Stationary", StartLaw::Stationary);
    py::class_<PathEnsemble>(mod, "PathEnsemble")
        .def_readonly("dt", &PathEnsemble::dt)
        .def_readonly("steps", &PathEnsemble::steps)
        .def_readonly("samples", &PathEnsemble::samples)
        .def_readonly("seed", &PathEnsemble::seed)
        .def_readonly("states", &PathEnsemble::states);
    mod.def("simulate_paths", &simulate_paths, py::arg("model"), py::arg("gramians"),
            py::arg("start"), py::arg("x0"), py::arg("dt"), py::arg("steps"), py::arg("samples"),
            py::arg("seed"));

    py::class_<TransitionKernel>(mod, "TransitionKernel")
        .def_readonly("t", &TransitionKernel::t)
        .def_readonly("s_t", &TransitionKernel::s_t)
        .def_readonly("q_t", &TransitionKernel::q_t);
    mod.def("make_transition_kernel", &make_transition_kernel);
    mod.def("sample_transition", &sample_transition, py::arg("kernel"), py::arg("x"),
            py::arg("n"), py::arg("seed"));

    py::class_<DetailedBalanceResult>(mod, "DetailedBalanceResult")
        .def_readonly("z", &DetailedBalanceResult::z)
        .def_readonly("difference", &DetailedBalanceResult::difference)
        .def_readonly("std_error", &DetailedBalanceResult::std_error)
        .def_readonly("samples", &DetailedBalanceResult::samples);
    mod.def("test_detailed_balance",
            [](const PathEnsemble& e, const Polynomial& phi, const Polynomial& psi) {
                return test_detailed_balance(
                    e, [&phi](const Vector& v) { return phi.evaluate(v); },
                    [&psi](const Vector& v) { return psi.evaluate(v); });
            },
            py::arg("ensemble"), py::arg("phi"), py::arg("psi"));
    mod.def("estimate_decay_rate", &estimate_decay_rate, py::arg("bundle"), py::arg("phi"),
            py::arg("t_grid"));
    mod.def("whitened_coupling_discrepancy", &whitened_coupling_discrepancy, py::arg("model"),
            py::arg("gramians"), py::arg("bundle"), py::arg("x"), py::arg("dt"),
            py::arg("steps"), py::arg("seed"));

    mod.attr("__version__") = kToolVersion;
}
