// Command-line front door: loads models, runs the check suites and emits
// machine-readable reports. Exit codes: 0 all checks passed, 1 input error,
// 2 at least one check failed.

#include <chrono>
#include <iomanip>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ousem/errors.hpp"
#include "ousem/linalg.hpp"
#include "ousem/presets.hpp"
#include "ousem/report_io.hpp"
#include "ousem/rng.hpp"

using nlohmann::json;
using namespace ousem;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 12345;
    double tol = 1e-10;
    std::string out_dir;
    std::string format = "json";
    bool stamp = false;
};

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

RunManifest make_manifest(const GlobalOptions& g, const std::string& command,
                          std::uint64_t model_hash) {
    RunManifest man;
    man.command = command;
    man.model_hash = hash_hex(model_hash);
    man.seed = g.seed;
    if (g.stamp) man.timestamp = timestamp_now();
    return man;
}

void emit_text(const GlobalOptions& g, RunManifest& man, const std::string& name,
               const std::string& body) {
    if (g.out_dir.empty()) {
        std::cout << body;
        if (!body.empty() && body.back() != '\n') std::cout << "\n";
        return;
    }
    std::filesystem::create_directories(g.out_dir);
    const std::string path = g.out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << body;
    man.outputs.push_back(path);
}

void emit_json(const GlobalOptions& g, RunManifest man, const std::string& name, json body) {
    if (!g.out_dir.empty()) man.outputs.push_back(g.out_dir + "/" + name);
    body["manifest"] = to_json(man);
    const std::string text = body.dump(2) + "\n";
    if (g.out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(g.out_dir);
    const std::string path = g.out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

Vector parse_point(const std::string& csv, int dim) {
    Vector x = Vector::Zero(dim);
    if (csv.empty()) return x;
    std::stringstream ss(csv);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= dim) throw SchemaViolation("point has more than dim entries");
        x(i++) = std::stod(item);
    }
    if (i != dim) throw SchemaViolation("point has fewer than dim entries");
    return x;
}

std::vector<double> default_t_grid(const OUModel& m) {
    const double t0 = 1.0 / std::max(spectral_norm(m.A), 1e-12);
    return {0.01 * t0, 0.1 * t0, t0, 10.0 * t0};
}

int cmd_check(const GlobalOptions& g, const std::string& model_path, bool expect_symmetric,
              double tol_factor) {
    OUModel m = load_model_file(model_path);
    HypothesisVerdict hv = validate_hypothesis(m);
    SymmetryReport sr = check_reversibility(m, tol_factor);

    json body;
    body["hypothesis"] = to_json(hv);
    body["symmetry"] = to_json(sr);
    emit_json(g, make_manifest(g, "check", m.hash()), "check.json", body);

    if (expect_symmetric && !sr.is_symmetric) return 2;
    return 0;
}

int cmd_gramian(const GlobalOptions& g, const std::string& model_path,
                std::vector<double> t_grid) {
    OUModel m = load_model_file(model_path);
    GramianSet gr = make_gramians(m);
    if (t_grid.empty()) t_grid = default_t_grid(m);
    for (double t : t_grid) gr.q_t[t] = finite_time_gramian(m, gr.q_inf, t);

    RunManifest man = make_manifest(g, "gramian", m.hash());
    emit_text(g, man, "gramian.csv", gramian_eigen_csv(m, gr, t_grid));

    json body;
    body["lyapunov_residual"] = gr.lyapunov_residual;
    body["qinf_trace"] = gr.q_inf.trace();
    const double scale =
        spectral_norm(m.A) * spectral_norm(gr.q_inf) + spectral_norm(m.Q);
    body["residual_ok"] = gr.lyapunov_residual <= g.tol * scale;
    emit_json(g, man, "gramian.json", body);
    return body["residual_ok"].get<bool>() ? 0 : 2;
}

int cmd_gap(const GlobalOptions& g, const std::string& model_path) {
    OUModel m = load_model_file(model_path);
    GramianSet gr = make_gramians(m);
    OperatorBundle b = build_operator_bundle(m, gr);

    if (g.format == "csv") {
        std::ostringstream os;
        os << "i,beta_i\n";
        for (int i = 0; i < b.beta.size(); ++i)
            os << (i + 1) << "," << std::setprecision(17) << b.beta(i) << "\n";
        RunManifest man = make_manifest(g, "gap", m.hash());
        emit_text(g, man, "gap.csv", os.str());
        return 0;
    }
    json body;
    body["gap"] = spectral_gap(b);
    body["beta"] = std::vector<double>(b.beta.data(), b.beta.data() + b.beta.size());
    emit_json(g, make_manifest(g, "gap", m.hash()), "gap.json", body);
    return 0;
}

int cmd_mehler(const GlobalOptions& g, const std::string& model_path,
               const std::string& obs_path, const std::string& point_csv, double t,
               const std::string& method, int nodes, long samples,
               const std::string& chaos_dump) {
    OUModel m = load_model_file(model_path);
    GramianSet gr = make_gramians(m);
    Polynomial phi = load_observable_file(obs_path, m.dim);
    Vector x = parse_point(point_csv, m.dim);

    json body;
    body["t"] = t;
    body["method"] = method;
    if (method == "gauss-hermite") {
        body["value"] = evaluate_rt_quadrature(m, gr, phi, x, t, nodes);
    } else if (method == "monte-carlo") {
        McEstimate est = evaluate_rt_monte_carlo(
            m, gr, [&phi](const Vector& y) { return phi.evaluate(y); }, x, t, samples, g.seed);
        body["value"] = est.mean;
        body["std_error"] = est.std_error;
        body["samples"] = est.samples;
    } else {
        throw SchemaViolation("unknown method '" + method + "'");
    }

    RunManifest man = make_manifest(g, "mehler", m.hash());
    if (!chaos_dump.empty()) {
        OperatorBundle b = build_operator_bundle(m, gr);
        std::ofstream out(chaos_dump);
        if (!out) throw Error("cannot write " + chaos_dump);
        out << chaos_csv(expand(phi, b));
        man.outputs.push_back(chaos_dump);
    }
    emit_json(g, man, "mehler.json", body);
    return 0;
}

int cmd_sobolev(const GlobalOptions& g, const std::string& model_path,
                const std::string& obs_path, const std::string& corpus_path, double p) {
    OUModel m = load_model_file(model_path);
    GramianSet gr = make_gramians(m);
    OperatorBundle b = build_operator_bundle(m, gr);

    json body;
    if (!obs_path.empty()) {
        Polynomial phi = load_observable_file(obs_path, m.dim);
        body["sobolev"] = to_json(sobolev_norms(phi, m, gr, b, p));
    }
    if (!corpus_path.empty()) {
        std::ifstream in(corpus_path);
        if (!in) throw SchemaViolation("cannot open corpus file: " + corpus_path);
        json corpus_doc;
        in >> corpus_doc;
        if (!corpus_doc.is_array()) throw SchemaViolation("corpus must be an array");
        std::vector<Polynomial> corpus;
        for (const auto& doc : corpus_doc) corpus.push_back(load_observable(doc, m.dim));
        body["meyer"] = to_json(meyer_ratio(corpus, m, gr, b, p));
    }
    if (body.empty()) throw SchemaViolation("sobolev needs --observable or --corpus");
    emit_json(g, make_manifest(g, "sobolev", m.hash()), "sobolev.json", body);
    return 0;
}

int cmd_simulate(const GlobalOptions& g, const std::string& model_path, double dt, int steps,
                 int samples, const std::string& x0_csv, bool stationary, bool detailed_balance,
                 const std::string& phi_path, const std::string& psi_path) {
    OUModel m = load_model_file(model_path);
    GramianSet gr = make_gramians(m);
    Vector x0 = Vector::Zero(m.dim);
    if (!stationary) x0 = parse_point(x0_csv, m.dim);

    PathEnsemble e = simulate_paths(m, gr, stationary ? StartLaw::Stationary : StartLaw::Point,
                                    x0, dt, steps, samples, g.seed);

    RunManifest man = make_manifest(g, "simulate", m.hash());
    if (detailed_balance) {
        if (phi_path.empty() || psi_path.empty())
            throw SchemaViolation("--detailed-balance needs --phi and --psi observables");
        Polynomial phi = load_observable_file(phi_path, m.dim);
        Polynomial psi = load_observable_file(psi_path, m.dim);
        DetailedBalanceResult r = test_detailed_balance(
            e, [&phi](const Vector& v) { return phi.evaluate(v); },
            [&psi](const Vector& v) { return psi.evaluate(v); });
        json body;
        body["z"] = r.z;
        body["difference"] = r.difference;
        body["std_error"] = r.std_error;
        body["samples"] = r.samples;
        body["within_4_sigma"] = std::abs(r.z) <= 4.0;
        emit_json(g, man, "detailed_balance.json", body);
        return 0;
    }
    emit_text(g, man, "ensemble.csv", ensemble_csv(e));
    if (!g.out_dir.empty()) {
        json body;
        body["samples"] = e.samples;
        body["steps"] = e.steps;
        emit_json(g, man, "simulate.json", body);
    }
    return 0;
}

int cmd_diagnostics(const GlobalOptions& g, const std::string& model_path) {
    OUModel m = load_model_file(model_path);
    GramianSet gr = make_gramians(m);
    OperatorBundle b = build_operator_bundle(m, gr);
    DiagnosticsReport rep = semigroup_diagnostics(m, gr, b);
    emit_json(g, make_manifest(g, "diagnostics", m.hash()), "diagnostics.json", to_json(rep));
    return rep.trace_identity_residual <= 1e-6 ? 0 : 2;
}

int cmd_report(const GlobalOptions& g, const std::string& model_path, bool expect_symmetric) {
    OUModel m = load_model_file(model_path);
    RunManifest man = make_manifest(g, "report", m.hash());

    json body;
    bool ok = true;

    HypothesisVerdict hv = validate_hypothesis(m);
    body["hypothesis"] = to_json(hv);
    ok = ok && hv.holds;

    SymmetryReport sr = check_reversibility(m);
    body["symmetry"] = to_json(sr);
    if (expect_symmetric && !sr.is_symmetric) ok = false;

    if (hv.holds) {
        GramianSet gr = make_gramians(m);
        const double lyap_scale =
            spectral_norm(m.A) * spectral_norm(gr.q_inf) + spectral_norm(m.Q);
        body["lyapunov_residual"] = gr.lyapunov_residual;
        const bool lyap_ok = gr.lyapunov_residual <= g.tol * lyap_scale;
        body["lyapunov_ok"] = lyap_ok;
        ok = ok && lyap_ok;

        emit_text(g, man, "gramian.csv", gramian_eigen_csv(m, gr, default_t_grid(m)));

        if (sr.is_symmetric) {
            OperatorBundle b = build_operator_bundle(m, gr);
            json inv;
            Matrix raw = b.q_inv_sqrt * m.A * b.q_sqrt;
            inv["a_q_asymmetry"] = (raw - raw.transpose()).norm() / std::max(raw.norm(), 1e-300);
            inv["a0_quadratic_identity"] =
                (b.a_0 + 0.5 * b.v.transpose() * b.v).norm() / std::max(b.a_0.norm(), 1e-300);
            inv["u_orthogonality"] =
                (b.u.transpose() * b.u - Matrix::Identity(m.dim, m.dim)).norm();
            inv["gap_transfer"] = std::abs(b.beta(0) - b.beta_0(0));
            const double t_ref = 1.0 / std::max(spectral_norm(m.A), 1e-12);
            Matrix lhs = b.u * b.s_0(t_ref) * b.u.transpose();
            inv["conjugation_identity"] = (lhs - b.s_q(t_ref)).norm();
            body["bundle_invariants"] = inv;
            const double inv_tol = std::max(g.tol * 1e2, 1e-8);
            for (const auto& [k, v] : inv.items())
                ok = ok && v.get<double>() <= inv_tol;

            DiagnosticsReport diag = semigroup_diagnostics(m, gr, b);
            body["diagnostics"] = to_json(diag);
            ok = ok && diag.trace_identity_residual <= 1e-6;
            ok = ok && sr.contraction_margin >= -1e-9;
        }
    }
    body["all_passed"] = ok;
    emit_json(g, man, "report.json", body);
    return ok ? 0 : 2;
}

int cmd_example1(const GlobalOptions& g, int n) {
    OUModel m = preset_example1(n);
    RunManifest man = make_manifest(g, "example1", m.hash());
    json body;
    body["model"] = model_to_json(m);
    body["dim"] = m.dim;
    GramianSet gr = make_gramians(m);
    OperatorBundle b = build_operator_bundle(m, gr);
    body["gap"] = spectral_gap(b);
    Vector qinf_diag = gr.q_inf.diagonal();
    body["qinf_diag"] = std::vector<double>(qinf_diag.data(), qinf_diag.data() + m.dim);
    emit_json(g, man, "example1.json", body);
    return 0;
}

int cmd_example2(const GlobalOptions& g, double kappa, double mass, double halfwidth, int n) {
    if (halfwidth <= 0.0) halfwidth = 40.0 / kappa;
    OUModel m = preset_example2(kappa, mass, halfwidth, n);
    RunManifest man = make_manifest(g, "example2", m.hash());

    json body;
    body["model"] = {{"kind", "example2"},
                     {"kappa", kappa},
                     {"m", mass},
                     {"halfwidth", halfwidth},
                     {"n", n}};
    SymmetryReport sr = check_reversibility(m);
    body["symmetry_residual"] = sr.commutator_residual / sr.scale;
    body["is_symmetric"] = sr.is_symmetric;
    body["harmonic_residual"] = example2_harmonic_residual(m);
    body["m_below_quarter_kappa_sq"] = mass < 0.25 * kappa * kappa;

    json decay = json::array();
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        decay.push_back({{"t", t},
                         {"sq_norm", example2_sq_norm(m, t)},
                         {"reference", std::exp(-mass * t)}});
    }
    body["sq_norm_vs_exp_mt"] = decay;
    emit_json(g, man, "example2.json", body);
    return sr.is_symmetric ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetric Ornstein-Uhlenbeck semigroup toolkit"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--tol", g.tol, "residual tolerance factor");
    app.add_option("--out", g.out_dir, "output directory (default: stdout)");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--stamp", g.stamp, "embed a wall-clock timestamp in manifests");

    std::string model_path, obs_path, psi_path, corpus_path, point_csv, chaos_dump;
    std::string method = "gauss-hermite";
    std::vector<double> t_grid;
    double t = 1.0, p = 2.0, dt = 0.1, kappa = 1.0, mass = 1.0, halfwidth = -1.0;
    int nodes = 40, steps = 1, samples = 10000, n1 = 32, n2 = 512;
    long mc_samples = 100000;
    bool expect_symmetric = false, stationary = false, detailed_balance = false;

    auto* check = app.add_subcommand("check", "hypothesis + reversibility verdicts");
    check->add_option("model", model_path)->required();
    check->add_flag("--expect-symmetric", expect_symmetric);

    auto* gramian = app.add_subcommand("gramian", "stationary and finite-time covariances");
    gramian->add_option("model", model_path)->required();
    gramian->add_option("--tgrid", t_grid, "times for the eigenvalue table");

    auto* gap = app.add_subcommand("gap", "spectral gap and eigenvalues of -A_Q");
    gap->add_option("model", model_path)->required();

    auto* mehler = app.add_subcommand("mehler", "evaluate R_t phi(x)");
    mehler->add_option("model", model_path)->required();
    mehler->add_option("--observable", obs_path)->required();
    mehler->add_option("--x", point_csv, "evaluation point, comma-separated");
    mehler->add_option("--t", t);
    mehler->add_option("--method", method)->check(CLI::IsMember({"gauss-hermite", "monte-carlo"}));
    mehler->add_option("--nodes", nodes);
    mehler->add_option("--samples", mc_samples);
    mehler->add_option("--chaos-dump", chaos_dump, "write the chaos expansion CSV here");

    auto* sobolev = app.add_subcommand("sobolev", "Gauss-Sobolev norms and Meyer ratios");
    sobolev->add_option("model", model_path)->required();
    sobolev->add_option("--observable", obs_path);
    sobolev->add_option("--corpus", corpus_path);
    sobolev->add_option("--p", p);

    auto* simulate = app.add_subcommand("simulate", "exact path sampling");
    simulate->add_option("model", model_path)->required();
    simulate->add_option("--dt", dt);
    simulate->add_option("--steps", steps);
    simulate->add_option("--samples", samples);
    simulate->add_option("--x0", point_csv);
    simulate->add_flag("--stationary", stationary);
    simulate->add_flag("--detailed-balance", detailed_balance);
    simulate->add_option("--phi", obs_path);
    simulate->add_option("--psi", psi_path);

    auto* diagnostics = app.add_subcommand("diagnostics", "HS integral and sequence predicates");
    diagnostics->add_option("model", model_path)->required();

    auto* report = app.add_subcommand("report", "full check bundle");
    report->add_option("model", model_path)->required();
    report->add_flag("--expect-symmetric", expect_symmetric);

    auto* example1 = app.add_subcommand("example1", "diagonal preset with vanishing gap");
    example1->add_option("--N", n1, "truncation");

    auto* example2 = app.add_subcommand("example2", "weighted heat-equation preset");
    example2->add_option("--kappa", kappa)->required();
    example2->add_option("--m", mass)->required();
    example2->add_option("--halfwidth", halfwidth, "defaults to 40/kappa");
    example2->add_option("--n", n2, "grid points");

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(g, model_path, expect_symmetric, g.tol);
        if (gramian->parsed()) return cmd_gramian(g, model_path, t_grid);
        if (gap->parsed()) return cmd_gap(g, model_path);
        if (mehler->parsed())
            return cmd_mehler(g, model_path, obs_path, point_csv, t, method, nodes, mc_samples,
                              chaos_dump);
        if (sobolev->parsed()) return cmd_sobolev(g, model_path, obs_path, corpus_path, p);
        if (simulate->parsed())
            return cmd_simulate(g, model_path, dt, steps, samples, point_csv, stationary,
                                detailed_balance, obs_path, psi_path);
        if (diagnostics->parsed()) return cmd_diagnostics(g, model_path);
        if (report->parsed()) return cmd_report(g, model_path, expect_symmetric);
        if (example1->parsed()) return cmd_example1(g, n1);
        if (example2->parsed()) return cmd_example2(g, kappa, mass, halfwidth, n2);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
