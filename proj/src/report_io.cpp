#include "ousem/report_io.hpp"

#include <iomanip>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace ousem {

using nlohmann::json;

std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

json to_json(const RunManifest& man) {
    json j;
    j["command"] = man.command;
    j["model_hash"] = man.model_hash;
    j["seed"] = man.seed;
    j["tool_version"] = man.tool_version;
    j["timestamp"] = man.timestamp;
    j["outputs"] = man.outputs;
    return j;
}

json to_json(const HypothesisVerdict& v) {
    json j;
    j["holds"] = v.holds;
    j["trace_integral"] = v.trace_integral;
    j["qinf_min_eig"] = v.qinf_min_eig;
    return j;
}

json to_json(const SymmetryReport& r) {
    json j;
    j["is_symmetric"] = r.is_symmetric;
    j["commutator_residual"] = r.commutator_residual;
    j["scale"] = r.scale;
    j["tol"] = r.tol;
    j["contraction_margin"] = r.contraction_margin;
    json grid = json::array();
    for (const auto& [t, res] : r.semigroup_residuals) {
        grid.push_back({{"t", t}, {"residual", res}});
    }
    j["semigroup_residuals"] = grid;
    return j;
}

json to_json(const SobolevReport& r) {
    json j;
    j["p"] = r.p;
    j["lp"] = r.lp;
    j["grad_q"] = r.grad_q;
    j["hess_q"] = r.hess_q;
    j["grad_aq"] = r.grad_aq;
    j["w1p_q"] = r.w1p_q;
    j["w2p_q"] = r.w2p_q;
    j["w1p_aq"] = r.w1p_aq;
    return j;
}

json to_json(const MeyerReport& r) {
    json j;
    j["p"] = r.p;
    j["first_min"] = r.first_min;
    j["first_max"] = r.first_max;
    j["second_min"] = r.second_min;
    j["second_max"] = r.second_max;
    j["p2_identity_residual"] = r.p2_identity_residual;
    return j;
}

namespace {

json to_json(const SequenceIndicator& s) {
    json j;
    j["verdict"] = s.verdict;
    j["value"] = s.value;
    j["growth_exponent"] = s.growth_exponent;
    return j;
}

} // namespace

json to_json(const DiagnosticsReport& r) {
    json j;
    j["gap"] = r.gap;
    j["hs_integral"] = r.hs_integral;
    j["trace_half_inv"] = r.trace_half_inv;
    j["trace_identity_residual"] = r.trace_identity_residual;
    if (r.mu_hq_mass) j["mu_hq_mass"] = to_json(*r.mu_hq_mass);
    if (r.strong_feller) j["strong_feller"] = to_json(*r.strong_feller);
    if (r.compactness) j["compactness"] = to_json(*r.compactness);
    return j;
}

json to_json(const HypercontractivityReport& r) {
    json j;
    j["p"] = r.p;
    j["t"] = r.t;
    j["beta"] = r.beta;
    j["q_critical"] = r.q_critical;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["entropy"] = r.entropy;
    j["dirichlet"] = r.dirichlet;
    j["lsi_rhs"] = r.lsi_rhs;
    j["lsi_margin"] = r.lsi_margin;
    return j;
}

json to_json(const GradientBoundReport& r) {
    json j;
    j["matrix_ok"] = r.matrix_ok;
    j["sampled_ok"] = r.sampled_ok;
    json pts = json::array();
    for (const auto& p : r.points) {
        pts.push_back({{"t", p.t},
                       {"matrix_norm", p.matrix_norm},
                       {"matrix_bound", p.matrix_bound},
                       {"sampled_sup", p.sampled_sup},
                       {"sampled_bound", p.sampled_bound}});
    }
    j["points"] = pts;
    return j;
}

namespace {

void append_double(std::ostringstream& os, double v) {
    os << std::setprecision(17) << v;
}

} // namespace

std::string gramian_eigen_csv(const OUModel& m, const GramianSet& g,
                              const std::vector<double>& t_grid) {
    std::ostringstream os;
    os << "t";
    for (int i = 1; i <= m.dim; ++i) os << ",lambda_" << i;
    os << "\n";
    for (double t : t_grid) {
        auto cached = g.q_t.find(t);
        Matrix q_t = cached != g.q_t.end() ? cached->second
                                           : finite_time_gramian(m, g.q_inf, t);
        Eigen::SelfAdjointEigenSolver<Matrix> es(q_t);
        os << std::setprecision(17) << t;
        for (int i = 0; i < m.dim; ++i) {
            os << ",";
            append_double(os, es.eigenvalues()(i));
        }
        os << "\n";
    }
    return os.str();
}

std::string chaos_csv(const ChaosCoefficients& c) {
    std::ostringstream os;
    for (int i = 1; i <= c.dim; ++i) os << "n_" << i << ",";
    os << "coefficient\n";
    for (const auto& [n, v] : c.coeffs) {
        for (int k : n) os << k << ",";
        append_double(os, v);
        os << "\n";
    }
    return os.str();
}

std::string ensemble_csv(const PathEnsemble& e) {
    std::ostringstream os;
    os << "# seed=" << e.seed << " dt=" << std::setprecision(17) << e.dt
       << " steps=" << e.steps << " samples=" << e.samples
       << " model_hash=" << hash_hex(e.model_hash)
       << " start=" << (e.start == StartLaw::Stationary ? "stationary" : "point") << "\n";
    const int d = static_cast<int>(e.states.front().cols());
    os << "sample,step";
    for (int i = 1; i <= d; ++i) os << ",x_" << i;
    os << "\n";
    for (int s = 0; s < e.samples; ++s) {
        for (int k = 0; k <= e.steps; ++k) {
            os << s << "," << k;
            for (int i = 0; i < d; ++i) {
                os << ",";
                append_double(os, e.states[k](s, i));
            }
            os << "\n";
        }
    }
    return os.str();
}

} // namespace ousem
