#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ousem/mehler.hpp"
#include "ousem/model.hpp"
#include "ousem/simulate.hpp"
#include "ousem/spaces.hpp"
#include "ousem/symmetry.hpp"

namespace ousem {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance block embedded in every emitted report. The timestamp is empty
/// unless explicitly stamped so that reruns with identical inputs are
/// bit-identical.
struct RunManifest {
    std::string command;
    std::string model_hash;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string timestamp;
    std::vector<std::string> outputs;
};

std::string hash_hex(std::uint64_t h);

nlohmann::json to_json(const RunManifest& man);
nlohmann::json to_json(const HypothesisVerdict& v);
nlohmann::json to_json(const SymmetryReport& r);
nlohmann::json to_json(const SobolevReport& r);
nlohmann::json to_json(const MeyerReport& r);
nlohmann::json to_json(const DiagnosticsReport& r);
nlohmann::json to_json(const HypercontractivityReport& r);
nlohmann::json to_json(const GradientBoundReport& r);

/// CSV with columns t, lambda_1..lambda_d of Q_t over the grid.
std::string gramian_eigen_csv(const OUModel& m, const GramianSet& g,
                              const std::vector<double>& t_grid);

/// CSV with one row per chaos coefficient: indices then the value.
std::string chaos_csv(const ChaosCoefficients& c);

/// CSV dump of a path ensemble with a provenance header line.
std::string ensemble_csv(const PathEnsemble& e);

} // namespace ousem
