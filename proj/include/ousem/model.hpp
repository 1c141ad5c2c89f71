#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "ousem/polynomial.hpp"
#include "ousem/types.hpp"

namespace ousem {

enum class ModelKind { Dense, Diagonal, Example2 };

std::string to_string(ModelKind kind);

/// Parameters of the weighted heat-equation discretization (example2 kind).
struct Example2Params {
    double kappa = 1.0;      ///< weight decay rate, rho(z) = exp(-kappa|z|)
    double m = 1.0;          ///< mass term of the drift, A = Laplacian - m
    double halfwidth = 40.0; ///< Dirichlet truncation radius L
    int n = 512;             ///< interior grid points
};

/// A drift/noise pair (A, Q) on R^d. Immutable after construction; the
/// single source of truth for everything downstream.
struct OUModel {
    int dim = 0;
    Matrix A; ///< drift generator, units 1/time
    Matrix Q; ///< noise covariance rate, symmetric PSD
    ModelKind kind = ModelKind::Dense;

    // Diagonal kind keeps the defining sequences for the analytic
    // sequence predicates in the spaces module.
    std::optional<Vector> alpha;
    std::optional<Vector> qdiag;

    std::optional<Example2Params> ex2;

    /// Deterministic content hash (FNV-1a over kind, dim and entries).
    std::uint64_t hash() const;
};

struct HypothesisVerdict {
    bool holds = false;
    double trace_integral = 0.0; ///< integral of tr(S(s) Q S*(s)) over [0, inf)
    double qinf_min_eig = 0.0;   ///< smallest eigenvalue of the stationary covariance
};

/// Parses and validates a model document. Throws SchemaViolation on malformed
/// input and NotPSD when Q has an eigenvalue below -1e-12 * ||Q||.
OUModel load_model(const nlohmann::json& doc);
OUModel load_model_file(const std::string& path);

/// Serializes a model back to its document form (dense kinds keep matrices,
/// diagonal/example2 kinds keep their defining parameters).
nlohmann::json model_to_json(const OUModel& m);

/// Decides the standing hypothesis: finite noise trace integral and
/// injective stationary covariance. Never throws on a failing model;
/// the answer is the verdict object.
HypothesisVerdict validate_hypothesis(const OUModel& m);

/// Reads an observable document {"degree": D, "terms": [{"c":..., "p":[...]}]}.
Polynomial load_observable(const nlohmann::json& doc, int dim);
Polynomial load_observable_file(const std::string& path, int dim);
nlohmann::json observable_to_json(const Polynomial& p);

} // namespace ousem
