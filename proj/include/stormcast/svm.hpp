#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stormcast/features.hpp"

namespace stormcast {

struct SvmConfig {
    double c = 1.0;
    // <= 0 selects automatic width: 1 / (dim * mean per-feature variance).
    double gamma = 0.0;
    double tolerance = 1e-3; // KKT tolerance; training stops when the largest
                             // pairwise violation is within it
    int max_passes = 10000;  // full sweeps; each sweep is up to n pair updates

    void validate() const;
};

struct TrainMeta {
    double c = 1.0;
    double gamma = 0.0; // resolved value actually used
    double tolerance = 1e-3;
    int max_passes = 10000;
    uint64_t seed = 0;
    std::string dataset_fingerprint;
    bool converged = true;
};

struct SvmModel {
    std::vector<FeatureVector> support_vectors; // scaled space
    std::vector<double> dual_coefs;             // alpha_i * y_i, all nonzero
    double bias = 0.0;
    double gamma = 0.0;
    Scaler scaler; // empty (dimension 0) for models trained on pre-scaled toys
    TrainMeta meta;
};

// Per-training diagnostics: enough to audit feasibility and monotone ascent.
struct SvmTelemetry {
    std::vector<double> objective_per_sweep; // dual objective, non-decreasing
    std::vector<double> alphas;              // final alphas over the training set
    long pair_updates = 0;
    bool converged = true;
};

double rbf_kernel(const FeatureVector& a, const FeatureVector& b, double gamma);

// The automatic kernel width: 1 / (dim * mean per-feature variance).
double auto_rbf_gamma(const std::vector<FeatureVector>& samples);

struct GridPoint {
    double c = 0.0;
    double gamma = 0.0;
    double val_auc = 0.0;
};

struct GridSearchResult {
    double best_c = 1.0;
    double best_gamma = 0.0;
    double best_auc = 0.0;
    std::vector<GridPoint> grid;
};

// Off-by-default tuning helper: carves a stratified validation fold out of
// the given (scaled) training rows and scores C in {0.1, 1, 10} against
// gamma in {0.01, 0.1, 1} x automatic width by validation AUC. Ties keep the
// first candidate in that deterministic order.
GridSearchResult grid_search_gsvm(const std::vector<FeatureVector>& samples,
                                  const std::vector<int>& labels, const SvmConfig& base,
                                  uint64_t seed, double val_fraction = 0.25);

// Solves the soft-margin dual with the Gaussian kernel by sequential minimal
// optimization on the maximal violating pair, so the stopping rule is exactly
// "all KKT conditions hold within tolerance". Bias comes from averaging
// on-margin support vectors, falling back to the feasible-interval midpoint.
// Labels are +1 (storm) / -1 (no storm); both classes must be present.
SvmModel train_gsvm(const std::vector<FeatureVector>& samples, const std::vector<int>& labels,
                    const SvmConfig& cfg, SvmTelemetry* telemetry = nullptr);

// Convenience overload over labeled examples (features must be scaled already).
SvmModel train_gsvm(const std::vector<LabeledExample>& train, const SvmConfig& cfg,
                    SvmTelemetry* telemetry = nullptr);

// sum_i alpha_i y_i K(sv_i, v) + b over the stored support vectors; v must
// already be in the model's scaled space.
double decision_value(const SvmModel& m, const FeatureVector& v);

// Applies the model's scaler to a raw vector, then thresholds at 0; the
// boundary itself is assigned to storm.
StormClass predict(const SvmModel& m, const FeatureVector& raw);

// Flat versioned text format, shortest round-trip number formatting; loading
// reproduces the model bit-exactly.
void save_model(const std::filesystem::path& path, const SvmModel& m);
SvmModel load_model(const std::filesystem::path& path);
std::string serialize_model(const SvmModel& m);
SvmModel deserialize_model(const std::string& text);

} // namespace stormcast
