#pragma once

#include <cstdint>
#include <vector>

#include "stormcast/features.hpp"

namespace stormcast {

struct SplitConfig {
    double test_fraction = 0.2;
    uint64_t seed = 0;

    void validate() const;
};

struct TrainTestSplit {
    std::vector<LabeledExample> train;
    std::vector<LabeledExample> test;
};

// Per-class split: each class contributes round(test_fraction * n) test
// samples (at least 1, at most n-1), chosen by seeded shuffle within the
// class. Output preserves the input order. Deterministic for a fixed seed.
TrainTestSplit stratified_split(const std::vector<LabeledExample>& examples,
                                const SplitConfig& cfg);

struct SmoteConfig {
    int k_neighbors = 5;
    double target_ratio = 1.0; // minority grown to ratio * majority
    uint64_t seed = 0;
    std::vector<size_t> binary_indices{kPrevStormIndex}; // rounded to {0,1} after interpolation

    void validate() const;
};

struct SmoteOutput {
    std::vector<FeatureVector> synthetic;
    // Telemetry per synthetic point, enough to audit the construction.
    std::vector<std::pair<int, int>> parents; // (base index, neighbor index) into minority
    std::vector<double> interpolation; // the u drawn for each point
};

// Each synthetic point is base + u * (neighbor - base), u uniform in [0, 1],
// with the base cycling round-robin through the minority and the neighbor
// drawn from its k nearest minority neighbors (Euclidean, self excluded).
SmoteOutput smote(const std::vector<FeatureVector>& minority, size_t majority_count,
                  const SmoteConfig& cfg);

} // namespace stormcast
