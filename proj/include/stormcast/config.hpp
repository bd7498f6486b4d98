#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "stormcast/canny.hpp"
#include "stormcast/dbscan.hpp"
#include "stormcast/sampling.hpp"
#include "stormcast/svm.hpp"

namespace stormcast {

// Everything a run needs, resolvable from a flat sectioned key=value file and
// overridable by command-line flags (flags win). Stage seeds derive from the
// one global seed, so one stage's randomness never leaks into another's.
struct RunConfig {
    // [paths]
    std::filesystem::path cache_dir = "cache";
    std::filesystem::path features_csv = "features.csv";
    std::filesystem::path dataset_csv = "dataset.csv";
    std::filesystem::path model_file = "model.gsvm";
    std::filesystem::path reports_dir = "reports";

    CannyParams canny;     // [canny]
    DbscanParams dbscan;   // [dbscan]
    SmoteConfig smote;     // [smote]
    SvmConfig svm;         // [svm]
    SplitConfig split;     // [split]

    // [run]
    uint64_t seed = 1;
    bool offline = false;
    std::string base_url = "https://sdo.gsfc.nasa.gov/assets/img/browse";
    int fetch_concurrency = 4;
    // "train" fits the feature scaler on the training split only; "all"
    // reproduces the global min/max variant.
    bool scaler_global = false;
    bool grid_search = false; // tune (C, gamma) on a validation fold first

    uint64_t stage_seed(std::string_view stage) const;

    void validate() const;

    // Parses the sectioned key=value format; unknown keys are errors.
    static RunConfig load(const std::filesystem::path& path);
    void apply_line(const std::string& section, const std::string& key,
                    const std::string& value); // shared by file parser and flags

    // Canonical serialization, embedded in reports for provenance.
    std::string serialize() const;
};

} // namespace stormcast
