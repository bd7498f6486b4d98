#pragma once

#include <span>
#include <string>
#include <vector>

#include "stormcast/canny.hpp"
#include "stormcast/date.hpp"
#include "stormcast/dbscan.hpp"
#include "stormcast/raster.hpp"

namespace stormcast {

enum class StormClass { no_storm = 0, storm = 1 };

inline const char* to_string(StormClass c) {
    return c == StormClass::storm ? "storm" : "no_storm";
}

// Per-date counts extracted from one solar image.
struct DailySunspotRecord {
    Date date{};
    int sunspots = 0; // active sunspots (external contours)
    int regions = 0;  // active sunspot regions (clusters)
};

// Sample vectors are plain real vectors so the learning core also serves
// low-dimensional toy problems; pipeline vectors are built by
// make_feature_vector and always have kFeatureCount entries.
using FeatureVector = std::vector<double>;

inline constexpr size_t kFeatureCount = 5;
inline constexpr size_t kPrevStormIndex = 2; // the only binary coordinate

// Order: previous-day sunspots, previous-day regions, previous-day storm flag,
// present-day sunspots, present-day regions.
FeatureVector make_feature_vector(double prev_sunspots, double prev_regions,
                                  bool prev_storm, double cur_sunspots,
                                  double cur_regions);

struct LabeledExample {
    Date date{};      // the "present day"; the label concerns date + 1
    FeatureVector features;
    StormClass label = StormClass::no_storm;
};

// Per-feature min-max normalization fitted on a training set.
class Scaler {
public:
    Scaler() = default;
    static Scaler fit(std::span<const FeatureVector> samples); // throws on < 2 samples

    FeatureVector transform(const FeatureVector& v) const;

    size_t dimension() const { return mins_.size(); }
    bool is_degenerate(size_t feature) const { return maxs_[feature] == mins_[feature]; }
    bool any_degenerate() const;
    double min_of(size_t feature) const { return mins_[feature]; }
    double max_of(size_t feature) const { return maxs_[feature]; }

    static Scaler from_bounds(std::vector<double> mins, std::vector<double> maxs);

private:
    std::vector<double> mins_;
    std::vector<double> maxs_;
};

inline FeatureVector transform(const Scaler& s, const FeatureVector& v) {
    return s.transform(v);
}

// Counts for one image: sunspots from external contours of the edge map,
// regions from clustering the same edge pixels.
DailySunspotRecord extract_features(const GrayImage& img, const CannyParams& canny_params,
                                    const DbscanParams& db_params,
                                    CannyStages* stages = nullptr);

struct KpDay; // ingest.hpp

struct AssembledDataset {
    std::vector<LabeledExample> examples; // strictly date-increasing
    int skipped = 0;                      // dates missing a dependency
};

// For every date d with records at d-1 and d, Kp at d-1 (previous-day storm
// flag) and Kp at d+1 (label): emit [S(d-1), R(d-1), storm(d-1), S(d), R(d)]
// labeled with storm(d+1). Gaps are skipped and counted, never imputed.
AssembledDataset assemble_examples(const std::vector<DailySunspotRecord>& records,
                                   const std::vector<KpDay>& kp);

inline Scaler fit_scaler(std::span<const FeatureVector> samples) { return Scaler::fit(samples); }

// Region/spot combination comparable to published daily sunspot numbers
// (observer constant deliberately omitted).
inline double wolf_proxy(const DailySunspotRecord& r) {
    return 10.0 * r.regions + r.sunspots;
}

} // namespace stormcast
