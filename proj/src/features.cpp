#include "stormcast/features.hpp"

#include <map>
#include <stdexcept>

#include "stormcast/contours.hpp"
#include "stormcast/errors.hpp"
#include "stormcast/ingest.hpp"

namespace stormcast {

FeatureVector make_feature_vector(double prev_sunspots, double prev_regions,
                                  bool prev_storm, double cur_sunspots,
                                  double cur_regions) {
    return {prev_sunspots, prev_regions, prev_storm ? 1.0 : 0.0, cur_sunspots, cur_regions};
}

Scaler Scaler::fit(std::span<const FeatureVector> samples) {
    if (samples.size() < 2)
        throw DataError("scaler needs at least 2 samples");
    const size_t dim = samples[0].size();
    std::vector<double> mins = samples[0];
    std::vector<double> maxs = samples[0];
    for (const auto& s : samples) {
        if (s.size() != dim) throw std::invalid_argument("inconsistent feature dimensions");
        for (size_t f = 0; f < dim; ++f) {
            mins[f] = std::min(mins[f], s[f]);
            maxs[f] = std::max(maxs[f], s[f]);
        }
    }
    return from_bounds(std::move(mins), std::move(maxs));
}

Scaler Scaler::from_bounds(std::vector<double> mins, std::vector<double> maxs) {
    if (mins.size() != maxs.size())
        throw std::invalid_argument("scaler bounds size mismatch");
    for (size_t f = 0; f < mins.size(); ++f)
        if (mins[f] > maxs[f]) throw std::invalid_argument("scaler min > max");
    Scaler s;
    s.mins_ = std::move(mins);
    s.maxs_ = std::move(maxs);
    return s;
}

FeatureVector Scaler::transform(const FeatureVector& v) const {
    if (v.size() != mins_.size())
        throw std::invalid_argument("feature dimension mismatch");
    FeatureVector out(v.size());
    for (size_t f = 0; f < v.size(); ++f) {
        const double range = maxs_[f] - mins_[f];
        // Degenerate feature maps to 0; out-of-range values extrapolate unclipped.
        out[f] = range == 0.0 ? 0.0 : (v[f] - mins_[f]) / range;
    }
    return out;
}

bool Scaler::any_degenerate() const {
    for (size_t f = 0; f < mins_.size(); ++f)
        if (is_degenerate(f)) return true;
    return false;
}

DailySunspotRecord extract_features(const GrayImage& img, const CannyParams& canny_params,
                                    const DbscanParams& db_params, CannyStages* stages) {
    solar_disk_mask(img); // a diskless frame is an error here, not zero counts
    const BinaryImage edges = canny(img, canny_params, stages);
    const auto contours = find_contours(edges);

    DailySunspotRecord rec;
    rec.sunspots = count_sunspots(contours);
    rec.regions = count_regions(dbscan(foreground_points(edges), db_params));
    return rec;
}

AssembledDataset assemble_examples(const std::vector<DailySunspotRecord>& records,
                                   const std::vector<KpDay>& kp) {
    std::map<Date, const DailySunspotRecord*> by_date;
    for (const auto& r : records) by_date[r.date] = &r;
    std::map<Date, const KpDay*> kp_by_date;
    for (const auto& k : kp) kp_by_date[k.date] = &k;

    AssembledDataset out;
    for (const auto& [date, rec] : by_date) {
        const auto prev = by_date.find(prev_day(date));
        const auto kp_prev = kp_by_date.find(prev_day(date));
        const auto kp_next = kp_by_date.find(next_day(date));
        if (prev == by_date.end() || kp_prev == kp_by_date.end() ||
            kp_next == kp_by_date.end()) {
            ++out.skipped;
            continue;
        }

        LabeledExample ex;
        ex.date = date;
        ex.features = make_feature_vector(
            prev->second->sunspots, prev->second->regions,
            label_day(*kp_prev->second) == StormClass::storm,
            rec->sunspots, rec->regions);
        ex.label = label_day(*kp_next->second);
        out.examples.push_back(std::move(ex));
    }
    return out;
}

} // namespace stormcast
