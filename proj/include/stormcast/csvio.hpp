#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stormcast/features.hpp"

namespace stormcast {

// Feature store: the cache boundary between image processing and modeling.
// Header: date,sunspots,regions — one row per day, ISO dates, sorted.
void write_feature_csv(const std::filesystem::path& path,
                       const std::vector<DailySunspotRecord>& records);
std::vector<DailySunspotRecord> read_feature_csv(const std::filesystem::path& path);

// Assembled dataset:
// date,prev_sunspots,prev_regions,prev_storm,cur_sunspots,cur_regions,label
void write_dataset_csv(const std::filesystem::path& path,
                       const std::vector<LabeledExample>& examples);
std::vector<LabeledExample> read_dataset_csv(const std::filesystem::path& path);

// ROC points: fpr,tpr rows for external plotting.
struct RocCurve;

// Whole-file atomic write (temp then rename).
void atomic_write_text(const std::filesystem::path& path, const std::string& text);

} // namespace stormcast
