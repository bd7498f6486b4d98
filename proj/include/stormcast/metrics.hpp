#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stormcast/date.hpp"
#include "stormcast/features.hpp"
#include "stormcast/ingest.hpp"

namespace stormcast {

// storm is the positive class throughout.
struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points; // threshold descending, (0,0) .. (1,1)
    double auc = 0.0;
};

// Precision/recall for one class; zero-denominator cells stay unset,
// which is reported distinctly from 0.
struct ClassMetrics {
    std::optional<double> precision;
    std::optional<double> recall;
    long support = 0;
};

struct EvaluationReport {
    ConfusionCounts confusion;
    ClassMetrics storm;
    ClassMetrics no_storm;
    // Support-weighted mean of per-class recall; equals fraction correct.
    double weighted_recall = 0.0;
    // Unweighted mean of per-class recall (balanced accuracy).
    std::optional<double> macro_recall;
    RocCurve roc; // filled when decision values are available
    long n_test = 0;
};

// Direct evaluation of the sample correlation coefficient.
// Throws DataError("zero variance") for a constant series.
double pearson(std::span<const double> x, std::span<const double> y);

// Mean of (x_i - y_i).
double mean_signed_difference(std::span<const double> x, std::span<const double> y);

struct SilsoCorrelation {
    double pcc = 0.0;
    double mean_diff = 0.0;
    long n_matched = 0;
};

// Aligns 10R + S against the published daily numbers by date (missing-sentinel
// records excluded) and correlates over the intersection.
SilsoCorrelation correlate_with_silso(const std::vector<DailySunspotRecord>& records,
                                      const std::vector<SilsoRecord>& silso);

// Thresholds swept over distinct scores descending; equal scores collapse to
// one step; area by trapezoid rule. Requires both classes.
RocCurve roc_curve(std::span<const double> scores, std::span<const StormClass> labels);

EvaluationReport classification_metrics(std::span<const StormClass> predicted,
                                        std::span<const StormClass> truth);

struct BaselineComparison {
    EvaluationReport ours;
    EvaluationReport baseline;
    std::vector<Date> missing_dates; // test dates the baseline did not cover
    long n_common = 0;
};

// Side-by-side metrics over the identical date set; dates the baseline misses
// are listed and excluded pairwise.
BaselineComparison compare_with_baseline(const std::map<Date, StormClass>& our_predictions,
                                         const std::map<Date, StormClass>& baseline_predictions,
                                         const std::map<Date, StormClass>& truth);

// Table-shaped text rendering of one or two evaluation reports.
std::string render_metrics_table(const EvaluationReport& ours,
                                 const EvaluationReport* baseline = nullptr);

} // namespace stormcast
