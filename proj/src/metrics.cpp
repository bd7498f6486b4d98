#include "stormcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "stormcast/errors.hpp"

namespace stormcast {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("series length mismatch");
    if (x.size() < 2) throw std::invalid_argument("series too short");

    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DataError("zero variance");
    return sxy / std::sqrt(sxx * syy);
}

double mean_signed_difference(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("series length mismatch");
    if (x.empty()) throw std::invalid_argument("empty series");
    double sum = 0.0;
    for (size_t i = 0; i < x.size(); ++i) sum += x[i] - y[i];
    return sum / double(x.size());
}

SilsoCorrelation correlate_with_silso(const std::vector<DailySunspotRecord>& records,
                                      const std::vector<SilsoRecord>& silso) {
    std::map<Date, double> published;
    for (const auto& s : silso)
        if (!s.missing) published[s.date] = s.sesc_number;

    std::vector<double> ours, theirs;
    for (const auto& r : records) {
        auto it = published.find(r.date);
        if (it == published.end()) continue;
        ours.push_back(wolf_proxy(r));
        theirs.push_back(it->second);
    }
    if (ours.size() < 2) throw DataError("fewer than 2 matched dates");

    SilsoCorrelation out;
    out.pcc = pearson(ours, theirs);
    out.mean_diff = mean_signed_difference(ours, theirs);
    out.n_matched = static_cast<long>(ours.size());
    return out;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const StormClass> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("series length mismatch");
    long n_pos = 0, n_neg = 0;
    for (auto l : labels) (l == StormClass::storm ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw DataError("ROC needs both classes present");

    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return scores[a] > scores[b];
    });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    long tp = 0, fp = 0;
    size_t i = 0;
    while (i < order.size()) {
        // all samples tying on one score move together (one step)
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] == StormClass::storm ? tp : fp)++;
            ++i;
        }
        curve.points.push_back({double(fp) / double(n_neg), double(tp) / double(n_pos)});
    }

    double auc = 0.0;
    for (size_t p = 1; p < curve.points.size(); ++p) {
        const auto& a = curve.points[p - 1];
        const auto& b = curve.points[p];
        auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

EvaluationReport classification_metrics(std::span<const StormClass> predicted,
                                        std::span<const StormClass> truth) {
    if (predicted.size() != truth.size()) throw std::invalid_argument("series length mismatch");

    EvaluationReport rep;
    for (size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] == StormClass::storm;
        const bool p = predicted[i] == StormClass::storm;
        if (t && p) ++rep.confusion.tp;
        else if (!t && p) ++rep.confusion.fp;
        else if (!t && !p) ++rep.confusion.tn;
        else ++rep.confusion.fn;
    }
    const auto& c = rep.confusion;
    rep.n_test = c.total();
    rep.storm.support = c.tp + c.fn;
    rep.no_storm.support = c.tn + c.fp;

    auto ratio = [](long num, long den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return double(num) / double(den);
    };
    rep.storm.precision = ratio(c.tp, c.tp + c.fp);
    rep.storm.recall = ratio(c.tp, c.tp + c.fn);
    rep.no_storm.precision = ratio(c.tn, c.tn + c.fn);
    rep.no_storm.recall = ratio(c.tn, c.tn + c.fp);

    // Support-weighted recall collapses to fraction correct.
    rep.weighted_recall = rep.n_test > 0 ? double(c.tp + c.tn) / double(rep.n_test) : 0.0;
    if (rep.storm.recall && rep.no_storm.recall)
        rep.macro_recall = (*rep.storm.recall + *rep.no_storm.recall) / 2.0;
    return rep;
}

BaselineComparison compare_with_baseline(const std::map<Date, StormClass>& our_predictions,
                                         const std::map<Date, StormClass>& baseline_predictions,
                                         const std::map<Date, StormClass>& truth) {
    BaselineComparison cmp;
    std::vector<StormClass> ours, base, actual;
    for (const auto& [date, t] : truth) {
        const auto o = our_predictions.find(date);
        if (o == our_predictions.end()) continue;
        const auto b = baseline_predictions.find(date);
        if (b == baseline_predictions.end()) {
            cmp.missing_dates.push_back(date);
            continue;
        }
        ours.push_back(o->second);
        base.push_back(b->second);
        actual.push_back(t);
    }
    if (actual.empty()) throw DataError("no overlapping dates with the baseline");

    cmp.ours = classification_metrics(ours, actual);
    cmp.baseline = classification_metrics(base, actual);
    cmp.n_common = static_cast<long>(actual.size());
    return cmp;
}

namespace {

std::string cell(const std::optional<double>& v, int width) {
    char buf[24];
    if (!v) std::snprintf(buf, sizeof buf, "%*s", width, "n/a");
    else std::snprintf(buf, sizeof buf, "%*.2f", width, *v);
    return buf;
}

void render_rows(std::ostringstream& out, const std::string& name,
                 const EvaluationReport& rep) {
    char acc[24];
    std::snprintf(acc, sizeof acc, "%8.2f", rep.weighted_recall);
    out << "| " << name << " | no_storm | " << cell(rep.no_storm.precision, 9) << " | "
        << cell(rep.no_storm.recall, 6) << " | " << acc << " |\n";
    out << "| " << std::string(name.size(), ' ') << " | storm    | "
        << cell(rep.storm.precision, 9) << " | " << cell(rep.storm.recall, 6) << " | "
        << "        |\n";
}

} // namespace

std::string render_metrics_table(const EvaluationReport& ours, const EvaluationReport* baseline) {
    std::ostringstream out;
    out << "| Prediction Method | Class    | Precision | Recall | Accuracy |\n";
    out << "|-------------------|----------|-----------|--------|----------|\n";
    render_rows(out, "G-SVM            ", ours);
    if (baseline) render_rows(out, "SWPC             ", *baseline);
    return std::move(out).str();
}

} // namespace stormcast
