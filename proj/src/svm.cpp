#include "stormcast/svm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "stormcast/errors.hpp"
#include "stormcast/metrics.hpp"
#include "stormcast/rng.hpp"

namespace stormcast {

void SvmConfig::validate() const {
    if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (max_passes < 1) throw std::invalid_argument("max_passes must be >= 1");
}

double rbf_kernel(const FeatureVector& a, const FeatureVector& b, double gamma) {
    double d2 = 0.0;
    for (size_t f = 0; f < a.size(); ++f) {
        const double diff = a[f] - b[f];
        d2 += diff * diff;
    }
    return std::exp(-gamma * d2);
}

double auto_rbf_gamma(const std::vector<FeatureVector>& samples) {
    const size_t n = samples.size();
    const size_t dim = samples[0].size();
    double total_var = 0.0;
    for (size_t f = 0; f < dim; ++f) {
        double mean = 0.0;
        for (const auto& s : samples) mean += s[f];
        mean /= double(n);
        double var = 0.0;
        for (const auto& s : samples) var += (s[f] - mean) * (s[f] - mean);
        total_var += var / double(n);
    }
    const double mean_var = total_var / double(dim);
    return mean_var > 0.0 ? 1.0 / (double(dim) * mean_var) : 1.0;
}

namespace {

struct Solver {
    const std::vector<FeatureVector>& x;
    const std::vector<int>& y;
    double c;
    double tol;
    int max_sweeps;

    size_t n;
    std::vector<double> kernel; // n x n, precomputed
    std::vector<double> alpha;
    std::vector<double> f; // f_i = sum_j alpha_j y_j K_ij (bias excluded)

    SvmTelemetry telemetry;
    double bias = 0.0;

    double k_at(size_t i, size_t j) const { return kernel[i * n + j]; }

    double objective() const {
        double obj = 0.0;
        for (size_t i = 0; i < n; ++i) obj += alpha[i] - 0.5 * alpha[i] * y[i] * f[i];
        return obj;
    }

    // r_i is the bias that would put sample i exactly on its margin.
    double r_of(size_t i) const { return double(y[i]) - f[i]; }

    bool lower_constrains(size_t i, double bound_eps) const {
        // b >= r_i: alpha at 0 with y=+1, at C with y=-1, or on the margin
        const bool at0 = alpha[i] <= bound_eps;
        const bool atC = alpha[i] >= c - bound_eps;
        return (at0 && y[i] > 0) || (atC && y[i] < 0) || (!at0 && !atC);
    }
    bool upper_constrains(size_t i, double bound_eps) const {
        const bool at0 = alpha[i] <= bound_eps;
        const bool atC = alpha[i] >= c - bound_eps;
        return (at0 && y[i] < 0) || (atC && y[i] > 0) || (!at0 && !atC);
    }

    // One analytic update of the (i, j) pair. Returns false when the pair
    // cannot move (degenerate kernel rows at their bounds).
    bool take_step(size_t i, size_t j) {
        if (i == j) return false;
        const double a1 = alpha[i];
        const double a2 = alpha[j];
        const int y1 = y[i];
        const int y2 = y[j];
        const double e1 = f[i] - double(y1);
        const double e2 = f[j] - double(y2);
        const double s = double(y1) * double(y2);

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c, c + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c);
            hi = std::min(c, a1 + a2);
        }
        if (lo >= hi) return false;

        const double k11 = k_at(i, i);
        const double k12 = k_at(i, j);
        const double k22 = k_at(j, j);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = a2 + double(y2) * (e1 - e2) / eta;
            a2_new = std::clamp(a2_new, lo, hi);
        } else {
            // Objective is linear along the pair direction; move to the better end.
            const double f1 = double(y1) * e1 - a1 * k11 - s * a2 * k12;
            const double f2 = double(y2) * e2 - s * a1 * k12 - a2 * k22;
            const double l1 = a1 + s * (a2 - lo);
            const double h1 = a1 + s * (a2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                  0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                  0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (obj_lo < obj_hi - 1e-12)
                a2_new = lo;
            else if (obj_hi < obj_lo - 1e-12)
                a2_new = hi;
            else
                return false;
        }

        if (std::abs(a2_new - a2) < 1e-14 * (a2_new + a2 + 1e-14)) return false;
        const double a1_new = a1 + s * (a2 - a2_new);

        alpha[i] = a1_new;
        alpha[j] = a2_new;
        const double d1 = double(y1) * (a1_new - a1);
        const double d2 = double(y2) * (a2_new - a2);
        for (size_t k = 0; k < n; ++k) f[k] += d1 * k_at(i, k) + d2 * k_at(j, k);
        ++telemetry.pair_updates;
        return true;
    }

    void solve() {
        alpha.assign(n, 0.0);
        f.assign(n, 0.0);

        const double bound_eps = 1e-12 * c;
        bool converged = false;

        for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
            bool progressed = false;
            for (size_t step = 0; step < n; ++step) {
                // Maximal violating pair: the largest gap between the bias
                // lower and upper bounds demanded by the KKT conditions.
                double b_low = -std::numeric_limits<double>::infinity();
                double b_up = std::numeric_limits<double>::infinity();
                size_t i_low = 0, i_up = 0;
                for (size_t i = 0; i < n; ++i) {
                    const double r = r_of(i);
                    if (lower_constrains(i, bound_eps) && r > b_low) {
                        b_low = r;
                        i_low = i;
                    }
                    if (upper_constrains(i, bound_eps) && r < b_up) {
                        b_up = r;
                        i_up = i;
                    }
                }
                if (b_low - b_up <= tol) {
                    converged = true;
                    break;
                }
                if (!take_step(i_low, i_up)) {
                    // The most violating pair is immovable; no other pair can
                    // restore feasibility either, so stop rather than spin.
                    converged = false;
                    telemetry.converged = false;
                    finish(bound_eps);
                    telemetry.objective_per_sweep.push_back(objective());
                    return;
                }
                progressed = true;
            }
            telemetry.objective_per_sweep.push_back(objective());
            if (!progressed && !converged) break;
        }

        telemetry.converged = converged;
        finish(bound_eps);
        if (telemetry.objective_per_sweep.empty())
            telemetry.objective_per_sweep.push_back(objective());
    }

    void finish(double bound_eps) {
        // Bias from on-margin support vectors; midpoint of the feasible
        // interval when none are on the margin.
        double sum_r = 0.0;
        size_t margin = 0;
        for (size_t i = 0; i < n; ++i) {
            if (alpha[i] > bound_eps && alpha[i] < c - bound_eps) {
                sum_r += r_of(i);
                ++margin;
            }
        }
        if (margin > 0) {
            bias = sum_r / double(margin);
            return;
        }
        double b_low = -std::numeric_limits<double>::infinity();
        double b_up = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < n; ++i) {
            const double r = r_of(i);
            if (lower_constrains(i, bound_eps)) b_low = std::max(b_low, r);
            if (upper_constrains(i, bound_eps)) b_up = std::min(b_up, r);
        }
        if (std::isfinite(b_low) && std::isfinite(b_up)) bias = 0.5 * (b_low + b_up);
        else if (std::isfinite(b_low)) bias = b_low;
        else if (std::isfinite(b_up)) bias = b_up;
        else bias = 0.0;
    }
};

} // namespace

SvmModel train_gsvm(const std::vector<FeatureVector>& samples, const std::vector<int>& labels,
                    const SvmConfig& cfg, SvmTelemetry* telemetry) {
    cfg.validate();
    if (samples.size() != labels.size())
        throw std::invalid_argument("samples/labels size mismatch");
    if (samples.empty()) throw DataError("empty training set");

    bool has_pos = false, has_neg = false;
    for (int l : labels) {
        if (l == 1) has_pos = true;
        else if (l == -1) has_neg = true;
        else throw std::invalid_argument("labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw DataError("training set contains a single class");

    const size_t dim = samples[0].size();
    for (const auto& s : samples)
        if (s.size() != dim) throw std::invalid_argument("inconsistent feature dimensions");

    const double gamma = cfg.gamma > 0.0 ? cfg.gamma : auto_rbf_gamma(samples);

    Solver solver{samples, labels, cfg.c, cfg.tolerance, cfg.max_passes,
                  samples.size(), {}, {}, {}, {}, 0.0};
    solver.kernel.resize(solver.n * solver.n);
    for (size_t i = 0; i < solver.n; ++i)
        for (size_t j = 0; j <= i; ++j) {
            const double k = rbf_kernel(samples[i], samples[j], gamma);
            solver.kernel[i * solver.n + j] = k;
            solver.kernel[j * solver.n + i] = k;
        }
    solver.solve();

    SvmModel model;
    model.gamma = gamma;
    model.bias = solver.bias;
    for (size_t i = 0; i < solver.n; ++i) {
        if (solver.alpha[i] > 0.0) {
            model.support_vectors.push_back(samples[i]);
            model.dual_coefs.push_back(solver.alpha[i] * labels[i]);
        }
    }
    model.meta.c = cfg.c;
    model.meta.gamma = gamma;
    model.meta.tolerance = cfg.tolerance;
    model.meta.max_passes = cfg.max_passes;
    model.meta.converged = solver.telemetry.converged;

    if (telemetry) {
        solver.telemetry.alphas = solver.alpha;
        *telemetry = std::move(solver.telemetry);
    }
    return model;
}

GridSearchResult grid_search_gsvm(const std::vector<FeatureVector>& samples,
                                  const std::vector<int>& labels, const SvmConfig& base,
                                  uint64_t seed, double val_fraction) {
    if (samples.size() != labels.size())
        throw std::invalid_argument("samples/labels size mismatch");
    if (!(val_fraction > 0.0) || !(val_fraction < 1.0))
        throw std::invalid_argument("val_fraction must be in (0, 1)");

    // stratified validation fold, seeded shuffle within each class
    std::vector<size_t> by_class[2];
    for (size_t i = 0; i < labels.size(); ++i) by_class[labels[i] == 1 ? 1 : 0].push_back(i);
    if (by_class[0].size() < 2 || by_class[1].size() < 2)
        throw DataError("grid search needs at least 2 samples per class");

    std::vector<uint8_t> in_val(samples.size(), 0);
    Rng rng(seed);
    for (auto& members : by_class) {
        size_t want = static_cast<size_t>(std::llround(val_fraction * double(members.size())));
        want = std::clamp<size_t>(want, 1, members.size() - 1);
        rng.shuffle(members);
        for (size_t i = 0; i < want; ++i) in_val[members[i]] = 1;
    }

    std::vector<FeatureVector> fit_x, val_x;
    std::vector<int> fit_y;
    std::vector<StormClass> val_y;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (in_val[i]) {
            val_x.push_back(samples[i]);
            val_y.push_back(labels[i] == 1 ? StormClass::storm : StormClass::no_storm);
        } else {
            fit_x.push_back(samples[i]);
            fit_y.push_back(labels[i]);
        }
    }

    const double gamma_auto = auto_rbf_gamma(fit_x);
    GridSearchResult result;
    for (double c : {0.1, 1.0, 10.0}) {
        for (double mult : {0.01, 0.1, 1.0}) {
            SvmConfig cfg = base;
            cfg.c = c;
            cfg.gamma = mult * gamma_auto;
            const SvmModel m = train_gsvm(fit_x, fit_y, cfg);

            std::vector<double> scores;
            scores.reserve(val_x.size());
            for (const auto& v : val_x) scores.push_back(decision_value(m, v));
            const double auc = roc_curve(scores, val_y).auc;

            result.grid.push_back({c, cfg.gamma, auc});
            if (result.grid.size() == 1 || auc > result.best_auc) {
                result.best_auc = auc;
                result.best_c = c;
                result.best_gamma = cfg.gamma;
            }
        }
    }
    return result;
}

SvmModel train_gsvm(const std::vector<LabeledExample>& train, const SvmConfig& cfg,
                    SvmTelemetry* telemetry) {
    std::vector<FeatureVector> x;
    std::vector<int> y;
    x.reserve(train.size());
    y.reserve(train.size());
    for (const auto& ex : train) {
        x.push_back(ex.features);
        y.push_back(ex.label == StormClass::storm ? 1 : -1);
    }
    return train_gsvm(x, y, cfg, telemetry);
}

double decision_value(const SvmModel& m, const FeatureVector& v) {
    double sum = m.bias;
    for (size_t i = 0; i < m.support_vectors.size(); ++i) {
        if (m.support_vectors[i].size() != v.size())
            throw std::invalid_argument("feature dimension mismatch");
        sum += m.dual_coefs[i] * rbf_kernel(m.support_vectors[i], v, m.gamma);
    }
    return sum;
}

StormClass predict(const SvmModel& m, const FeatureVector& raw) {
    const FeatureVector scaled = m.scaler.dimension() > 0 ? m.scaler.transform(raw) : raw;
    return decision_value(m, scaled) >= 0.0 ? StormClass::storm : StormClass::no_storm;
}

// ---- persistence ----

namespace {

std::string fmt(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double_or_throw(const std::string& s, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError(std::string("bad model field: ") + what);
    return v;
}

} // namespace

std::string serialize_model(const SvmModel& m) {
    std::ostringstream out;
    out << "stormcast-gsvm v1\n";
    out << "gamma " << fmt(m.gamma) << "\n";
    out << "bias " << fmt(m.bias) << "\n";
    out << "c " << fmt(m.meta.c) << "\n";
    out << "tolerance " << fmt(m.meta.tolerance) << "\n";
    out << "max_passes " << m.meta.max_passes << "\n";
    out << "converged " << (m.meta.converged ? 1 : 0) << "\n";
    out << "seed " << m.meta.seed << "\n";
    out << "dataset_fingerprint " << (m.meta.dataset_fingerprint.empty()
                                          ? "-"
                                          : m.meta.dataset_fingerprint) << "\n";
    const size_t dim = m.scaler.dimension() > 0
                           ? m.scaler.dimension()
                           : (m.support_vectors.empty() ? 0 : m.support_vectors[0].size());
    out << "dim " << dim << "\n";
    out << "scaler_min";
    for (size_t f = 0; f < m.scaler.dimension(); ++f) out << " " << fmt(m.scaler.min_of(f));
    out << "\nscaler_max";
    for (size_t f = 0; f < m.scaler.dimension(); ++f) out << " " << fmt(m.scaler.max_of(f));
    out << "\nn_support " << m.support_vectors.size() << "\n";
    for (size_t i = 0; i < m.support_vectors.size(); ++i) {
        out << fmt(m.dual_coefs[i]);
        for (double v : m.support_vectors[i]) out << "," << fmt(v);
        out << "\n";
    }
    return std::move(out).str();
}

SvmModel deserialize_model(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "stormcast-gsvm v1")
        throw DataError("unrecognized model format");

    SvmModel m;
    size_t dim = 0, n_support = 0;
    std::vector<double> mins, maxs;

    auto next_kv = [&](const char* key) -> std::string {
        if (!std::getline(in, line)) throw DataError("truncated model file");
        std::istringstream ls(line);
        std::string k;
        ls >> k;
        if (k != key) throw DataError(std::string("expected model field ") + key);
        std::string rest;
        std::getline(ls, rest);
        while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
        return rest;
    };

    m.gamma = parse_double_or_throw(next_kv("gamma"), "gamma");
    m.bias = parse_double_or_throw(next_kv("bias"), "bias");
    m.meta.gamma = m.gamma;
    m.meta.c = parse_double_or_throw(next_kv("c"), "c");
    m.meta.tolerance = parse_double_or_throw(next_kv("tolerance"), "tolerance");
    m.meta.max_passes = static_cast<int>(parse_double_or_throw(next_kv("max_passes"), "max_passes"));
    m.meta.converged = next_kv("converged") == "1";
    try {
        m.meta.seed = static_cast<uint64_t>(std::stoull(next_kv("seed")));
    } catch (const std::exception&) {
        throw DataError("bad model field: seed");
    }
    const std::string fp = next_kv("dataset_fingerprint");
    m.meta.dataset_fingerprint = fp == "-" ? "" : fp;
    dim = static_cast<size_t>(parse_double_or_throw(next_kv("dim"), "dim"));

    auto parse_row = [&](const std::string& rest, std::vector<double>& out, const char* what) {
        std::istringstream rs(rest);
        std::string tok;
        while (rs >> tok) out.push_back(parse_double_or_throw(tok, what));
    };
    parse_row(next_kv("scaler_min"), mins, "scaler_min");
    parse_row(next_kv("scaler_max"), maxs, "scaler_max");
    if (!mins.empty() || !maxs.empty()) {
        if (mins.size() != dim || maxs.size() != dim)
            throw DataError("scaler bounds do not match dim");
        m.scaler = Scaler::from_bounds(std::move(mins), std::move(maxs));
    }

    n_support = static_cast<size_t>(parse_double_or_throw(next_kv("n_support"), "n_support"));
    for (size_t i = 0; i < n_support; ++i) {
        if (!std::getline(in, line)) throw DataError("truncated support vectors");
        std::vector<double> vals;
        std::string tok;
        std::istringstream ls(line);
        while (std::getline(ls, tok, ',')) vals.push_back(parse_double_or_throw(tok, "support vector"));
        if (vals.size() != dim + 1) throw DataError("support vector row has wrong arity");
        m.dual_coefs.push_back(vals[0]);
        m.support_vectors.emplace_back(vals.begin() + 1, vals.end());
    }
    return m;
}

void save_model(const std::filesystem::path& path, const SvmModel& m) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write model: " + path.string());
        out << serialize_model(m);
        if (!out) throw DataError("short write: " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

SvmModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read model: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_model(std::move(ss).str());
}

} // namespace stormcast
