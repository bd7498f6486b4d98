#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <map>
#include <thread>

#include "stormcast/canny.hpp"
#include "stormcast/config.hpp"
#include "stormcast/contours.hpp"
#include "stormcast/csvio.hpp"
#include "stormcast/errors.hpp"
#include "stormcast/features.hpp"
#include "stormcast/fingerprint.hpp"
#include "stormcast/image_io.hpp"
#include "stormcast/ingest.hpp"
#include "stormcast/metrics.hpp"
#include "stormcast/sampling.hpp"
#include "stormcast/svm.hpp"

using namespace stormcast;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct GlobalArgs {
    std::string config_path;
    std::vector<std::string> overrides; // section.key=value
    bool offline = false;
    bool offline_set = false;
    uint64_t seed = 0;
    bool seed_set = false;

    RunConfig resolve() const {
        RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            const auto dot = kv.find('.');
            if (eq == std::string::npos || dot == std::string::npos || dot > eq)
                throw std::invalid_argument("--set expects section.key=value, got '" + kv + "'");
            cfg.apply_line(kv.substr(0, dot), kv.substr(dot + 1, eq - dot - 1),
                           kv.substr(eq + 1));
        }
        if (offline_set) cfg.offline = offline;
        if (seed_set) cfg.seed = seed;
        cfg.validate();
        return cfg;
    }
};

void add_global_flags(CLI::App* cmd, GlobalArgs& g) {
    cmd->add_option("--config", g.config_path, "Run configuration file");
    cmd->add_option("--set", g.overrides,
                    "Override one config entry, section.key=value (repeatable)");
    cmd->add_flag_callback(
        "--offline", [&g] { g.offline = true; g.offline_set = true; },
        "Never touch the network");
    cmd->add_option_function<uint64_t>(
        "--seed", [&g](uint64_t v) { g.seed = v; g.seed_set = true; }, "Global seed");
}

json config_provenance(const RunConfig& cfg) {
    return json{{"config", cfg.serialize()}};
}

std::string fingerprint_hex(const fs::path& p) { return to_hex(fingerprint_file(p)); }

// ---- extract ----

struct ExtractJob {
    Date date;
    fs::path image;
};

DailySunspotRecord extract_one(const ExtractJob& job, const RunConfig& cfg,
                               const fs::path& debug_dir) {
    const GrayImage img = load_image(job.image);
    CannyStages stages;
    DailySunspotRecord rec =
        extract_features(img, cfg.canny, cfg.dbscan, debug_dir.empty() ? nullptr : &stages);
    rec.date = job.date;

    if (!debug_dir.empty()) {
        const fs::path dir = debug_dir / format_date(job.date);
        fs::create_directories(dir);
        write_png(dir / "smoothed.png", stages.smoothed);
        write_png_normalized(dir / "magnitude.png", stages.magnitude);
        write_png_normalized(dir / "suppressed.png", stages.suppressed);
        write_png(dir / "edges.png", stages.edges_unmasked);

        const BinaryImage masked = canny(img, cfg.canny);
        write_png(dir / "edges_masked.png", masked);
        const auto pts = foreground_points(masked);
        const auto labeling = dbscan(pts, cfg.dbscan);
        std::string csv = "x,y,label\n";
        for (size_t i = 0; i < pts.size(); ++i)
            csv += std::to_string(int(pts[i].x)) + "," + std::to_string(int(pts[i].y)) + "," +
                   std::to_string(labeling.labels[i]) + "\n";
        atomic_write_text(dir / "clusters.csv", csv);
    }
    return rec;
}

int cmd_extract(const GlobalArgs& g, const std::string& images_dir,
                const std::string& out_override, const std::string& debug_dir, int jobs) {
    const RunConfig cfg = g.resolve();
    const fs::path out = out_override.empty() ? cfg.features_csv : fs::path(out_override);
    const fs::path images = images_dir.empty() ? cfg.cache_dir / "images" : fs::path(images_dir);

    const ImageManifest manifest = build_manifest(images);
    for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
    if (manifest.entries.empty()) throw DataError("no images found under " + images.string());

    std::map<Date, DailySunspotRecord> done;
    if (fs::exists(out))
        for (const auto& r : read_feature_csv(out)) done.emplace(r.date, r);

    std::vector<ExtractJob> todo;
    for (const auto& [date, path] : manifest.entries)
        if (!done.count(date)) todo.push_back({date, path});

    std::printf("extract: %zu image(s), %zu cached row(s), %zu to process\n",
                manifest.entries.size(), done.size(), todo.size());

    const int workers =
        std::max(1, std::min<int>(jobs > 0 ? jobs : int(std::thread::hardware_concurrency()),
                                  int(todo.size())));
    std::vector<DailySunspotRecord> fresh(todo.size());
    std::vector<std::string> failures(todo.size());
    std::atomic<size_t> next{0};
    auto run = [&] {
        for (size_t i = next.fetch_add(1); i < todo.size(); i = next.fetch_add(1)) {
            try {
                fresh[i] = extract_one(todo[i], cfg, debug_dir);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }

    int failed = 0;
    for (size_t i = 0; i < todo.size(); ++i) {
        if (!failures[i].empty()) {
            std::cerr << "warning: " << format_date(todo[i].date) << ": " << failures[i] << "\n";
            ++failed;
            continue;
        }
        done.emplace(fresh[i].date, fresh[i]);
    }

    std::vector<DailySunspotRecord> rows;
    rows.reserve(done.size());
    for (const auto& [date, rec] : done) rows.push_back(rec);
    write_feature_csv(out, rows);
    std::printf("extract: wrote %zu row(s) to %s (%d failure(s))\n", rows.size(),
                out.string().c_str(), failed);
    return failed == int(todo.size()) && !todo.empty() ? kExitData : kExitOk;
}

// ---- dataset ----

int cmd_dataset(const GlobalArgs& g, const std::string& features_override,
                const std::string& kp_path, const std::string& out_override) {
    const RunConfig cfg = g.resolve();
    const fs::path features =
        features_override.empty() ? cfg.features_csv : fs::path(features_override);
    const fs::path out = out_override.empty() ? cfg.dataset_csv : fs::path(out_override);

    const auto records = read_feature_csv(features);
    const auto kp = parse_kp_file(kp_path);
    for (const auto& issue : kp.issues)
        std::cerr << "warning: " << kp_path << ":" << issue.line << ": " << issue.reason << "\n";

    const auto ds = assemble_examples(records, kp.records);
    write_dataset_csv(out, ds.examples);

    size_t storms = 0;
    for (const auto& ex : ds.examples)
        if (ex.label == StormClass::storm) ++storms;
    std::printf("dataset: %zu example(s) (%zu storm, %zu no-storm), %d skipped date(s)\n",
                ds.examples.size(), storms, ds.examples.size() - storms, ds.skipped);
    return kExitOk;
}

// ---- train ----

struct PreparedTraining {
    std::vector<FeatureVector> scaled;
    std::vector<int> labels;
    Scaler scaler;
    size_t n_minority_before = 0;
    size_t n_majority_before = 0;
    size_t n_synthetic = 0;
    StormClass minority_class = StormClass::storm;
};

PreparedTraining prepare_training(const std::vector<LabeledExample>& train,
                                  const std::vector<LabeledExample>& all,
                                  const RunConfig& cfg) {
    PreparedTraining prep;
    std::vector<FeatureVector> storm_x, quiet_x;
    for (const auto& ex : train)
        (ex.label == StormClass::storm ? storm_x : quiet_x).push_back(ex.features);

    const bool storm_minority = storm_x.size() <= quiet_x.size();
    const auto& minority = storm_minority ? storm_x : quiet_x;
    const auto& majority = storm_minority ? quiet_x : storm_x;
    prep.minority_class = storm_minority ? StormClass::storm : StormClass::no_storm;
    prep.n_minority_before = minority.size();
    prep.n_majority_before = majority.size();

    SmoteConfig smote_cfg = cfg.smote;
    smote_cfg.seed = cfg.stage_seed("smote");
    const auto synth = smote(minority, majority.size(), smote_cfg);
    prep.n_synthetic = synth.synthetic.size();

    // default scope fits the scaler on the authentic training rows only;
    // run.scaler_scope = all reproduces the global min/max variant
    std::vector<FeatureVector> fit_rows;
    for (const auto& ex : cfg.scaler_global ? all : train) fit_rows.push_back(ex.features);
    prep.scaler = fit_scaler(fit_rows);

    const int minority_y = prep.minority_class == StormClass::storm ? 1 : -1;
    for (const auto& ex : train) {
        prep.scaled.push_back(prep.scaler.transform(ex.features));
        prep.labels.push_back(ex.label == StormClass::storm ? 1 : -1);
    }
    for (const auto& v : synth.synthetic) {
        prep.scaled.push_back(prep.scaler.transform(v));
        prep.labels.push_back(minority_y);
    }
    return prep;
}

int cmd_train(const GlobalArgs& g, const std::string& dataset_override,
              const std::string& model_override) {
    const RunConfig cfg = g.resolve();
    const fs::path dataset_path =
        dataset_override.empty() ? cfg.dataset_csv : fs::path(dataset_override);
    const fs::path model_path = model_override.empty() ? cfg.model_file : fs::path(model_override);

    const auto examples = read_dataset_csv(dataset_path);
    SplitConfig split_cfg = cfg.split;
    split_cfg.seed = cfg.stage_seed("split");
    const auto split = stratified_split(examples, split_cfg);

    const auto prep = prepare_training(split.train, examples, cfg);
    std::printf("train: %zu authentic (%zu %s minority + %zu majority), +%zu synthetic\n",
                split.train.size(), prep.n_minority_before, to_string(prep.minority_class),
                prep.n_majority_before, prep.n_synthetic);
    std::printf("train: class balance before SMOTE %.1f%% minority, after %.1f%%\n",
                100.0 * double(prep.n_minority_before) / double(split.train.size()),
                100.0 * double(prep.n_minority_before + prep.n_synthetic) /
                    double(prep.scaled.size()));

    SvmConfig svm_cfg = cfg.svm;
    json grid_json;
    if (cfg.grid_search) {
        // tune on the authentic training rows (they come first in prep.scaled)
        const std::vector<FeatureVector> authentic(prep.scaled.begin(),
                                                   prep.scaled.begin() +
                                                       ptrdiff_t(split.train.size()));
        const std::vector<int> authentic_y(prep.labels.begin(),
                                           prep.labels.begin() +
                                               ptrdiff_t(split.train.size()));
        const auto gs = grid_search_gsvm(authentic, authentic_y, svm_cfg,
                                         cfg.stage_seed("grid"));
        svm_cfg.c = gs.best_c;
        svm_cfg.gamma = gs.best_gamma;
        std::printf("train: grid search picked C=%g gamma=%g (val AUC %.3f)\n", gs.best_c,
                    gs.best_gamma, gs.best_auc);
        for (const auto& p : gs.grid)
            grid_json.push_back({{"c", p.c}, {"gamma", p.gamma}, {"val_auc", p.val_auc}});
    }

    SvmTelemetry telemetry;
    SvmModel model = train_gsvm(prep.scaled, prep.labels, svm_cfg, &telemetry);
    model.scaler = prep.scaler;
    model.meta.seed = cfg.seed;
    model.meta.dataset_fingerprint = fingerprint_hex(dataset_path);
    save_model(model_path, model);

    json report = config_provenance(cfg);
    report["inputs"] = {{"dataset", model.meta.dataset_fingerprint}};
    report["train"] = {
        {"n_train_authentic", split.train.size()},
        {"n_test_held_out", split.test.size()},
        {"n_synthetic", prep.n_synthetic},
        {"minority_class", to_string(prep.minority_class)},
        {"support_vectors", model.support_vectors.size()},
        {"gamma", model.gamma},
        {"bias", model.bias},
        {"converged", model.meta.converged},
        {"pair_updates", telemetry.pair_updates},
        {"dual_objective_first", telemetry.objective_per_sweep.front()},
        {"dual_objective_final", telemetry.objective_per_sweep.back()},
    };
    if (!grid_json.is_null()) report["grid_search"] = grid_json;
    fs::create_directories(cfg.reports_dir);
    atomic_write_text(cfg.reports_dir / "train_report.json", report.dump(2) + "\n");

    std::printf("train: %zu support vector(s), converged=%s -> %s\n",
                model.support_vectors.size(), model.meta.converged ? "true" : "false",
                model_path.string().c_str());
    if (!model.meta.converged)
        std::cerr << "warning: optimizer hit max_passes before meeting tolerance\n";
    return kExitOk;
}

// ---- evaluate ----

int cmd_evaluate(const GlobalArgs& g, const std::string& model_override,
                 const std::string& dataset_override, const std::string& swpc_path) {
    const RunConfig cfg = g.resolve();
    const fs::path dataset_path =
        dataset_override.empty() ? cfg.dataset_csv : fs::path(dataset_override);
    const fs::path model_path = model_override.empty() ? cfg.model_file : fs::path(model_override);

    const auto examples = read_dataset_csv(dataset_path);
    const SvmModel model = load_model(model_path);
    const std::string dataset_fp = fingerprint_hex(dataset_path);
    if (!model.meta.dataset_fingerprint.empty() &&
        model.meta.dataset_fingerprint != dataset_fp)
        std::cerr << "warning: dataset fingerprint differs from the one trained on; "
                     "the held-out split may not match\n";

    SplitConfig split_cfg = cfg.split;
    split_cfg.seed = cfg.stage_seed("split");
    const auto split = stratified_split(examples, split_cfg);

    std::vector<double> scores;
    std::vector<StormClass> preds, truth;
    std::map<Date, StormClass> preds_by_date, truth_by_date;
    for (const auto& ex : split.test) {
        const double score = decision_value(model, model.scaler.transform(ex.features));
        scores.push_back(score);
        const StormClass p = score >= 0.0 ? StormClass::storm : StormClass::no_storm;
        preds.push_back(p);
        truth.push_back(ex.label);
        preds_by_date[ex.date] = p;
        truth_by_date[ex.date] = ex.label;
    }

    EvaluationReport rep = classification_metrics(preds, truth);
    rep.roc = roc_curve(scores, truth);

    json out = config_provenance(cfg);
    out["inputs"] = {{"dataset", dataset_fp}, {"model", fingerprint_hex(model_path)}};
    auto cls = [](const ClassMetrics& c) {
        json j{{"support", c.support}};
        j["precision"] = c.precision ? json(*c.precision) : json(nullptr);
        j["recall"] = c.recall ? json(*c.recall) : json(nullptr);
        return j;
    };
    out["metrics"] = {
        {"auc", rep.roc.auc},
        {"weighted_recall_micro", rep.weighted_recall},
        {"balanced_recall_macro", rep.macro_recall ? json(*rep.macro_recall) : json(nullptr)},
        {"storm", cls(rep.storm)},
        {"no_storm", cls(rep.no_storm)},
        {"confusion", {{"tp", rep.confusion.tp}, {"fp", rep.confusion.fp},
                       {"tn", rep.confusion.tn}, {"fn", rep.confusion.fn}}},
        {"n_test", rep.n_test},
    };

    std::string text;
    text += "Test examples: " + std::to_string(rep.n_test) + " (" +
            std::to_string(rep.storm.support) + " storm, " +
            std::to_string(rep.no_storm.support) + " no-storm)\n";
    text += "AUC (headline accuracy): " + std::to_string(rep.roc.auc) + "\n";
    text += "Fraction correct (support-weighted recall): " +
            std::to_string(rep.weighted_recall) + "\n\n";

    const EvaluationReport* baseline_ptr = nullptr;
    EvaluationReport baseline;
    if (!swpc_path.empty()) {
        const auto swpc = parse_swpc_forecasts(swpc_path);
        for (const auto& issue : swpc.issues)
            std::cerr << "warning: " << swpc_path << ":" << issue.line << ": " << issue.reason
                      << "\n";
        std::map<Date, StormClass> swpc_by_date;
        for (const auto& f : swpc.records)
            swpc_by_date[f.issue_date] =
                f.predicted_max_kp >= 5.0 ? StormClass::storm : StormClass::no_storm;

        const auto cmp = compare_with_baseline(preds_by_date, swpc_by_date, truth_by_date);
        baseline = cmp.baseline;
        baseline_ptr = &baseline;
        if (!cmp.missing_dates.empty()) {
            std::string missing;
            for (const auto& d : cmp.missing_dates) missing += format_date(d) + " ";
            std::cerr << "warning: baseline missing " << cmp.missing_dates.size()
                      << " test date(s): " << missing << "\n";
        }
        out["baseline"] = {
            {"n_common", cmp.n_common},
            {"missing_dates", cmp.missing_dates.size()},
            {"storm", cls(cmp.baseline.storm)},
            {"no_storm", cls(cmp.baseline.no_storm)},
            {"weighted_recall_micro", cmp.baseline.weighted_recall},
        };
        out["metrics_common_dates"] = {
            {"storm", cls(cmp.ours.storm)},
            {"no_storm", cls(cmp.ours.no_storm)},
            {"weighted_recall_micro", cmp.ours.weighted_recall},
        };
    }
    text += render_metrics_table(rep, baseline_ptr);

    fs::create_directories(cfg.reports_dir);
    atomic_write_text(cfg.reports_dir / "report.json", out.dump(2) + "\n");
    atomic_write_text(cfg.reports_dir / "report.txt", text);
    std::string roc_csv = "fpr,tpr\n";
    for (const auto& p : rep.roc.points)
        roc_csv += std::to_string(p.fpr) + "," + std::to_string(p.tpr) + "\n";
    atomic_write_text(cfg.reports_dir / "roc.csv", roc_csv);

    std::fputs(text.c_str(), stdout);
    std::printf("evaluate: reports under %s\n", cfg.reports_dir.string().c_str());
    return kExitOk;
}

// ---- correlate ----

int cmd_correlate(const GlobalArgs& g, const std::string& features_override,
                  const std::string& silso_path) {
    const RunConfig cfg = g.resolve();
    const fs::path features =
        features_override.empty() ? cfg.features_csv : fs::path(features_override);

    const auto records = read_feature_csv(features);
    const auto silso = parse_silso(silso_path);
    for (const auto& issue : silso.issues)
        std::cerr << "warning: " << silso_path << ":" << issue.line << ": " << issue.reason
                  << "\n";

    const auto corr = correlate_with_silso(records, silso.records);
    std::printf("correlate: PCC %.4f, mean signed difference %.2f over %ld matched day(s)\n",
                corr.pcc, corr.mean_diff, corr.n_matched);

    json out = config_provenance(cfg);
    out["inputs"] = {{"features", fingerprint_hex(features)},
                     {"silso", fingerprint_hex(silso_path)}};
    out["correlation"] = {{"pcc", corr.pcc},
                          {"mean_signed_difference", corr.mean_diff},
                          {"n_matched", corr.n_matched}};
    fs::create_directories(cfg.reports_dir);
    atomic_write_text(cfg.reports_dir / "correlation.json", out.dump(2) + "\n");
    return kExitOk;
}

// ---- predict ----

int cmd_predict(const GlobalArgs& g, const std::string& model_override,
                const std::string& today_path, const std::string& yesterday_path,
                bool prev_storm, const std::string& debug_dir) {
    const RunConfig cfg = g.resolve();
    const fs::path model_path = model_override.empty() ? cfg.model_file : fs::path(model_override);
    const SvmModel model = load_model(model_path);

    auto extract_for = [&](const std::string& path, const char* tag) {
        CannyStages stages;
        const GrayImage img = load_image(path);
        DailySunspotRecord rec =
            extract_features(img, cfg.canny, cfg.dbscan, debug_dir.empty() ? nullptr : &stages);
        if (!debug_dir.empty()) {
            const fs::path dir = fs::path(debug_dir) / tag;
            fs::create_directories(dir);
            write_png(dir / "smoothed.png", stages.smoothed);
            write_png_normalized(dir / "magnitude.png", stages.magnitude);
            write_png_normalized(dir / "suppressed.png", stages.suppressed);
            write_png(dir / "edges.png", stages.edges_unmasked);
        }
        return rec;
    };

    const auto yesterday = extract_for(yesterday_path, "yesterday");
    const auto today = extract_for(today_path, "today");

    const FeatureVector raw = make_feature_vector(yesterday.sunspots, yesterday.regions,
                                                  prev_storm, today.sunspots, today.regions);
    const double score = decision_value(model, model.scaler.transform(raw));
    const StormClass verdict = score >= 0.0 ? StormClass::storm : StormClass::no_storm;

    std::printf("features: prev(sunspots=%d regions=%d storm=%d) today(sunspots=%d regions=%d)\n",
                yesterday.sunspots, yesterday.regions, prev_storm ? 1 : 0, today.sunspots,
                today.regions);
    std::printf("%s (decision value %+.6f)\n", to_string(verdict), score);
    return kExitOk;
}

// ---- fetch ----

int cmd_fetch(const GlobalArgs& g, const std::string& from, const std::string& to) {
    const RunConfig cfg = g.resolve();
    const auto first = parse_date(from);
    const auto last = parse_date(to);
    if (!first || !last) throw std::invalid_argument("--from/--to must be YYYY-MM-DD");

    FetchOptions opts;
    opts.base_url = cfg.base_url;
    opts.cache_dir = cfg.cache_dir;
    opts.offline = cfg.offline;
    opts.max_in_flight = cfg.fetch_concurrency;

    std::unique_ptr<HttpTransport> transport;
    if (!cfg.offline) transport = make_https_transport();
    const auto manifest = fetch_sdo(*first, *last, opts, transport.get());

    std::printf("fetch: %zu day(s) available, %zu gap(s)\n", manifest.entries.size(),
                manifest.gaps.size());
    for (const auto& d : manifest.gaps) std::printf("  gap %s\n", format_date(d).c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geomagnetic storm forecasting from solar images"};
    app.require_subcommand(1);

    GlobalArgs g;

    auto* fetch = app.add_subcommand("fetch", "Download solar browse images into the cache");
    std::string from, to;
    fetch->add_option("--from", from, "First date, YYYY-MM-DD")->required();
    fetch->add_option("--to", to, "Last date, YYYY-MM-DD")->required();
    add_global_flags(fetch, g);

    auto* extract = app.add_subcommand("extract", "Extract per-day sunspot counts from images");
    std::string images_dir, features_out, debug_dir;
    int jobs = 0;
    extract->add_option("--images", images_dir, "Image directory (default: cache)");
    extract->add_option("--out", features_out, "Feature CSV to write/resume");
    extract->add_option("--debug-dir", debug_dir, "Dump per-stage intermediate images here");
    extract->add_option("--jobs", jobs, "Parallel workers (default: hardware)");
    add_global_flags(extract, g);

    auto* dataset = app.add_subcommand("dataset", "Assemble labeled examples from features + Kp");
    std::string features_in, kp_path, dataset_out;
    dataset->add_option("--features", features_in, "Feature CSV (default from config)");
    dataset->add_option("--kp", kp_path, "Kp index file")->required();
    dataset->add_option("--out", dataset_out, "Dataset CSV to write");
    add_global_flags(dataset, g);

    auto* train = app.add_subcommand("train", "Split, oversample, scale, and train the classifier");
    std::string train_dataset, train_model;
    train->add_option("--dataset", train_dataset, "Dataset CSV (default from config)");
    train->add_option("--model", train_model, "Model file to write");
    add_global_flags(train, g);

    auto* evaluate = app.add_subcommand("evaluate", "Score the held-out split and write reports");
    std::string eval_model, eval_dataset, swpc_path;
    evaluate->add_option("--model", eval_model, "Model file (default from config)");
    evaluate->add_option("--dataset", eval_dataset, "Dataset CSV (default from config)");
    evaluate->add_option("--swpc", swpc_path, "Optional SWPC forecast archive for the baseline");
    add_global_flags(evaluate, g);

    auto* correlate = app.add_subcommand("correlate", "Correlate extracted counts with SILSO");
    std::string corr_features, silso_path;
    correlate->add_option("--features", corr_features, "Feature CSV (default from config)");
    correlate->add_option("--silso", silso_path, "SILSO daily CSV")->required();
    add_global_flags(correlate, g);

    auto* predict = app.add_subcommand("predict", "24-hour forecast from two day-images");
    std::string pred_model, today_img, yesterday_img, pred_debug;
    bool prev_storm = false;
    predict->add_option("--model", pred_model, "Model file (default from config)");
    predict->add_option("--today", today_img, "Present-day image")->required();
    predict->add_option("--yesterday", yesterday_img, "Previous-day image")->required();
    predict->add_flag("--prev-storm", prev_storm, "A storm occurred on the previous day");
    predict->add_option("--debug-dir", pred_debug, "Dump per-stage intermediate images here");
    add_global_flags(predict, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*fetch) return cmd_fetch(g, from, to);
        if (*extract) return cmd_extract(g, images_dir, features_out, debug_dir, jobs);
        if (*dataset) return cmd_dataset(g, features_in, kp_path, dataset_out);
        if (*train) return cmd_train(g, train_dataset, train_model);
        if (*evaluate) return cmd_evaluate(g, eval_model, eval_dataset, swpc_path);
        if (*correlate) return cmd_correlate(g, corr_features, silso_path);
        if (*predict)
            return cmd_predict(g, pred_model, today_img, yesterday_img, prev_storm, pred_debug);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
