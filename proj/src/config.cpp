#include "stormcast/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "stormcast/errors.hpp"
#include "stormcast/rng.hpp"

namespace stormcast {

uint64_t RunConfig::stage_seed(std::string_view stage) const {
    return derive_seed(seed, stage);
}

void RunConfig::validate() const {
    canny.validate();
    dbscan.validate();
    smote.validate();
    svm.validate();
    split.validate();
    if (fetch_concurrency < 1) throw std::invalid_argument("fetch_concurrency must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& v, const std::string& key) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw DataError("config: bad number for " + key + ": '" + v + "'");
    return out;
}

int parse_int(const std::string& v, const std::string& key) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw DataError("config: bad integer for " + key + ": '" + v + "'");
    return out;
}

uint64_t parse_u64(const std::string& v, const std::string& key) {
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw DataError("config: bad integer for " + key + ": '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw DataError("config: bad boolean for " + key + ": '" + v + "'");
}

} // namespace

void RunConfig::apply_line(const std::string& section, const std::string& key,
                           const std::string& value) {
    const std::string full = section.empty() ? key : section + "." + key;

    if (full == "paths.cache_dir") cache_dir = value;
    else if (full == "paths.features_csv") features_csv = value;
    else if (full == "paths.dataset_csv") dataset_csv = value;
    else if (full == "paths.model_file") model_file = value;
    else if (full == "paths.reports_dir") reports_dir = value;
    else if (full == "canny.sigma") canny.smoothing_sigma = parse_real(value, full);
    else if (full == "canny.low_threshold") canny.low_threshold = parse_real(value, full);
    else if (full == "canny.high_threshold") canny.high_threshold = parse_real(value, full);
    else if (full == "canny.disk_margin_fraction")
        canny.disk_margin_fraction = parse_real(value, full);
    else if (full == "dbscan.eps") dbscan.eps = parse_real(value, full);
    else if (full == "dbscan.min_pts") dbscan.min_pts = parse_int(value, full);
    else if (full == "smote.k_neighbors") smote.k_neighbors = parse_int(value, full);
    else if (full == "smote.target_ratio") smote.target_ratio = parse_real(value, full);
    else if (full == "svm.c") svm.c = parse_real(value, full);
    else if (full == "svm.gamma") svm.gamma = value == "auto" ? 0.0 : parse_real(value, full);
    else if (full == "svm.tolerance") svm.tolerance = parse_real(value, full);
    else if (full == "svm.max_passes") svm.max_passes = parse_int(value, full);
    else if (full == "split.test_fraction") split.test_fraction = parse_real(value, full);
    else if (full == "run.seed") seed = parse_u64(value, full);
    else if (full == "run.offline") offline = parse_bool(value, full);
    else if (full == "run.base_url") base_url = value;
    else if (full == "run.fetch_concurrency") fetch_concurrency = parse_int(value, full);
    else if (full == "run.scaler_scope") {
        if (value == "train") scaler_global = false;
        else if (value == "all") scaler_global = true;
        else throw DataError("config: run.scaler_scope must be 'train' or 'all'");
    }
    else if (full == "run.grid_search") grid_search = parse_bool(value, full);
    else throw DataError("config: unknown key '" + full + "'");
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read config: " + path.string());

    RunConfig cfg;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError("config:" + std::to_string(line_no) + ": expected key = value");
        cfg.apply_line(section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

std::string RunConfig::serialize() const {
    std::ostringstream out;
    out << "[paths]\n";
    out << "cache_dir = " << cache_dir.string() << "\n";
    out << "features_csv = " << features_csv.string() << "\n";
    out << "dataset_csv = " << dataset_csv.string() << "\n";
    out << "model_file = " << model_file.string() << "\n";
    out << "reports_dir = " << reports_dir.string() << "\n";
    out << "[canny]\n";
    out << "sigma = " << canny.smoothing_sigma << "\n";
    out << "low_threshold = " << canny.low_threshold << "\n";
    out << "high_threshold = " << canny.high_threshold << "\n";
    out << "disk_margin_fraction = " << canny.disk_margin_fraction << "\n";
    out << "[dbscan]\n";
    out << "eps = " << dbscan.eps << "\n";
    out << "min_pts = " << dbscan.min_pts << "\n";
    out << "[smote]\n";
    out << "k_neighbors = " << smote.k_neighbors << "\n";
    out << "target_ratio = " << smote.target_ratio << "\n";
    out << "[svm]\n";
    out << "c = " << svm.c << "\n";
    out << "gamma = " << (svm.gamma > 0.0 ? std::to_string(svm.gamma) : std::string("auto"))
        << "\n";
    out << "tolerance = " << svm.tolerance << "\n";
    out << "max_passes = " << svm.max_passes << "\n";
    out << "[split]\n";
    out << "test_fraction = " << split.test_fraction << "\n";
    out << "[run]\n";
    out << "seed = " << seed << "\n";
    out << "offline = " << (offline ? "true" : "false") << "\n";
    out << "base_url = " << base_url << "\n";
    out << "fetch_concurrency = " << fetch_concurrency << "\n";
    out << "scaler_scope = " << (scaler_global ? "all" : "train") << "\n";
    out << "grid_search = " << (grid_search ? "true" : "false") << "\n";
    return std::move(out).str();
}

} // namespace stormcast
