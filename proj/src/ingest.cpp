#include "stormcast/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "stormcast/errors.hpp"

namespace stormcast {

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::optional<double> to_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<int> to_int(const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Reject the whole file when >10% of its data lines are malformed.
template <typename T>
void enforce_malformed_budget(const Parsed<T>& parsed, size_t data_lines) {
    const size_t bad = parsed.issues.size();
    if (data_lines > 0 && bad * 10 > data_lines)
        throw DataError("more than 10% malformed lines; wrong format suspected");
}

} // namespace

Parsed<KpDay> parse_kp_text(const std::string& text) {
    Parsed<KpDay> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    size_t data_lines = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        ++data_lines;

        const auto tok = split_ws(t);
        // YYYY MM DD days days_m Bsr dB Kp1..Kp8 ...
        if (tok.size() < 15) {
            out.issues.push_back({line_no, "expected at least 15 columns"});
            continue;
        }
        const auto y = to_int(tok[0]);
        const auto m = to_int(tok[1]);
        const auto d = to_int(tok[2]);
        if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1 || *d > 31) {
            out.issues.push_back({line_no, "bad date fields"});
            continue;
        }
        const Date date = make_date(*y, unsigned(*m), unsigned(*d));
        if (!date.ok()) {
            out.issues.push_back({line_no, "invalid calendar date"});
            continue;
        }

        KpDay day;
        day.date = date;
        bool ok = true;
        for (size_t i = 0; i < 8; ++i) {
            const auto v = to_double(tok[7 + i]);
            if (!v) {
                out.issues.push_back({line_no, "bad Kp value"});
                ok = false;
                break;
            }
            if (*v < 0.0 || *v > 9.0) {
                out.issues.push_back({line_no, *v < 0.0 ? "missing Kp value" : "bad Kp value"});
                ok = false;
                break;
            }
            day.values[i] = *v;
        }
        if (!ok) continue;
        day.max_kp = *std::max_element(day.values.begin(), day.values.end());
        out.records.push_back(day);
    }

    if (data_lines == 0) out.issues.push_back({0, "empty file"});
    enforce_malformed_budget(out, data_lines);
    return out;
}

Parsed<KpDay> parse_kp_file(const std::filesystem::path& path) {
    return parse_kp_text(read_text_file(path));
}

Parsed<SilsoRecord> parse_silso_text(const std::string& text) {
    Parsed<SilsoRecord> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    size_t data_lines = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        ++data_lines;

        // year;month;day;decimal-year;number;std;obs-count;provisional
        std::vector<std::string> fields;
        std::string field;
        std::istringstream fs(t);
        while (std::getline(fs, field, ';')) fields.push_back(trim(field));
        if (fields.size() < 8) {
            out.issues.push_back({line_no, "expected 8 semicolon-delimited fields"});
            continue;
        }

        const auto y = to_int(fields[0]);
        const auto m = to_int(fields[1]);
        const auto d = to_int(fields[2]);
        const auto num = to_double(fields[4]);
        if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1 || *d > 31 || !num) {
            out.issues.push_back({line_no, "bad date or number field"});
            continue;
        }
        const Date date = make_date(*y, unsigned(*m), unsigned(*d));
        if (!date.ok()) {
            out.issues.push_back({line_no, "invalid calendar date"});
            continue;
        }

        SilsoRecord rec;
        rec.date = date;
        rec.sesc_number = *num;
        rec.missing = *num < 0.0;
        rec.provisional = fields[7] == "1" || fields[7] == "*";
        out.records.push_back(rec);
    }

    if (data_lines == 0) out.issues.push_back({0, "empty file"});
    enforce_malformed_budget(out, data_lines);
    return out;
}

Parsed<SilsoRecord> parse_silso(const std::filesystem::path& path) {
    return parse_silso_text(read_text_file(path));
}

namespace {

std::optional<Date> parse_issued_date(const std::string& line) {
    // ":Issued: 2021 Apr 01 2205 UTC"
    static const std::regex re(R"(:Issued:\s+(\d{4})\s+([A-Za-z]{3})\s+(\d{1,2}))");
    std::smatch m;
    if (!std::regex_search(line, m, re)) return std::nullopt;
    static const char* names[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    unsigned month = 0;
    for (unsigned i = 0; i < 12; ++i)
        if (m[2].str() == names[i]) month = i + 1;
    if (month == 0) return std::nullopt;
    const Date d = make_date(std::stoi(m[1]), month, unsigned(std::stoi(m[3])));
    if (!d.ok()) return std::nullopt;
    return d;
}

} // namespace

Parsed<SwpcForecastRecord> parse_swpc_text(const std::string& text) {
    Parsed<SwpcForecastRecord> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    std::optional<Date> issued;
    bool in_table = false;
    int rows = 0;
    double day1_max = -1.0;
    int table_line = 0;

    auto flush = [&]() {
        if (!in_table) return;
        if (issued && rows == 8) {
            out.records.push_back({*issued, day1_max});
        } else if (rows > 0) {
            out.issues.push_back({table_line, issued ? "incomplete Kp table"
                                                     : "Kp table without :Issued: date"});
        }
        in_table = false;
        rows = 0;
        day1_max = -1.0;
    };

    static const std::regex row_re(R"(^(\d{2})-(\d{2})UT\s+(\S+))");

    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind(":Product:", 0) == 0) {
            flush();
            issued.reset();
            continue;
        }
        if (line.rfind(":Issued:", 0) == 0) {
            flush();
            issued = parse_issued_date(line);
            if (!issued) out.issues.push_back({line_no, "unparseable :Issued: date"});
            continue;
        }
        if (line.find("NOAA Kp index") != std::string::npos) {
            flush();
            in_table = true;
            table_line = line_no;
            continue;
        }

        std::smatch m;
        if (in_table && std::regex_search(line, m, row_re)) {
            const auto v = to_double(m[3].str());
            if (!v || *v < 0.0 || *v > 9.0) {
                out.issues.push_back({line_no, "bad Kp value in forecast row"});
                flush();
                continue;
            }
            day1_max = std::max(day1_max, *v);
            ++rows;
            if (rows == 8) flush();
        }
    }
    flush();

    if (out.records.empty() && out.issues.empty())
        out.issues.push_back({0, "no forecast products found"});
    return out;
}

Parsed<SwpcForecastRecord> parse_swpc_forecasts(const std::filesystem::path& path) {
    return parse_swpc_text(read_text_file(path));
}

namespace {

bool image_ext(const std::filesystem::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
    return e == ".png" || e == ".jpg" || e == ".jpeg" || e == ".pgm";
}

std::optional<Date> date_of_image_path(const std::filesystem::path& p) {
    const std::string stem = p.stem().string();
    // YYYYMMDD_anything
    if (stem.size() >= 8) {
        if (auto d = parse_compact_date(stem.substr(0, 8))) return d;
    }
    // YYYY/MMDD
    if (stem.size() == 4 && p.has_parent_path()) {
        const std::string parent = p.parent_path().filename().string();
        if (parent.size() == 4) {
            if (auto d = parse_compact_date(parent + stem)) return d;
        }
    }
    return std::nullopt;
}

} // namespace

ImageManifest build_manifest(const std::filesystem::path& dir) {
    ImageManifest manifest;
    if (!std::filesystem::exists(dir)) return manifest;

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end()); // lexicographic; makes duplicate choice stable

    for (const auto& path : files) {
        if (!image_ext(path)) {
            ++manifest.ignored;
            continue;
        }
        const auto date = date_of_image_path(path);
        if (!date) {
            ++manifest.ignored;
            continue;
        }
        auto [it, inserted] = manifest.entries.emplace(*date, path);
        if (!inserted)
            manifest.warnings.push_back("duplicate date " + format_date(*date) + ": kept " +
                                        it->second.string() + ", ignored " + path.string());
    }
    return manifest;
}

namespace {

struct DayFetch {
    Date date{};
    std::filesystem::path path; // empty on failure
};

std::string two(unsigned v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02u", v);
    return buf;
}

std::optional<std::filesystem::path> cached_file(const std::filesystem::path& dir,
                                                 const std::string& stem) {
    for (const char* ext : {".jpg", ".png", ".jpeg", ".pgm"}) {
        auto p = dir / (stem + ext);
        if (std::filesystem::exists(p)) return p;
    }
    return std::nullopt;
}

void atomic_write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write: " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw DataError("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

DayFetch fetch_one_day(const Date& date, const FetchOptions& opts, HttpTransport* transport) {
    const std::string yyyy = std::to_string(int(date.year()));
    const std::string mm = two(unsigned(date.month()));
    const std::string dd = two(unsigned(date.day()));
    const std::filesystem::path day_dir = opts.cache_dir / "images" / yyyy;
    const std::string stem = mm + dd;

    if (auto existing = cached_file(day_dir, stem)) return {date, *existing};
    if (opts.offline || !transport) return {date, {}};

    const std::string dir_url = opts.base_url + "/" + yyyy + "/" + mm + "/" + dd + "/";
    const auto listing = transport->get(dir_url);
    if (!listing) return {date, {}};

    // e.g. 20120307_000000_1024_HMIIF.jpg; earliest time within the window wins
    const std::string compact = yyyy + mm + dd;
    const std::regex file_re(compact + R"(_(\d{6})_)" + std::to_string(opts.resolution) +
                             "_" + opts.channel + R"(\.(jpg|png|jpeg))");
    std::string best_name;
    int best_minutes = opts.window_minutes + 1;
    for (auto it = std::sregex_iterator(listing->begin(), listing->end(), file_re);
         it != std::sregex_iterator(); ++it) {
        const std::string hhmmss = (*it)[1].str();
        const int minutes = std::stoi(hhmmss.substr(0, 2)) * 60 + std::stoi(hhmmss.substr(2, 2));
        if (minutes <= opts.window_minutes && minutes < best_minutes) {
            best_minutes = minutes;
            best_name = it->str();
        }
    }
    if (best_name.empty()) return {date, {}};

    const auto body = transport->get(dir_url + best_name);
    if (!body || body->empty()) return {date, {}};

    std::filesystem::create_directories(day_dir);
    const auto ext = std::filesystem::path(best_name).extension().string();
    const auto target = day_dir / (stem + ext);
    atomic_write_bytes(target, *body);
    return {date, target};
}

} // namespace

ImageManifest fetch_sdo(const Date& first, const Date& last, const FetchOptions& opts,
                        HttpTransport* transport) {
    using std::chrono::sys_days;
    if (sys_days{first} > sys_days{last})
        throw std::invalid_argument("date range is reversed");

    std::vector<Date> dates;
    for (auto d = sys_days{first}; d <= sys_days{last}; d += std::chrono::days{1})
        dates.emplace_back(Date{d});

    std::vector<DayFetch> results(dates.size());
    const int workers = std::max(1, std::min<int>(opts.max_in_flight,
                                                  static_cast<int>(dates.size())));
    std::atomic<size_t> next{0};
    auto run = [&]() {
        for (size_t i = next.fetch_add(1); i < dates.size(); i = next.fetch_add(1))
            results[i] = fetch_one_day(dates[i], opts, transport);
    };
    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }

    ImageManifest manifest;
    for (const auto& r : results) {
        if (r.path.empty())
            manifest.gaps.push_back(r.date);
        else
            manifest.entries.emplace(r.date, r.path);
    }
    if (opts.offline && manifest.entries.empty())
        throw DataError("offline and no cached images satisfy the range");
    return manifest;
}

} // namespace stormcast
