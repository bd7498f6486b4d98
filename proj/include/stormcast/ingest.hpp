#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stormcast/date.hpp"
#include "stormcast/features.hpp"

namespace stormcast {

// One day of 3-hourly Kp readings, published in thirds (4.667, 5.0, 5.333, ...).
struct KpDay {
    Date date{};
    std::array<double, 8> values{};
    double max_kp = 0.0;
};

struct SilsoRecord {
    Date date{};
    double sesc_number = 0.0; // daily total sunspot number
    bool provisional = false;
    bool missing = false;     // source sentinel (negative number)
};

// A 1-day-ahead geomagnetic outlook: the maximum Kp predicted for the day
// after issue_date.
struct SwpcForecastRecord {
    Date issue_date{};
    double predicted_max_kp = 0.0;
};

struct ParseIssue {
    int line = 0;
    std::string reason;
};

// Parsers are total: they never throw on malformed content, they collect it.
// A file where more than 10% of data lines are malformed is rejected outright
// (wrong format suspected).
template <typename T>
struct Parsed {
    std::vector<T> records;
    std::vector<ParseIssue> issues;
};

// GFZ Kp distribution format (whitespace-delimited; see docs/data_formats.md):
//   YYYY MM DD days days_m Bsr dB Kp1..Kp8 ap1..ap8 Ap SN F10.7obs F10.7adj D
Parsed<KpDay> parse_kp_file(const std::filesystem::path& path);
Parsed<KpDay> parse_kp_text(const std::string& text);

// SILSO daily total CSV, semicolon-delimited:
//   year;month;day;decimal-year;number;std;obs-count;provisional
Parsed<SilsoRecord> parse_silso(const std::filesystem::path& path);
Parsed<SilsoRecord> parse_silso_text(const std::string& text);

// SWPC daily geomagnetic forecast text products (one or more concatenated):
// reads the :Issued: date and the first-day column of the Kp table.
Parsed<SwpcForecastRecord> parse_swpc_forecasts(const std::filesystem::path& path);
Parsed<SwpcForecastRecord> parse_swpc_text(const std::string& text);

// Storm iff the day's maximum Kp >= 5 (inclusive; 4.667 is not a storm).
inline StormClass label_day(const KpDay& k) {
    return k.max_kp >= 5.0 ? StormClass::storm : StormClass::no_storm;
}

struct ImageManifest {
    std::map<Date, std::filesystem::path> entries;
    int ignored = 0; // unrelated files in the directory
    std::vector<std::string> warnings;
    std::vector<Date> gaps; // dates a fetch could not supply
};

// Scans a directory tree for images named YYYYMMDD_*.{png,jpg,jpeg,pgm} or
// laid out as YYYY/MMDD.{png,jpg,jpeg,pgm}. Duplicate dates keep the
// lexicographically first path and warn.
ImageManifest build_manifest(const std::filesystem::path& dir);

// Injectable HTTP layer so fetching is testable without a network.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    // Full URL in, body out; nullopt on any failure.
    virtual std::optional<std::string> get(const std::string& url) = 0;
};

std::unique_ptr<HttpTransport> make_https_transport();

struct FetchOptions {
    std::string base_url; // archive root laid out as /YYYY/MM/DD/
    std::filesystem::path cache_dir;
    bool offline = false;
    int max_in_flight = 4;
    int window_minutes = 120;      // accept the earliest image within this window after 00:00
    std::string channel = "HMIIF"; // flattened intensitygram browse product
    int resolution = 1024;
};

// Downloads the 00:00 (or nearest within the window) browse image per day
// into cache_dir/YYYY/MMDD.<ext>, skipping days already cached. Per-day
// failures land in the gap list; the range never aborts. Offline mode fails
// only when nothing in the range is cached.
ImageManifest fetch_sdo(const Date& first, const Date& last, const FetchOptions& opts,
                        HttpTransport* transport);

} // namespace stormcast
