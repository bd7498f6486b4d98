#include "stormcast/csvio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "stormcast/errors.hpp"

namespace stormcast {

void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write: " + tmp.string());
        out << text;
        if (!out) throw DataError("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

int parse_count(const std::string& s, const std::filesystem::path& path, int line_no) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0)
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad count '" + s + "'");
    return v;
}

} // namespace

void write_feature_csv(const std::filesystem::path& path,
                       const std::vector<DailySunspotRecord>& records) {
    std::ostringstream out;
    out << "date,sunspots,regions\n";
    for (const auto& r : records)
        out << format_date(r.date) << "," << r.sunspots << "," << r.regions << "\n";
    atomic_write_text(path, std::move(out).str());
}

std::vector<DailySunspotRecord> read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "date,sunspots,regions")
        throw DataError(path.string() + ": unexpected header");

    std::vector<DailySunspotRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 3)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
        const auto date = parse_date(f[0]);
        if (!date)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad date");
        records.push_back({*date, parse_count(f[1], path, line_no),
                           parse_count(f[2], path, line_no)});
    }
    return records;
}

void write_dataset_csv(const std::filesystem::path& path,
                       const std::vector<LabeledExample>& examples) {
    std::ostringstream out;
    out << "date,prev_sunspots,prev_regions,prev_storm,cur_sunspots,cur_regions,label\n";
    for (const auto& ex : examples) {
        out << format_date(ex.date);
        for (double v : ex.features) out << "," << static_cast<long long>(v);
        out << "," << (ex.label == StormClass::storm ? 1 : 0) << "\n";
    }
    atomic_write_text(path, std::move(out).str());
}

std::vector<LabeledExample> read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read: " + path.string());
    std::string line;
    if (!std::getline(in, line) ||
        line != "date,prev_sunspots,prev_regions,prev_storm,cur_sunspots,cur_regions,label")
        throw DataError(path.string() + ": unexpected header");

    std::vector<LabeledExample> examples;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 7)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 7 fields");
        const auto date = parse_date(f[0]);
        if (!date)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad date");

        LabeledExample ex;
        ex.date = *date;
        const int prev_storm = parse_count(f[3], path, line_no);
        if (prev_storm > 1)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": prev_storm not 0/1");
        ex.features = make_feature_vector(parse_count(f[1], path, line_no),
                                          parse_count(f[2], path, line_no), prev_storm == 1,
                                          parse_count(f[4], path, line_no),
                                          parse_count(f[5], path, line_no));
        const int label = parse_count(f[6], path, line_no);
        if (label > 1)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": label not 0/1");
        ex.label = label == 1 ? StormClass::storm : StormClass::no_storm;
        examples.push_back(std::move(ex));
    }
    return examples;
}

} // namespace stormcast
