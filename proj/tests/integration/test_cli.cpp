// Drives the installed CLI binary end-to-end over a generated corpus:
// subcommand plumbing, exit codes, resumability, the SWPC baseline path,
// correlation, and the 24-hour forecast.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "stormcast/csvio.hpp"
#include "stormcast/date.hpp"
#include "stormcast/features.hpp"

#include "../support/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
    const char* env = std::getenv("STORMCAST_CLI");
    REQUIRE_MESSAGE(env != nullptr, "STORMCAST_CLI must point at the binary");
    return env;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), int(buf.size()), pipe)) res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("stormcast_cli_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);

        synth::CorpusSpec spec;
        spec.image_dir = dir / "images";
        spec.kp_file = dir / "kp.txt";
        spec.n_days = 40;
        synth::write_corpus(spec);

        std::ofstream conf(dir / "run.conf");
        conf << "[paths]\n"
             << "features_csv = " << (dir / "features.csv").string() << "\n"
             << "dataset_csv = " << (dir / "dataset.csv").string() << "\n"
             << "model_file = " << (dir / "model.gsvm").string() << "\n"
             << "reports_dir = " << (dir / "reports").string() << "\n"
             << "[canny]\nsigma = 1.0\nlow_threshold = 300\nhigh_threshold = 350\n"
             << "[run]\nseed = 777\n";
    }
    ~Workspace() { fs::remove_all(dir); }

    std::string cfg() const { return " --config " + (dir / "run.conf").string(); }
};

} // namespace

TEST_CASE("cli end-to-end over a generated corpus") {
    Workspace ws;

    // extract -> dataset -> train -> evaluate
    auto r = run("extract" + ws.cfg() + " --images " + (ws.dir / "images").string());
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    r = run("dataset" + ws.cfg() + " --kp " + (ws.dir / "kp.txt").string());
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    CHECK(r.output.find("skipped") != std::string::npos);
    r = run("train" + ws.cfg());
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    CHECK(r.output.find("class balance") != std::string::npos);

    SUBCASE("evaluate with a baseline archive covering the test dates") {
        // truth-equal baseline built from the generated Kp series: the
        // forecast issued on day d predicts day d+1's planted storm state
        const auto examples = stormcast::read_dataset_csv(ws.dir / "dataset.csv");
        std::ofstream swpc(ws.dir / "swpc.txt");
        for (const auto& ex : examples) {
            const auto d = ex.date;
            char issued[64];
            static const char* months[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                           "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
            std::snprintf(issued, sizeof issued, ":Issued: %d %s %02u 2230 UTC",
                          int(d.year()), months[unsigned(d.month()) - 1],
                          unsigned(d.day()));
            const double kp = ex.label == stormcast::StormClass::storm ? 6.33 : 2.33;
            swpc << ":Product: 3-Day Forecast\n" << issued << "\n";
            swpc << "NOAA Kp index breakdown\n";
            swpc << "             Day 1     Day 2     Day 3\n";
            for (int row = 0; row < 8; ++row) {
                char line[80];
                std::snprintf(line, sizeof line, "%02d-%02dUT       %.2f      2.00      2.00\n",
                              row * 3, row * 3 + 3, row == 4 ? kp : 1.67);
                swpc << line;
            }
            swpc << "\n";
        }
        swpc.close();

        r = run("evaluate" + ws.cfg() + " --swpc " + (ws.dir / "swpc.txt").string());
        REQUIRE_MESSAGE(r.exit_code == 0, r.output);
        CHECK(r.output.find("SWPC") != std::string::npos);

        const json report = json::parse(slurp(ws.dir / "reports" / "report.json"));
        CHECK(report["metrics"]["auc"].get<double>() >= 0.9);
        // the constructed baseline equals truth, so its recall is 1.0
        CHECK(report["baseline"]["storm"]["recall"].get<double>() == 1.0);
        CHECK(report["baseline"]["no_storm"]["recall"].get<double>() == 1.0);
        CHECK(report.contains("config"));
        CHECK(report["inputs"].contains("dataset"));

        // roc.csv is well-formed for external plotting
        const std::string roc = slurp(ws.dir / "reports" / "roc.csv");
        CHECK(roc.rfind("fpr,tpr\n", 0) == 0);
        CHECK(roc.find("1.000000,1.000000") != std::string::npos);
    }

    SUBCASE("correlate against a published-number series") {
        // a SILSO series proportional to the extracted counts correlates to 1
        const auto records = stormcast::read_feature_csv(ws.dir / "features.csv");
        std::ofstream silso(ws.dir / "silso.csv");
        for (const auto& rec : records) {
            char line[96];
            std::snprintf(line, sizeof line, "%d;%02u;%02u;2023.0;%d;1.0;10;0\n",
                          int(rec.date.year()), unsigned(rec.date.month()),
                          unsigned(rec.date.day()),
                          int(stormcast::wolf_proxy(rec) * 2.0 + 7.0));
            silso << line;
        }
        silso.close();

        r = run("correlate" + ws.cfg() + " --silso " + (ws.dir / "silso.csv").string());
        REQUIRE_MESSAGE(r.exit_code == 0, r.output);
        const json report = json::parse(slurp(ws.dir / "reports" / "correlation.json"));
        CHECK(report["correlation"]["pcc"].get<double>() > 0.999);
    }

    SUBCASE("24-hour forecast from two day-images") {
        // a high-spot pair: by the planted rule >= 4 spots today means storm
        const auto records = stormcast::read_feature_csv(ws.dir / "features.csv");
        fs::path stormy, quiet, prev;
        for (const auto& rec : records) {
            char name[48];
            std::snprintf(name, sizeof name, "%04d%02u%02u_000000_synthetic.png",
                          int(rec.date.year()), unsigned(rec.date.month()),
                          unsigned(rec.date.day()));
            if (rec.sunspots >= 5 && stormy.empty()) stormy = ws.dir / "images" / name;
            if (rec.sunspots == 0 && quiet.empty()) quiet = ws.dir / "images" / name;
            if (!stormy.empty() && !quiet.empty()) break;
        }
        REQUIRE(!stormy.empty());
        REQUIRE(!quiet.empty());

        r = run("predict" + ws.cfg() + " --yesterday " + quiet.string() + " --today " +
                stormy.string());
        REQUIRE_MESSAGE(r.exit_code == 0, r.output);
        CHECK(r.output.find("storm (decision value") != std::string::npos);

        r = run("predict" + ws.cfg() + " --yesterday " + stormy.string() + " --today " +
                quiet.string());
        REQUIRE_MESSAGE(r.exit_code == 0, r.output);
        CHECK(r.output.find("no_storm (decision value") != std::string::npos);
    }

    SUBCASE("exit codes distinguish usage, data, and success") {
        CHECK(run("extract" + ws.cfg() + " --images /definitely/missing").exit_code == 2);
        CHECK(run("nonsense-subcommand").exit_code == 1);
        CHECK(run("dataset" + ws.cfg()).exit_code == 1); // missing required --kp
        CHECK(run("predict" + ws.cfg() + " --yesterday x --today y").exit_code == 2);
        CHECK(run("train" + ws.cfg() + " --set svm.c=-1").exit_code == 1);
        CHECK(run("train" + ws.cfg() + " --set bogus.key=1").exit_code == 2);
    }
}
