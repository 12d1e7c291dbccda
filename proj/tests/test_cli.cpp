// Integration tests that drive the real `emicast` binary through std::system.
// EMICAST_CLI_PATH is injected by CMake.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emicast/config.hpp"
#include "emicast/ingest.hpp"
#include "emicast/pipeline.hpp"
#include "emicast/preprocess.hpp"

#include "support/synthetic.hpp"

#ifdef _WIN32
#error "integration tests assume a POSIX shell"
#endif
#include <sys/wait.h>

using namespace emicast;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CmdResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + EMICAST_CLI_PATH + "\" " + args + " > \"" +
                            out.string() + "\" 2> \"" + err.string() + "\"";
    const int rc = std::system(cmd.c_str());
    CmdResult result;
    result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    result.out = read_file(out);
    result.err = read_file(err);
    return result;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("cli_work") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("unknown subcommands exit 2 with usage text") {
    auto dir = fresh_dir("usage");
    auto r = run_cli("frobnicate", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);

    auto none = run_cli("", dir);
    CHECK(none.exit_code == 2);

    auto help = run_cli("--help", dir);
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("Subcommands") != std::string::npos);
}

TEST_CASE("runtime failures exit 1 with machine-readable JSON") {
    auto dir = fresh_dir("errors");
    auto r = run_cli("-d /nonexistent/file.csv -o \"" + (dir / "out").string() + "\" ingest", dir);
    CHECK(r.exit_code == 1);
    auto j = nlohmann::json::parse(r.err);
    CHECK(j.at("error").at("code") == "IoError");

    // evaluate before train: missing checkpoint
    const fs::path csv = dir / "data.csv";
    testing::write_synthetic_csv(csv.string(), {"Alphaland"}, Date(2021, 1, 1), 120);
    auto r2 = run_cli("-d \"" + csv.string() + "\" -o \"" + (dir / "out2").string() +
                          "\" -s seq_len=10 evaluate",
                      dir);
    CHECK(r2.exit_code == 1);
    auto j2 = nlohmann::json::parse(r2.err);
    CHECK(j2.at("error").contains("message"));
}

TEST_CASE("ingest canonicalizes and is reproducible") {
    auto dir = fresh_dir("ingest");
    const fs::path csv = dir / "data.csv";
    testing::write_synthetic_csv(csv.string(), {"Alphaland", "Betaria"}, Date(2021, 1, 1), 60);

    const std::string out1 = (dir / "out1").string();
    auto r = run_cli("-d \"" + csv.string() + "\" -o \"" + out1 + "\" ingest", dir);
    REQUIRE(r.exit_code == 0);

    const std::string canonical = read_file(fs::path(out1) / "canonical.csv");
    CHECK(canonical.find("# emicast config_hash=") != std::string::npos);
    CHECK(canonical.find("region,date,sector,value") != std::string::npos);

    // round trip: the canonical file parses and the summary agrees
    auto ds = parse_emissions_csv_file((fs::path(out1) / "canonical.csv").string());
    auto summary = nlohmann::json::parse(read_file(fs::path(out1) / "ingest_summary.json"));
    CHECK(summary.at("records_after_filter").get<std::size_t>() == ds.size());

    const std::string out2 = (dir / "out2").string();
    REQUIRE(run_cli("-d \"" + csv.string() + "\" -o \"" + out2 + "\" ingest", dir).exit_code == 0);
    CHECK(read_file(fs::path(out2) / "canonical.csv") == canonical);
}

TEST_CASE("clean output matches the module oracle byte for byte") {
    auto dir = fresh_dir("clean");
    const fs::path csv = dir / "data.csv";
    {
        std::ofstream out(csv);
        out << "region,date,sector,value\n";
        const double values[5] = {1, 1, 1, 1, 100};
        for (int i = 0; i < 5; ++i)
            out << "Testland," << Date(2021, 3, 1).plus_days(i).iso() << ",Power," << values[i]
                << ".0\n";
    }

    for (double threshold : {3.0, 1.5}) {
        const std::string out_dir =
            (dir / ("out_" + std::to_string(static_cast<int>(threshold * 10)))).string();
        std::ostringstream args;
        args << "-d \"" << csv.string() << "\" -o \"" << out_dir << "\" -s ma_window=1 -s "
             << "zscore_threshold=" << threshold << " -s excluded_years= clean";
        auto r = run_cli(args.str(), dir);
        REQUIRE(r.exit_code == 0);

        // golden text straight from the preprocess module
        PipelineConfig cfg;
        cfg.data_path = csv.string();
        cfg.ma_window = 1;
        cfg.zscore_threshold = threshold;
        cfg.excluded_years.clear();
        auto ds = load_dataset(cfg);
        auto [dates, values] = ds.series("Testland", Sector::Power);
        auto clean = clean_outliers(values, threshold);
        std::ostringstream golden;
        golden << fingerprint_comment(cfg);
        write_series_csv(DailySeries{dates, clean.cleaned}, golden);

        const std::string emitted =
            read_file(fs::path(out_dir) / "testland__power_cleaned.csv");
        CHECK(emitted == golden.str());

        if (threshold == 1.5) {
            // z(100) = 2.0 under the population convention, so it gets replaced
            CHECK(clean.flagged == std::vector<std::size_t>{4});
            CHECK(emitted.find("100.0") == std::string::npos);
        } else {
            CHECK(clean.flagged.empty());
        }
    }
}

TEST_CASE("pca reports the top-three components with an SVG mirror") {
    auto dir = fresh_dir("pca");
    const fs::path csv = dir / "data.csv";
    testing::write_synthetic_csv(csv.string(), {"Alphaland"}, Date(2021, 1, 1), 200);

    const std::string out = (dir / "out").string();
    auto r = run_cli("-d \"" + csv.string() + "\" -o \"" + out + "\" -s excluded_years= pca --svg",
                     dir);
    REQUIRE(r.exit_code == 0);

    auto j = nlohmann::json::parse(read_file(fs::path(out) / "pca_alphaland.json"));
    CHECK(j.at("region") == "Alphaland");
    REQUIRE(j.at("selected_components").size() == 3);
    double sum = 0;
    for (const auto& v : j.at("explained_ratio")) sum += v.get<double>();
    CHECK(std::abs(sum - 1.0) <= 1e-10);
    // descending ratios, top three flagged in order
    const auto ratios = j.at("explained_ratio").get<std::vector<double>>();
    for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i - 1] >= ratios[i] - 1e-15);
    CHECK(j.at("selected_components")[0].at("component") == 0);
    CHECK(j.contains("config_hash"));
    CHECK(j.at("mode").at("input") == "scaled");

    const std::string svg = read_file(fs::path(out) / "pca_alphaland.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<!-- data:") != std::string::npos);
}

TEST_CASE("train, evaluate and forecast round trip through checkpoints") {
    auto dir = fresh_dir("train");
    const fs::path csv = dir / "data.csv";
    testing::write_synthetic_csv(csv.string(), {"Alphaland"}, Date(2021, 1, 1), 150);

    const std::string out = (dir / "out").string();
    const std::string common = "-d \"" + csv.string() + "\" -o \"" + out +
                               "\" -s excluded_years= -s units=6 -s layers=2 -s epochs=2 "
                               "-s seq_len=8 -s ma_window=3 -s batch_size=8 -s horizon=5 "
                               "-s sectors=Power ";

    REQUIRE(run_cli(common + "train", dir).exit_code == 0);
    REQUIRE(fs::exists(fs::path(out) / "alphaland__power_model.json"));
    const std::string history = read_file(fs::path(out) / "alphaland__power_history.csv");
    CHECK(history.find("epoch,train_loss,val_loss") != std::string::npos);
    CHECK(history.find("\n2,") != std::string::npos); // two epochs logged

    REQUIRE(run_cli(common + "evaluate", dir).exit_code == 0);
    auto metrics = nlohmann::json::parse(read_file(fs::path(out) / "alphaland__power_metrics.json"));
    CHECK(metrics.at("scaled").at("units") == "scaled");
    CHECK(metrics.at("original").at("units") == "original");
    CHECK(metrics.at("scaled").at("mse").get<double>() >= 0.0);
    CHECK(metrics.at("train_config").at("epochs") == 2);

    REQUIRE(run_cli(common + "forecast", dir).exit_code == 0);
    const std::string forecast = read_file(fs::path(out) / "alphaland__power_forecast.csv");
    std::size_t lines = 0;
    for (char c : forecast)
        if (c == '\n') ++lines;
    CHECK(lines == 2 + 5); // fingerprint + header + horizon rows
}

TEST_CASE("energy subcommand handles JSON and CSV inputs") {
    auto dir = fresh_dir("energy");
    const fs::path json_in = dir / "energies.json";
    {
        nlohmann::json j;
        j["systems"] = nlohmann::json::array();
        nlohmann::json s1;
        s1["name"] = "system 1";
        s1["cohesive"] = {{"e_system", -195.0 + 36.0 * -5.81},
                          {"N", 36},
                          {"constituents", nlohmann::json::array(
                                               {{{"species", "Sc"}, {"energy", -5.0}, {"count", 18}},
                                                {{"species", "Al"}, {"energy", -3.0}, {"count", 1}},
                                                {{"species", "B"}, {"energy", -6.0}, {"count", 17}}})}};
        s1["binding"] = {{"e_total", -3.31}, {"e_substrate", -229.5}, {"e_adsorbate", 229.5}};
        j["systems"].push_back(s1);
        nlohmann::json s2;
        s2["name"] = "system 2";
        s2["binding"] = {{"e_total", -2.92}, {"e_substrate", -187.25}, {"e_adsorbate", 187.25}};
        j["systems"].push_back(s2);
        std::ofstream out(json_in);
        out << j.dump(2);
    }

    const std::string out = (dir / "out").string();
    auto r = run_cli("-o \"" + out + "\" energy -i \"" + json_in.string() + "\"", dir);
    REQUIRE(r.exit_code == 0);
    auto report = nlohmann::json::parse(read_file(fs::path(out) / "energy_report.json"));
    REQUIRE(report.at("systems").size() == 2);
    CHECK(report.at("systems")[0].at("binding_energy_ev").get<double>() == -3.31);
    CHECK(report.at("systems")[1].at("binding_energy_ev").get<double>() == -2.92);
    CHECK(report.at("systems")[0].at("cohesive_energy_ev").get<double>() ==
          Catch::Approx(-5.81).margin(1e-12));

    const fs::path csv_in = dir / "energies.csv";
    {
        std::ofstream f(csv_in);
        f << "name,e_total,e_substrate,e_adsorbate\n";
        f << "system 1,-3.31,-229.5,229.5\n";
    }
    const std::string out2 = (dir / "out2").string();
    auto r2 = run_cli("-o \"" + out2 + "\" energy -i \"" + csv_in.string() + "\"", dir);
    REQUIRE(r2.exit_code == 0);
    auto report2 = nlohmann::json::parse(read_file(fs::path(out2) / "energy_report.json"));
    CHECK(report2.at("systems")[0].at("binding_energy_ev").get<double>() == -3.31);
}

TEST_CASE("report bundle lists every artifact with a content hash") {
    auto dir = fresh_dir("report");
    const fs::path csv = dir / "data.csv";
    testing::write_synthetic_csv(csv.string(), {"Alphaland"}, Date(2021, 1, 1), 140);

    const std::string out = (dir / "out").string();
    const std::string args = "-d \"" + csv.string() + "\" -o \"" + out +
                             "\" -s excluded_years= -s units=5 -s layers=2 -s epochs=1 "
                             "-s seq_len=8 -s ma_window=3 -s horizon=3 -s sectors=Power,Industry "
                             "report";
    auto r = run_cli(args, dir);
    REQUIRE(r.exit_code == 0);

    auto bundle = nlohmann::json::parse(read_file(fs::path(out) / "report.json"));
    REQUIRE(bundle.contains("artifacts"));
    CHECK(bundle.at("artifacts").size() >= 10);
    for (const auto& entry : bundle.at("artifacts")) {
        const fs::path artifact = fs::path(out) / entry.at("file").get<std::string>();
        REQUIRE(fs::exists(artifact));
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(hash_file(artifact.string())));
        CHECK(entry.at("fnv1a64").get<std::string>() == buf);
    }
}
