// Command-line front end for the emissions forecasting pipeline.
//
// Exit codes: 0 ok, 1 runtime error (machine-readable JSON on stderr),
// 2 usage error. EMICAST_LOG=quiet|error|warn|info|debug controls logging.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emicast/config.hpp"
#include "emicast/pipeline.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::vector<std::string> sets; // key=value overrides, applied after the file
    std::string data_path;
    std::string out_dir = "out";
    std::string energy_input;
    bool svg = false;
    int jobs = 0;
    int verbose = 0;
};

emicast::PipelineConfig build_config(const CliArgs& args) {
    emicast::PipelineConfig cfg;
    if (!args.config_path.empty()) cfg = emicast::parse_config_file(args.config_path);
    for (const auto& kv : args.sets) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            emicast::fail(emicast::ErrorCode::BadConfig, "--set expects key=value, got '" + kv + "'");
        emicast::config_set(cfg, emicast::csv::trim(kv.substr(0, eq)),
                            emicast::csv::trim(kv.substr(eq + 1)));
    }
    if (!args.data_path.empty()) cfg.data_path = args.data_path; // flag wins
    return cfg;
}

void print_artifacts(const std::vector<std::string>& artifacts) {
    for (const auto& a : artifacts) std::cout << a << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"emicast: daily CO2 emissions analytics and LSTM forecasting"};
    app.require_subcommand(1);

    CliArgs args;
    app.add_option("-c,--config", args.config_path, "pipeline config file (key = value lines)");
    app.add_option("-s,--set", args.sets, "config override key=value (repeatable; wins over file)");
    app.add_option("-d,--data", args.data_path, "input CSV path (wins over config)");
    app.add_option("-o,--out", args.out_dir, "output directory");
    app.add_flag("-v,--verbose", args.verbose, "increase log verbosity (repeat for debug)");

    auto* cmd_ingest = app.add_subcommand("ingest", "validate and canonicalize the input CSV");
    auto* cmd_clean = app.add_subcommand("clean", "Z-score outlier cleaning + moving average");
    auto* cmd_pca = app.add_subcommand("pca", "per-region explained-variance analysis");
    cmd_pca->add_flag("--svg", args.svg, "also emit bar-chart SVGs");
    auto* cmd_train = app.add_subcommand("train", "train one LSTM per (region, sector)");
    cmd_train->add_option("-j,--jobs", args.jobs, "parallel workers (0 = auto)");
    auto* cmd_forecast = app.add_subcommand("forecast", "recursive forecast from checkpoints");
    auto* cmd_evaluate = app.add_subcommand("evaluate", "test-set metrics from checkpoints");
    auto* cmd_energy = app.add_subcommand("energy", "cohesive/binding energy report");
    cmd_energy->add_option("-i,--input", args.energy_input, "energies JSON or CSV")->required();
    auto* cmd_report = app.add_subcommand("report", "full pipeline + aggregated bundle");
    cmd_report->add_flag("--svg", args.svg, "also emit bar-chart SVGs");
    cmd_report->add_option("-j,--jobs", args.jobs, "parallel workers (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    if (args.verbose >= 2)
        emicast::log_level() = emicast::LogLevel::Debug;
    else if (args.verbose == 1)
        emicast::log_level() = emicast::LogLevel::Info;

    try {
        const emicast::PipelineConfig cfg = build_config(args);
        emicast::RunOptions opts;
        opts.jobs = args.jobs;
        opts.svg = args.svg;

        if (*cmd_ingest) print_artifacts(emicast::run_ingest(cfg, args.out_dir));
        else if (*cmd_clean) print_artifacts(emicast::run_clean(cfg, args.out_dir));
        else if (*cmd_pca) print_artifacts(emicast::run_pca(cfg, args.out_dir, opts));
        else if (*cmd_train) print_artifacts(emicast::run_train(cfg, args.out_dir, opts));
        else if (*cmd_forecast) print_artifacts(emicast::run_forecast(cfg, args.out_dir));
        else if (*cmd_evaluate) print_artifacts(emicast::run_evaluate(cfg, args.out_dir));
        else if (*cmd_energy)
            print_artifacts(emicast::run_energy(cfg, args.energy_input, args.out_dir));
        else if (*cmd_report) print_artifacts(emicast::run_report(cfg, args.out_dir, opts));
        return 0;
    } catch (const emicast::Error& e) {
        nlohmann::json err;
        err["error"] = {{"code", emicast::error_code_name(e.code())}, {"message", e.what()}};
        std::cerr << err.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = {{"code", "Internal"}, {"message", e.what()}};
        std::cerr << err.dump() << '\n';
        return 1;
    }
}
