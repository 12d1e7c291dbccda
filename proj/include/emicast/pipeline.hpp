#ifndef EMICAST_PIPELINE_HPP
#define EMICAST_PIPELINE_HPP

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "emicast/checkpoint.hpp"
#include "emicast/config.hpp"
#include "emicast/core.hpp"
#include "emicast/energy.hpp"
#include "emicast/ingest.hpp"
#include "emicast/lstm.hpp"
#include "emicast/metrics.hpp"
#include "emicast/pca.hpp"
#include "emicast/preprocess.hpp"
#include "emicast/svg.hpp"

namespace emicast {

// ============================================================================
// Logging
// ============================================================================

enum class LogLevel { Quiet = 0, Error, Warn, Info, Debug };

inline LogLevel& log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("EMICAST_LOG");
        if (!env) return LogLevel::Warn;
        const std::string v = env;
        if (v == "quiet") return LogLevel::Quiet;
        if (v == "error") return LogLevel::Error;
        if (v == "warn") return LogLevel::Warn;
        if (v == "info") return LogLevel::Info;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

inline void log_line(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    const char* tag = level == LogLevel::Error ? "error"
                      : level == LogLevel::Warn ? "warn"
                      : level == LogLevel::Info ? "info"
                                                : "debug";
    std::fprintf(stderr, "[emicast %s] %s\n", tag, msg.c_str());
}

// ============================================================================
// Pipeline plumbing
// ============================================================================

struct RunOptions {
    int jobs = 0;     // 0 = hardware concurrency
    bool svg = false; // emit PCA bar charts
    int top_components = 3;
};

/// Filesystem-safe slug for a region or sector label.
inline std::string slug(std::string_view text) {
    std::string out;
    bool pending_sep = false;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            if (pending_sep && !out.empty()) out.push_back('_');
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            pending_sep = false;
        } else {
            pending_sep = true;
        }
    }
    return out.empty() ? "x" : out;
}

inline std::string pair_slug(const std::string& region, Sector sector) {
    return slug(region) + "__" + slug(sector_name(sector));
}

inline std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64(buf.str());
}

/// Load the configured CSV and apply the period / excluded-years filter.
inline EmissionDataset load_dataset(const PipelineConfig& cfg) {
    if (cfg.data_path.empty()) fail(ErrorCode::BadConfig, "no data path configured");
    EmissionDataset ds = parse_emissions_csv_file(cfg.data_path, cfg.date_format);

    Date start = ds.records().front().date;
    Date end = ds.records().front().date;
    for (const auto& r : ds.records()) {
        start = std::min(start, r.date);
        end = std::max(end, r.date);
    }
    if (cfg.period_start) start = *cfg.period_start;
    if (cfg.period_end) end = *cfg.period_end;
    return filter_period(ds, start, end, cfg.excluded_years);
}

/// The (region, sector) pairs selected by the config, in deterministic
/// (region, enum) order. Also validates that every override refers to a
/// selected pair.
inline std::vector<std::pair<std::string, Sector>> select_pairs(const EmissionDataset& ds,
                                                                const PipelineConfig& cfg) {
    std::vector<std::string> regions = cfg.regions.empty() ? ds.regions() : cfg.regions;
    std::sort(regions.begin(), regions.end());
    std::vector<Sector> sectors(cfg.sectors);
    if (sectors.empty()) {
        const auto all = all_sectors();
        sectors.assign(all.begin(), all.end());
    }

    std::vector<std::pair<std::string, Sector>> pairs;
    for (const auto& region : regions) {
        if (!ds.has_region(region)) fail(ErrorCode::UnknownRegion, region);
        auto present = ds.sectors_for(region);
        for (Sector s : sectors)
            if (std::find(present.begin(), present.end(), s) != present.end())
                pairs.emplace_back(region, s);
    }
    if (pairs.empty()) fail(ErrorCode::EmptyData, "selection matches no (region, sector) pair");

    for (const auto& [key, o] : cfg.overrides) {
        (void)o;
        const auto sector = parse_sector(key.second);
        const bool known =
            sector && std::find(pairs.begin(), pairs.end(),
                                std::make_pair(key.first, *sector)) != pairs.end();
        if (!known)
            fail(ErrorCode::BadConfig, "override for (" + key.first + ", " + key.second +
                                           ") does not match the data selection");
    }
    return pairs;
}

/// One (region, sector) series taken through the full conditioning chain:
/// Z-score cleaning, trailing moving average, then min-max scaling fitted on
/// the training prefix only (the values that appear in training windows).
struct PreparedSeries {
    std::vector<Date> dates;       // aligned with `smoothed`
    std::vector<double> smoothed;  // original units
    std::vector<double> scaled;
    Scaler scaler;
    std::vector<std::size_t> flagged;
    bool clean_degenerate = false;
    std::size_t n_train_samples = 0;
    SupervisedSet train, test;
};

inline PreparedSeries prepare_series(const EmissionDataset& ds, const std::string& region,
                                     Sector sector, const PipelineConfig& cfg,
                                     bool build_supervised = true) {
    auto [dates, values] = ds.series(region, sector);
    if (values.size() < 2)
        fail(ErrorCode::SeriesTooShort,
             "(" + region + ", " + std::string(sector_name(sector)) + ") has " +
                 std::to_string(values.size()) + " points");

    CleanResult clean = clean_outliers(values, cfg.zscore_threshold);
    if (clean.degenerate)
        log_line(LogLevel::Warn,
                 "(" + region + ", " + std::string(sector_name(sector)) +
                     "): constant series, outlier pass skipped");

    PreparedSeries ps;
    ps.flagged = clean.flagged;
    ps.clean_degenerate = clean.degenerate;
    ps.smoothed = moving_average(clean.cleaned, static_cast<std::size_t>(cfg.ma_window));
    ps.dates.assign(dates.begin() + (cfg.ma_window - 1), dates.end());

    if (!build_supervised) return ps;

    if (cfg.seq_len < 1) fail(ErrorCode::BadConfig, "seq_len must be positive");
    if (ps.smoothed.size() < static_cast<std::size_t>(cfg.seq_len) + 2)
        fail(ErrorCode::SeriesTooShort,
             "(" + region + ", " + std::string(sector_name(sector)) + ") too short for seq_len " +
                 std::to_string(cfg.seq_len));

    const std::size_t n_samples = ps.smoothed.size() - static_cast<std::size_t>(cfg.seq_len);
    ps.n_train_samples = static_cast<std::size_t>(
        std::floor(cfg.train_fraction * static_cast<double>(n_samples)));
    if (ps.n_train_samples == 0 || ps.n_train_samples == n_samples)
        fail(ErrorCode::EmptyPartition, "train fraction leaves an empty partition");

    // training windows cover series indices [0, n_train-1+seq_len]
    const std::vector<double> train_prefix(
        ps.smoothed.begin(),
        ps.smoothed.begin() + static_cast<std::ptrdiff_t>(ps.n_train_samples + cfg.seq_len));
    ps.scaler = fit_scaler(train_prefix);
    if (ps.scaler.degenerate())
        log_line(LogLevel::Warn, "(" + region + ", " + std::string(sector_name(sector)) +
                                     "): degenerate scaler (constant training prefix)");
    ps.scaled = apply_scale(ps.smoothed, ps.scaler);

    SupervisedSet sup = make_supervised(ps.scaled, cfg.seq_len);
    auto [train_set, test_set] = train_test_split(sup, cfg.train_fraction);
    ps.train = std::move(train_set);
    ps.test = std::move(test_set);
    return ps;
}

// ============================================================================
// Artifact helpers
// ============================================================================

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    out << content;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline std::string fingerprint_comment(const PipelineConfig& cfg) {
    return "# emicast config_hash=" + config_hash(cfg) + " seed=" + std::to_string(cfg.seed) +
           "\n";
}

// ============================================================================
// Subcommand implementations
// ============================================================================

/// `ingest`: validate and canonicalize the configured CSV.
inline std::vector<std::string> run_ingest(const PipelineConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    EmissionDataset ds = load_dataset(cfg);

    std::ostringstream csv_text;
    csv_text << fingerprint_comment(cfg);
    write_canonical_csv(ds, csv_text);
    const std::string csv_path = out_dir + "/canonical.csv";
    write_text_file(csv_path, csv_text.str());

    nlohmann::json summary;
    summary["config_hash"] = config_hash(cfg);
    summary["seed"] = cfg.seed;
    summary["source"] = ds.provenance().source;
    summary["rows_in_source"] = ds.provenance().row_count;
    summary["records_after_filter"] = ds.size();
    summary["regions"] = ds.regions();
    if (!ds.empty()) {
        summary["first_date"] = ds.records().front().date.iso();
        Date last = ds.records().front().date;
        for (const auto& r : ds.records()) last = std::max(last, r.date);
        summary["last_date"] = last.iso();
    }
    const std::string summary_path = out_dir + "/ingest_summary.json";
    write_json_file(summary_path, summary);
    return {csv_path, summary_path};
}

/// `clean`: per pair, Z-score cleaned and 7-day-averaged series as
/// two-column CSVs.
inline std::vector<std::string> run_clean(const PipelineConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    EmissionDataset ds = load_dataset(cfg);
    auto pairs = select_pairs(ds, cfg);

    std::vector<std::string> artifacts;
    nlohmann::json summary;
    summary["config_hash"] = config_hash(cfg);
    summary["seed"] = cfg.seed;
    nlohmann::json pairs_json = nlohmann::json::array();

    for (const auto& [region, sector] : pairs) {
        auto [dates, values] = ds.series(region, sector);
        CleanResult clean = clean_outliers(values, cfg.zscore_threshold);
        const auto smoothed = moving_average(clean.cleaned,
                                             static_cast<std::size_t>(cfg.ma_window));

        const std::string base = out_dir + "/" + pair_slug(region, sector);
        {
            std::ostringstream out;
            out << fingerprint_comment(cfg);
            DailySeries s{dates, clean.cleaned};
            write_series_csv(s, out);
            write_text_file(base + "_cleaned.csv", out.str());
            artifacts.push_back(base + "_cleaned.csv");
        }
        {
            std::ostringstream out;
            out << fingerprint_comment(cfg);
            DailySeries s{{dates.begin() + (cfg.ma_window - 1), dates.end()}, smoothed};
            write_series_csv(s, out);
            write_text_file(base + "_smoothed.csv", out.str());
            artifacts.push_back(base + "_smoothed.csv");
        }

        nlohmann::json p;
        p["region"] = region;
        p["sector"] = sector_name(sector);
        p["points"] = values.size();
        p["flagged_outliers"] = clean.flagged;
        p["degenerate"] = clean.degenerate;
        pairs_json.push_back(p);
    }
    summary["pairs"] = pairs_json;
    const std::string summary_path = out_dir + "/clean_summary.json";
    write_json_file(summary_path, summary);
    artifacts.push_back(summary_path);
    return artifacts;
}

/// Assemble the per-region matrix in the configured PCA input mode.
inline FeatureMatrix pca_matrix_for(const EmissionDataset& ds, const std::string& region,
                                    const PipelineConfig& cfg) {
    FeatureMatrix fm = pivot_sector_matrix(ds, region);
    if (cfg.pca_input == PcaInput::Raw) return fm;
    for (int j = 0; j < fm.data.cols(); ++j) {
        std::vector<double> col(fm.data.rows());
        for (int i = 0; i < fm.data.rows(); ++i) col[i] = fm.data(i, j);
        CleanResult clean = clean_outliers(col, cfg.zscore_threshold);
        col = clean.cleaned;
        if (cfg.pca_input == PcaInput::Scaled) col = minmax_scale(col).first;
        for (int i = 0; i < fm.data.rows(); ++i) fm.data(i, j) = col[i];
    }
    return fm;
}

/// `pca`: per region, eigenvalues, explained ratios, loadings, attribution
/// and the top-k component selection; optional bar-chart SVG.
inline std::vector<std::string> run_pca(const PipelineConfig& cfg, const std::string& out_dir,
                                        const RunOptions& opts = {}) {
    std::filesystem::create_directories(out_dir);
    EmissionDataset ds = load_dataset(cfg);

    std::vector<std::string> regions = cfg.regions.empty() ? ds.regions() : cfg.regions;
    std::sort(regions.begin(), regions.end());

    std::vector<std::string> artifacts;
    for (const auto& region : regions) {
        FeatureMatrix fm = pca_matrix_for(ds, region, cfg);
        PcaResult pca = pca_fit(fm, cfg.pca_center);

        nlohmann::json j;
        j["config_hash"] = config_hash(cfg);
        j["seed"] = cfg.seed;
        j["region"] = region;
        j["mode"] = {{"center", cfg.pca_center}, {"input", pca_input_name(cfg.pca_input)}};
        j["sectors"] = fm.col_labels;
        j["eigenvalues"] = pca.eigenvalues;
        j["explained_ratio"] = pca.explained_ratio;
        j["attribution"] = pca.sector_attribution;
        nlohmann::json loadings = nlohmann::json::array();
        for (int c = 0; c < pca.eigenvectors.cols(); ++c) {
            nlohmann::json col = nlohmann::json::array();
            for (int r = 0; r < pca.eigenvectors.rows(); ++r)
                col.push_back(pca.eigenvectors(r, c));
            loadings.push_back(col);
        }
        j["loadings"] = loadings; // loadings[j] = eigenvector of component j

        const int k = std::min<int>(opts.top_components,
                                    static_cast<int>(pca.explained_ratio.size()));
        nlohmann::json top = nlohmann::json::array();
        for (int c = 0; c < k; ++c)
            top.push_back({{"component", c},
                           {"ratio", pca.explained_ratio[c]},
                           {"sector", pca.sector_attribution[c]}});
        j["selected_components"] = top;

        const std::string base = out_dir + "/pca_" + slug(region);
        write_json_file(base + ".json", j);
        artifacts.push_back(base + ".json");

        if (opts.svg) {
            // bars per sector: ratio of the component attributed to it (0 if none)
            std::vector<double> by_sector(fm.col_labels.size(), 0.0);
            for (std::size_t c = 0; c < pca.sector_attribution.size(); ++c) {
                for (std::size_t s = 0; s < fm.col_labels.size(); ++s)
                    if (pca.sector_attribution[c] == fm.col_labels[s])
                        by_sector[s] += pca.explained_ratio[c];
            }
            std::ostringstream svg;
            svg << "<!-- emicast config_hash=" << config_hash(cfg) << " seed=" << cfg.seed
                << " -->\n";
            write_bar_chart_svg(svg, "Explained variance ratio: " + region, fm.col_labels,
                                by_sector);
            write_text_file(base + ".svg", svg.str());
            artifacts.push_back(base + ".svg");
        }
    }
    return artifacts;
}

/// Train one pair and write its checkpoint + history CSV.
inline std::pair<std::string, std::string> train_pair(const EmissionDataset& ds,
                                                      const std::string& region, Sector sector,
                                                      const PipelineConfig& cfg,
                                                      const std::string& out_dir) {
    PreparedSeries ps = prepare_series(ds, region, sector, cfg);
    TrainConfig tc = cfg.train_config_for(region, sector);

    std::vector<int> sizes(static_cast<std::size_t>(cfg.layers), cfg.units);
    LstmModel model = init_model(sizes, cfg.seq_len, tc.dropout, tc.seed);
    const auto history = train(model, ps.train, tc);

    const std::string base = out_dir + "/" + pair_slug(region, sector);
    Checkpoint ckpt{std::move(model), ps.scaler, tc, config_hash(cfg)};
    save_checkpoint_file(ckpt, base + "_model.json");

    std::ostringstream hist;
    hist << fingerprint_comment(cfg);
    hist << "epoch,train_loss,val_loss\n";
    char buf[64];
    for (std::size_t e = 0; e < history.size(); ++e) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g", e + 1, history[e].train_loss,
                      history[e].val_loss);
        hist << buf << '\n';
    }
    write_text_file(base + "_history.csv", hist.str());
    return {base + "_model.json", base + "_history.csv"};
}

/// `train`: fan out one worker per (region, sector) pair.
inline std::vector<std::string> run_train(const PipelineConfig& cfg, const std::string& out_dir,
                                          const RunOptions& opts = {}) {
    std::filesystem::create_directories(out_dir);
    EmissionDataset ds = load_dataset(cfg);
    auto pairs = select_pairs(ds, cfg);

    unsigned jobs = opts.jobs > 0 ? static_cast<unsigned>(opts.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(pairs.size()));

    std::vector<std::string> artifacts(2 * pairs.size());
    std::vector<std::exception_ptr> errors(pairs.size());
    std::size_t next = 0;
    std::mutex mu;

    auto worker = [&] {
        while (true) {
            std::size_t idx;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= pairs.size()) return;
                idx = next++;
            }
            const auto& [region, sector] = pairs[idx];
            try {
                log_line(LogLevel::Info, "training (" + region + ", " +
                                             std::string(sector_name(sector)) + ")");
                auto [model_path, history_path] =
                    train_pair(ds, region, sector, cfg, out_dir);
                artifacts[2 * idx] = model_path;
                artifacts[2 * idx + 1] = history_path;
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };

    std::vector<std::thread> threads;
    for (unsigned i = 0; i < jobs; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return artifacts;
}

inline nlohmann::json metrics_to_json(const MetricsReport& r) {
    nlohmann::json j;
    j["mse"] = r.mse;
    j["rmse"] = r.rmse;
    j["mae"] = r.mae;
    if (r.degenerate_variance)
        j["r2"] = nullptr;
    else
        j["r2"] = r.r2;
    j["degenerate_variance"] = r.degenerate_variance;
    j["n"] = r.n;
    j["units"] = metric_units_name(r.units);
    return j;
}

/// `evaluate`: one-step-ahead test metrics per pair, in scaled and original
/// units, from the checkpoints `train` wrote into the same directory.
inline std::vector<std::string> run_evaluate(const PipelineConfig& cfg,
                                             const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    EmissionDataset ds = load_dataset(cfg);
    auto pairs = select_pairs(ds, cfg);

    std::vector<std::string> artifacts;
    for (const auto& [region, sector] : pairs) {
        const std::string base = out_dir + "/" + pair_slug(region, sector);
        Checkpoint ckpt = load_checkpoint_file(base + "_model.json");
        if (!ckpt.config_hash.empty() && ckpt.config_hash != config_hash(cfg))
            log_line(LogLevel::Warn, base + "_model.json was trained under config " +
                                         ckpt.config_hash + ", current is " + config_hash(cfg));
        PreparedSeries ps = prepare_series(ds, region, sector, cfg);

        auto [preds_scaled, cache] = forward(ckpt.model, ps.test.inputs, false);
        (void)cache;
        const MetricsReport scaled =
            evaluate(ps.test.targets, preds_scaled, MetricUnits::Scaled);

        MetricsReport original;
        nlohmann::json j;
        j["config_hash"] = config_hash(cfg);
        j["seed"] = ckpt.config.seed;
        j["region"] = region;
        j["sector"] = sector_name(sector);
        j["scaled"] = metrics_to_json(scaled);
        if (!ps.scaler.degenerate()) {
            original = evaluate(inverse_scale(ps.test.targets, ps.scaler),
                                inverse_scale(preds_scaled, ps.scaler), MetricUnits::Original);
            j["original"] = metrics_to_json(original);
        } else {
            j["original"] = nullptr;
        }
        j["train_config"] = {{"batch_size", ckpt.config.batch_size},
                             {"dropout", ckpt.config.dropout},
                             {"epochs", ckpt.config.epochs},
                             {"lr", ckpt.config.lr},
                             {"seed", ckpt.config.seed}};
        write_json_file(base + "_metrics.json", j);
        artifacts.push_back(base + "_metrics.json");
    }
    return artifacts;
}

/// `forecast`: recursive closed-loop forecast per pair, inverse-scaled to
/// original units, dated one day past the end of the smoothed series.
inline std::vector<std::string> run_forecast(const PipelineConfig& cfg,
                                             const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    EmissionDataset ds = load_dataset(cfg);
    auto pairs = select_pairs(ds, cfg);

    std::vector<std::string> artifacts;
    for (const auto& [region, sector] : pairs) {
        const std::string base = out_dir + "/" + pair_slug(region, sector);
        Checkpoint ckpt = load_checkpoint_file(base + "_model.json");
        if (!ckpt.config_hash.empty() && ckpt.config_hash != config_hash(cfg))
            log_line(LogLevel::Warn, base + "_model.json was trained under config " +
                                         ckpt.config_hash + ", current is " + config_hash(cfg));
        PreparedSeries ps = prepare_series(ds, region, sector, cfg);

        const std::vector<double> window(ps.scaled.end() - ckpt.model.seq_len, ps.scaled.end());
        std::vector<double> horizon_scaled =
            predict_horizon(ckpt.model, window, cfg.horizon);
        std::vector<double> horizon_values = ps.scaler.degenerate()
                                                 ? horizon_scaled
                                                 : inverse_scale(horizon_scaled, ps.scaler);

        DailySeries forecast;
        for (int i = 0; i < cfg.horizon; ++i)
            forecast.dates.push_back(ps.dates.back().plus_days(i + 1));
        forecast.values = std::move(horizon_values);

        std::ostringstream out;
        out << fingerprint_comment(cfg);
        write_series_csv(forecast, out);
        write_text_file(base + "_forecast.csv", out.str());
        artifacts.push_back(base + "_forecast.csv");
    }
    return artifacts;
}

// ============================================================================
// Energy report
// ============================================================================

/// `energy`: read a JSON (cohesive + binding) or CSV (binding-only rows
/// `name,e_total,e_substrate,e_adsorbate`) input and emit a per-system
/// energies report.
inline std::vector<std::string> run_energy(const PipelineConfig& cfg,
                                           const std::string& input_path,
                                           const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json report;
    report["config_hash"] = config_hash(cfg);
    report["seed"] = cfg.seed;
    nlohmann::json systems = nlohmann::json::array();

    const bool is_csv = input_path.size() >= 4 &&
                        input_path.compare(input_path.size() - 4, 4, ".csv") == 0;
    if (is_csv) {
        std::ifstream in(input_path);
        if (!in) fail(ErrorCode::IoError, "cannot open " + input_path);
        std::vector<std::string> fields;
        std::size_t line_no = 0;
        if (!csv::read_record(in, fields, line_no))
            fail(ErrorCode::EmptyInput, input_path);
        while (csv::read_record(in, fields, line_no)) {
            if (fields.size() < 4)
                fail(ErrorCode::MalformedRow, "line " + std::to_string(line_no));
            BindingInput b;
            b.e_total = detail::parse_double("e_total", csv::trim(fields[1]));
            b.e_substrate = detail::parse_double("e_substrate", csv::trim(fields[2]));
            b.e_adsorbate = detail::parse_double("e_adsorbate", csv::trim(fields[3]));
            nlohmann::json s;
            s["name"] = csv::trim(fields[0]);
            s["binding_energy_ev"] = binding_energy(b);
            systems.push_back(s);
        }
    } else {
        std::ifstream in(input_path);
        if (!in) fail(ErrorCode::IoError, "cannot open " + input_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::MalformedRow, std::string("energy input: ") + e.what());
        }
        for (const auto& sys : j.at("systems")) {
            nlohmann::json s;
            s["name"] = sys.value("name", "system");
            if (sys.contains("cohesive")) {
                const auto& c = sys["cohesive"];
                CohesiveInput in_c;
                in_c.e_system = c.at("e_system").get<double>();
                in_c.n = c.value("n", 0);
                in_c.big_n = c.at("N").get<int>();
                for (const auto& con : c.at("constituents")) {
                    in_c.constituents.push_back({con.value("species", "?"),
                                                 con.at("energy").get<double>(),
                                                 con.at("count").get<int>()});
                }
                if (in_c.n == 0) in_c.n = constituent_atom_count(in_c);
                s["cohesive_energy_ev"] = cohesive_energy(in_c);
                s["atoms_declared"] = in_c.n;
                s["atoms_counted"] = constituent_atom_count(in_c);
                s["normalization"] = in_c.big_n;
                if (!counts_consistent(in_c)) {
                    s["count_mismatch"] = true;
                    log_line(LogLevel::Warn, s["name"].get<std::string>() +
                                                 ": declared atom total differs from "
                                                 "constituent counts");
                }
            }
            if (sys.contains("binding")) {
                const auto& b = sys["binding"];
                BindingInput in_b{b.at("e_total").get<double>(),
                                  b.at("e_substrate").get<double>(),
                                  b.at("e_adsorbate").get<double>()};
                s["binding_energy_ev"] = binding_energy(in_b);
            }
            systems.push_back(s);
        }
    }
    report["systems"] = systems;
    const std::string path = out_dir + "/energy_report.json";
    write_json_file(path, report);
    return {path};
}

// ============================================================================
// Aggregate report
// ============================================================================

/// `report`: clean + pca + train + evaluate + forecast, then a bundle JSON
/// with every artifact's content hash. No timestamps anywhere, so two runs
/// over the same config and data produce identical bytes.
inline std::vector<std::string> run_report(const PipelineConfig& cfg, const std::string& out_dir,
                                           const RunOptions& opts = {}) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> artifacts;
    auto append = [&](std::vector<std::string> more) {
        artifacts.insert(artifacts.end(), more.begin(), more.end());
    };
    append(run_clean(cfg, out_dir));
    append(run_pca(cfg, out_dir, opts));
    append(run_train(cfg, out_dir, opts));
    append(run_evaluate(cfg, out_dir));
    append(run_forecast(cfg, out_dir));

    std::sort(artifacts.begin(), artifacts.end());
    nlohmann::json bundle;
    bundle["config_hash"] = config_hash(cfg);
    bundle["seed"] = cfg.seed;
    bundle["config"] = canonical_config_text(cfg);
    nlohmann::json files = nlohmann::json::array();
    char buf[20];
    for (const auto& path : artifacts) {
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(hash_file(path)));
        files.push_back({{"file", std::filesystem::path(path).filename().string()},
                         {"fnv1a64", buf}});
    }
    bundle["artifacts"] = files;

    const std::string path = out_dir + "/report.json";
    write_json_file(path, bundle);
    artifacts.push_back(path);
    return artifacts;
}

} // namespace emicast

#endif // EMICAST_PIPELINE_HPP
