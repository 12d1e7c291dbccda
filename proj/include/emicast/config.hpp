#ifndef EMICAST_CONFIG_HPP
#define EMICAST_CONFIG_HPP

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emicast/core.hpp"
#include "emicast/date.hpp"
#include "emicast/ingest.hpp"
#include "emicast/lstm.hpp"

namespace emicast {

/// Per-(region, sector) training overrides; unset fields fall back to the
/// pipeline defaults.
struct TrainOverride {
    std::optional<int> batch_size;
    std::optional<double> dropout;
    std::optional<int> epochs;
    std::optional<double> lr;
    std::optional<std::uint64_t> seed;
};

enum class PcaInput { Raw, Cleaned, Scaled };

inline const char* pca_input_name(PcaInput m) {
    switch (m) {
        case PcaInput::Raw: return "raw";
        case PcaInput::Cleaned: return "cleaned";
        case PcaInput::Scaled: return "scaled";
    }
    return "?";
}

/// Declarative pipeline configuration. File grammar: one `key = value` per
/// line, `#` comments, blank lines ignored. Keys are listed in the README;
/// per-pair overrides use `override.<region>.<sector>.<field>` (the region
/// label must not contain '.').
struct PipelineConfig {
    std::string data_path;
    std::string date_format = "%Y-%m-%d";
    std::vector<std::string> regions;  // empty = all present
    std::vector<Sector> sectors;       // empty = all five
    std::optional<Date> period_start;
    std::optional<Date> period_end;
    std::set<int> excluded_years{2020};

    double zscore_threshold = 3.0;
    int ma_window = 7;
    int seq_len = 30;
    double train_fraction = 0.8;

    int units = 50;
    int layers = 3;
    int batch_size = 32;
    double dropout = 0.16;
    int epochs = 100;
    double lr = 1e-3;
    std::uint64_t seed = 42;
    std::optional<double> clip_norm;
    double validation_fraction = 0.1;
    int horizon = 30;

    bool pca_center = true;
    PcaInput pca_input = PcaInput::Scaled;

    std::map<std::pair<std::string, std::string>, TrainOverride> overrides;

    TrainConfig train_config_for(const std::string& region, Sector sector) const {
        TrainConfig cfg;
        cfg.batch_size = batch_size;
        cfg.epochs = epochs;
        cfg.dropout = dropout;
        cfg.lr = lr;
        cfg.seed = seed;
        cfg.clip_norm = clip_norm;
        cfg.validation_fraction = validation_fraction;
        auto it = overrides.find({region, std::string(sector_name(sector))});
        if (it != overrides.end()) {
            const TrainOverride& o = it->second;
            if (o.batch_size) cfg.batch_size = *o.batch_size;
            if (o.dropout) cfg.dropout = *o.dropout;
            if (o.epochs) cfg.epochs = *o.epochs;
            if (o.lr) cfg.lr = *o.lr;
            if (o.seed) cfg.seed = *o.seed;
        }
        return cfg;
    }
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(csv::trim(s.substr(begin, i - begin)));
            begin = i + 1;
        }
    }
    return out;
}

inline int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::BadConfig, key + ": expected integer, got '" + value + "'");
    }
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::BadConfig, key + ": expected number, got '" + value + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::BadConfig, key + ": expected unsigned integer, got '" + value + "'");
    }
}

inline Date parse_config_date(const std::string& key, const std::string& value) {
    auto d = parse_date(value);
    if (!d) fail(ErrorCode::BadConfig, key + ": expected ISO date, got '" + value + "'");
    return *d;
}

} // namespace detail

/// Apply one `key = value` assignment. Shared by the file parser and the CLI
/// `--set` flag so both obey the same grammar (flags win by being applied
/// after the file).
inline void config_set(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_int;
    using detail::parse_double;
    using detail::parse_u64;

    if (key == "data") {
        cfg.data_path = value;
    } else if (key == "date_format") {
        cfg.date_format = value;
    } else if (key == "regions") {
        cfg.regions.clear();
        if (!value.empty())
            for (auto& r : detail::split(value, ','))
                if (!r.empty()) cfg.regions.push_back(r);
    } else if (key == "sectors") {
        cfg.sectors.clear();
        if (!value.empty()) {
            for (auto& s : detail::split(value, ',')) {
                if (s.empty()) continue;
                auto sector = parse_sector(s);
                if (!sector) fail(ErrorCode::BadConfig, "sectors: unknown sector '" + s + "'");
                cfg.sectors.push_back(*sector);
            }
        }
    } else if (key == "period.start") {
        cfg.period_start = detail::parse_config_date(key, value);
    } else if (key == "period.end") {
        cfg.period_end = detail::parse_config_date(key, value);
    } else if (key == "excluded_years") {
        cfg.excluded_years.clear();
        if (!value.empty())
            for (auto& y : detail::split(value, ','))
                if (!y.empty()) cfg.excluded_years.insert(parse_int(key, y));
    } else if (key == "zscore_threshold") {
        cfg.zscore_threshold = parse_double(key, value);
    } else if (key == "ma_window") {
        cfg.ma_window = parse_int(key, value);
    } else if (key == "seq_len") {
        cfg.seq_len = parse_int(key, value);
    } else if (key == "train_fraction") {
        cfg.train_fraction = parse_double(key, value);
    } else if (key == "units") {
        cfg.units = parse_int(key, value);
    } else if (key == "layers") {
        cfg.layers = parse_int(key, value);
    } else if (key == "batch_size") {
        cfg.batch_size = parse_int(key, value);
    } else if (key == "dropout") {
        cfg.dropout = parse_double(key, value);
    } else if (key == "epochs") {
        cfg.epochs = parse_int(key, value);
    } else if (key == "lr") {
        cfg.lr = parse_double(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "clip_norm") {
        if (value.empty() || value == "off")
            cfg.clip_norm.reset();
        else
            cfg.clip_norm = parse_double(key, value);
    } else if (key == "validation_fraction") {
        cfg.validation_fraction = parse_double(key, value);
    } else if (key == "horizon") {
        cfg.horizon = parse_int(key, value);
    } else if (key == "pca.center") {
        if (value == "true") cfg.pca_center = true;
        else if (value == "false") cfg.pca_center = false;
        else fail(ErrorCode::BadConfig, "pca.center: expected true/false, got '" + value + "'");
    } else if (key == "pca.input") {
        if (value == "raw") cfg.pca_input = PcaInput::Raw;
        else if (value == "cleaned") cfg.pca_input = PcaInput::Cleaned;
        else if (value == "scaled") cfg.pca_input = PcaInput::Scaled;
        else fail(ErrorCode::BadConfig, "pca.input: expected raw/cleaned/scaled, got '" + value + "'");
    } else if (key.rfind("override.", 0) == 0) {
        // override.<region>.<sector>.<field>; region must not contain '.'
        const std::string rest = key.substr(9);
        const std::size_t d1 = rest.find('.');
        const std::size_t d2 = rest.rfind('.');
        if (d1 == std::string::npos || d2 == d1)
            fail(ErrorCode::BadConfig, "override key must be override.<region>.<sector>.<field>");
        const std::string region = rest.substr(0, d1);
        const std::string sector_text = rest.substr(d1 + 1, d2 - d1 - 1);
        const std::string field = rest.substr(d2 + 1);
        auto sector = parse_sector(sector_text);
        if (!sector)
            fail(ErrorCode::BadConfig, "override: unknown sector '" + sector_text + "'");
        TrainOverride& o = cfg.overrides[{region, std::string(sector_name(*sector))}];
        if (field == "batch_size") o.batch_size = parse_int(key, value);
        else if (field == "dropout") o.dropout = parse_double(key, value);
        else if (field == "epochs") o.epochs = parse_int(key, value);
        else if (field == "lr") o.lr = parse_double(key, value);
        else if (field == "seed") o.seed = parse_u64(key, value);
        else fail(ErrorCode::BadConfig, "override: unknown field '" + field + "'");
    } else {
        fail(ErrorCode::BadConfig, "unknown config key '" + key + "'");
    }
}

inline PipelineConfig parse_config(std::istream& in) {
    PipelineConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = csv::trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::BadConfig,
                 "line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = csv::trim(stripped.substr(0, eq));
        const std::string value = csv::trim(stripped.substr(eq + 1));
        config_set(cfg, key, value);
    }
    return cfg;
}

inline PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open config " + path);
    return parse_config(in);
}

/// Canonical key-sorted serialization; the config hash is FNV-1a over this
/// text, so semantically equal configs hash equally regardless of file
/// formatting.
inline std::string canonical_config_text(const PipelineConfig& cfg) {
    std::ostringstream out;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "batch_size=" << cfg.batch_size << '\n';
    out << "clip_norm=" << (cfg.clip_norm ? num(*cfg.clip_norm) : "off") << '\n';
    out << "data=" << cfg.data_path << '\n';
    out << "date_format=" << cfg.date_format << '\n';
    out << "dropout=" << num(cfg.dropout) << '\n';
    out << "epochs=" << cfg.epochs << '\n';
    out << "excluded_years=";
    bool first = true;
    for (int y : cfg.excluded_years) {
        if (!first) out << ',';
        out << y;
        first = false;
    }
    out << '\n';
    out << "horizon=" << cfg.horizon << '\n';
    out << "layers=" << cfg.layers << '\n';
    out << "lr=" << num(cfg.lr) << '\n';
    out << "ma_window=" << cfg.ma_window << '\n';
    for (const auto& [key, o] : cfg.overrides) {
        const std::string prefix = "override." + key.first + "." + key.second + ".";
        if (o.batch_size) out << prefix << "batch_size=" << *o.batch_size << '\n';
        if (o.dropout) out << prefix << "dropout=" << num(*o.dropout) << '\n';
        if (o.epochs) out << prefix << "epochs=" << *o.epochs << '\n';
        if (o.lr) out << prefix << "lr=" << num(*o.lr) << '\n';
        if (o.seed) out << prefix << "seed=" << *o.seed << '\n';
    }
    out << "pca.center=" << (cfg.pca_center ? "true" : "false") << '\n';
    out << "pca.input=" << pca_input_name(cfg.pca_input) << '\n';
    out << "period.end=" << (cfg.period_end ? cfg.period_end->iso() : "") << '\n';
    out << "period.start=" << (cfg.period_start ? cfg.period_start->iso() : "") << '\n';
    out << "regions=";
    first = true;
    for (const auto& r : cfg.regions) {
        if (!first) out << ',';
        out << r;
        first = false;
    }
    out << '\n';
    out << "sectors=";
    first = true;
    for (Sector s : cfg.sectors) {
        if (!first) out << ',';
        out << sector_name(s);
        first = false;
    }
    out << '\n';
    out << "seed=" << cfg.seed << '\n';
    out << "seq_len=" << cfg.seq_len << '\n';
    out << "train_fraction=" << num(cfg.train_fraction) << '\n';
    out << "units=" << cfg.units << '\n';
    out << "validation_fraction=" << num(cfg.validation_fraction) << '\n';
    out << "zscore_threshold=" << num(cfg.zscore_threshold) << '\n';
    return out.str();
}

inline std::string config_hash(const PipelineConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config_text(cfg))));
    return buf;
}

} // namespace emicast

#endif // EMICAST_CONFIG_HPP
