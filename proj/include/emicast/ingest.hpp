#ifndef EMICAST_INGEST_HPP
#define EMICAST_INGEST_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "emicast/core.hpp"
#include "emicast/date.hpp"

namespace emicast {

// ============================================================================
// Sectors
// ============================================================================

enum class Sector {
    Power = 0,
    Industry,
    GroundTransport,
    DomesticAviation,
    InternationalAviation,
};

inline constexpr int kSectorCount = 5;

inline constexpr std::array<Sector, kSectorCount> all_sectors() {
    return {Sector::Power, Sector::Industry, Sector::GroundTransport,
            Sector::DomesticAviation, Sector::InternationalAviation};
}

inline std::string_view sector_name(Sector s) {
    switch (s) {
        case Sector::Power: return "Power";
        case Sector::Industry: return "Industry";
        case Sector::GroundTransport: return "Ground Transport";
        case Sector::DomesticAviation: return "Domestic Aviation";
        case Sector::InternationalAviation: return "International Aviation";
    }
    return "?";
}

/// Case-insensitive match ignoring spaces and underscores, so
/// "ground_transport", "GroundTransport" and "Ground Transport" all agree.
inline std::optional<Sector> parse_sector(std::string_view text) {
    std::string key;
    key.reserve(text.size());
    for (char c : text) {
        if (c == ' ' || c == '_' || c == '\t') continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == "power") return Sector::Power;
    if (key == "industry") return Sector::Industry;
    if (key == "groundtransport") return Sector::GroundTransport;
    if (key == "domesticaviation") return Sector::DomesticAviation;
    if (key == "internationalaviation") return Sector::InternationalAviation;
    return std::nullopt;
}

// ============================================================================
// Domain types
// ============================================================================

struct EmissionRecord {
    std::string region;
    Sector sector = Sector::Power;
    Date date;
    double value = 0.0; // MtCO2 per day

    friend bool operator==(const EmissionRecord&, const EmissionRecord&) = default;
};

struct RecordKeyLess {
    bool operator()(const EmissionRecord& a, const EmissionRecord& b) const {
        if (a.region != b.region) return a.region < b.region;
        if (a.sector != b.sector) return a.sector < b.sector;
        return a.date < b.date;
    }
};

struct Provenance {
    std::string source;
    std::size_t row_count = 0;
};

/// Long-form daily dataset. Construction sorts by (region, sector, date) and
/// rejects duplicate keys; records are immutable afterwards.
class EmissionDataset {
public:
    EmissionDataset() = default;

    static EmissionDataset from_records(std::vector<EmissionRecord> records, Provenance provenance) {
        std::stable_sort(records.begin(), records.end(), RecordKeyLess{});
        for (std::size_t i = 1; i < records.size(); ++i) {
            const auto& a = records[i - 1];
            const auto& b = records[i];
            if (a.region == b.region && a.sector == b.sector && a.date == b.date)
                fail(ErrorCode::DuplicateKey,
                     "duplicate (region, sector, date) = (" + a.region + ", " +
                         std::string(sector_name(a.sector)) + ", " + a.date.iso() + ")");
        }
        EmissionDataset ds;
        ds.records_ = std::move(records);
        ds.provenance_ = std::move(provenance);
        return ds;
    }

    const std::vector<EmissionRecord>& records() const noexcept { return records_; }
    const Provenance& provenance() const noexcept { return provenance_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    std::vector<std::string> regions() const {
        std::vector<std::string> out;
        for (const auto& r : records_)
            if (out.empty() || out.back() != r.region) out.push_back(r.region);
        // records are region-sorted, so consecutive dedup is enough
        return out;
    }

    bool has_region(std::string_view region) const {
        for (const auto& r : records_)
            if (r.region == region) return true;
        return false;
    }

    std::vector<Sector> sectors_for(std::string_view region) const {
        std::vector<Sector> out;
        for (const auto& r : records_) {
            if (r.region != region) continue;
            if (out.empty() || out.back() != r.sector) out.push_back(r.sector);
        }
        return out;
    }

    /// (dates, values) for one (region, sector) pair, date-sorted.
    std::pair<std::vector<Date>, std::vector<double>> series(std::string_view region,
                                                             Sector sector) const {
        std::vector<Date> dates;
        std::vector<double> values;
        for (const auto& r : records_) {
            if (r.region == region && r.sector == sector) {
                dates.push_back(r.date);
                values.push_back(r.value);
            }
        }
        return {std::move(dates), std::move(values)};
    }

private:
    std::vector<EmissionRecord> records_;
    Provenance provenance_;
};

/// Dense numeric matrix with date row labels and sector column labels.
struct FeatureMatrix {
    Matrix data;
    std::vector<Date> row_labels;
    std::vector<std::string> col_labels;
};

struct DailySeries {
    std::vector<Date> dates;
    std::vector<double> values;
};

// ============================================================================
// CSV reading (RFC 4180)
// ============================================================================

namespace csv {

/// Reads one CSV record, honoring quoted fields with "" escapes and embedded
/// newlines. Returns false at end of stream. Lines starting with '#' outside
/// a record are treated as comments (used for artifact fingerprint lines).
inline bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
    fields.clear();
    int c = in.peek();
    while (c == '#') { // comment line
        std::string skip;
        std::getline(in, skip);
        ++line_no;
        c = in.peek();
    }
    if (c == EOF) return false;

    std::string field;
    bool in_quotes = false;
    bool any = false;
    ++line_no;
    while (true) {
        c = in.get();
        if (c == EOF) {
            if (!any && field.empty() && fields.empty()) return false;
            fields.push_back(std::move(field));
            return true;
        }
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_no;
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
    }
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

/// Quote a field if it contains a comma, quote or newline.
inline std::string quote_if_needed(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

} // namespace csv

// ============================================================================
// Operations
// ============================================================================

/// Parse a Carbon-Monitor-style CSV. The header row must contain (in any
/// order, case-insensitive) a region column ("region", "country" or
/// "country/region"), "date", "sector" and a value column ("value" or
/// "mtco2 per day").
inline EmissionDataset parse_emissions_csv(std::istream& in,
                                           std::string_view date_format = "%Y-%m-%d",
                                           std::string source_name = "<stream>") {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    if (!csv::read_record(in, fields, line_no))
        fail(ErrorCode::EmptyInput, "no header row in " + source_name);

    int col_region = -1, col_date = -1, col_sector = -1, col_value = -1;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = csv::lower(csv::trim(fields[i]));
        if (name == "region" || name == "country" || name == "country/region")
            col_region = static_cast<int>(i);
        else if (name == "date")
            col_date = static_cast<int>(i);
        else if (name == "sector")
            col_sector = static_cast<int>(i);
        else if (name == "value" || name == "mtco2 per day" || name == "mtco2/day")
            col_value = static_cast<int>(i);
    }
    if (col_region < 0 || col_date < 0 || col_sector < 0 || col_value < 0)
        fail(ErrorCode::MalformedRow,
             "header must name region/country, date, sector and value columns");

    std::vector<EmissionRecord> records;
    std::size_t data_rows = 0;
    while (csv::read_record(in, fields, line_no)) {
        if (fields.size() == 1 && csv::trim(fields[0]).empty()) continue; // blank line
        ++data_rows;
        const int needed = std::max({col_region, col_date, col_sector, col_value}) + 1;
        if (static_cast<int>(fields.size()) < needed)
            fail(ErrorCode::MalformedRow,
                 "line " + std::to_string(line_no) + ": expected at least " +
                     std::to_string(needed) + " fields, got " + std::to_string(fields.size()));

        EmissionRecord rec;
        rec.region = csv::trim(fields[col_region]);
        if (rec.region.empty())
            fail(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": empty region");

        const std::string date_text = csv::trim(fields[col_date]);
        auto date = parse_date(date_text, date_format);
        if (!date)
            fail(ErrorCode::MalformedRow,
                 "line " + std::to_string(line_no) + ": unparsable date '" + date_text + "'");
        rec.date = *date;

        const std::string sector_text = csv::trim(fields[col_sector]);
        auto sector = parse_sector(sector_text);
        if (!sector)
            fail(ErrorCode::UnknownSector,
                 "line " + std::to_string(line_no) + ": '" + sector_text + "'");
        rec.sector = *sector;

        const std::string value_text = csv::trim(fields[col_value]);
        char* end = nullptr;
        rec.value = std::strtod(value_text.c_str(), &end);
        if (value_text.empty() || end != value_text.c_str() + value_text.size() ||
            !std::isfinite(rec.value) || rec.value < 0.0)
            fail(ErrorCode::MalformedRow,
                 "line " + std::to_string(line_no) + ": bad value '" + value_text +
                     "' (must be a finite non-negative number)");
        records.push_back(std::move(rec));
    }
    if (data_rows == 0)
        fail(ErrorCode::EmptyInput, "no data rows in " + source_name);

    return EmissionDataset::from_records(std::move(records), {std::move(source_name), data_rows});
}

inline EmissionDataset parse_emissions_csv_file(const std::string& path,
                                                std::string_view date_format = "%Y-%m-%d") {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    return parse_emissions_csv(in, date_format, path);
}

/// Keep records with start <= date <= end whose year is not excluded.
inline EmissionDataset filter_period(const EmissionDataset& ds, Date start, Date end,
                                     const std::set<int>& excluded_years = {}) {
    if (start > end) fail(ErrorCode::InvalidRange, "start " + start.iso() + " > end " + end.iso());
    std::vector<EmissionRecord> kept;
    for (const auto& r : ds.records()) {
        if (r.date < start || r.date > end) continue;
        if (excluded_years.count(r.date.year())) continue;
        kept.push_back(r);
    }
    return EmissionDataset::from_records(std::move(kept), ds.provenance());
}

/// One column per sector present for the region (fixed enum order), one row
/// per date. All sectors must cover the same dates.
inline FeatureMatrix pivot_sector_matrix(const EmissionDataset& ds, std::string_view region) {
    if (!ds.has_region(region))
        fail(ErrorCode::UnknownRegion, std::string(region));

    std::vector<Sector> present = ds.sectors_for(region);
    std::vector<std::vector<Date>> dates(present.size());
    std::vector<std::vector<double>> values(present.size());
    for (std::size_t s = 0; s < present.size(); ++s) {
        auto [d, v] = ds.series(region, present[s]);
        dates[s] = std::move(d);
        values[s] = std::move(v);
    }
    for (std::size_t s = 1; s < present.size(); ++s) {
        if (dates[s] != dates[0])
            fail(ErrorCode::RaggedDates, std::string(sector_name(present[s])));
    }

    FeatureMatrix fm;
    fm.row_labels = dates.empty() ? std::vector<Date>{} : dates[0];
    fm.data = Matrix(static_cast<int>(fm.row_labels.size()), static_cast<int>(present.size()));
    for (std::size_t s = 0; s < present.size(); ++s) {
        fm.col_labels.emplace_back(sector_name(present[s]));
        for (std::size_t r = 0; r < values[s].size(); ++r)
            fm.data(static_cast<int>(r), static_cast<int>(s)) = values[s][r];
    }
    return fm;
}

/// Daily totals across all sectors of a region.
inline DailySeries aggregate_total(const EmissionDataset& ds, std::string_view region) {
    if (!ds.has_region(region))
        fail(ErrorCode::UnknownRegion, std::string(region));

    DailySeries out;
    // records are (region, sector, date)-sorted; accumulate via ordered map
    std::vector<std::pair<Date, double>> acc;
    for (const auto& r : ds.records()) {
        if (r.region != region) continue;
        acc.emplace_back(r.date, r.value);
    }
    std::stable_sort(acc.begin(), acc.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [date, value] : acc) {
        if (!out.dates.empty() && out.dates.back() == date) {
            out.values.back() += value;
        } else {
            out.dates.push_back(date);
            out.values.push_back(value);
        }
    }
    return out;
}

/// Canonical re-emission: `region,date,sector,value` header, ISO-8601 dates,
/// 6-decimal fixed-point values, records in key order.
inline void write_canonical_csv(const EmissionDataset& ds, std::ostream& out) {
    out << "region,date,sector,value\n";
    char buf[32];
    for (const auto& r : ds.records()) {
        std::snprintf(buf, sizeof(buf), "%.6f", r.value);
        out << csv::quote_if_needed(r.region) << ',' << r.date.iso() << ','
            << sector_name(r.sector) << ',' << buf << '\n';
    }
}

inline void write_series_csv(const DailySeries& s, std::ostream& out) {
    out << "date,value\n";
    char buf[32];
    for (std::size_t i = 0; i < s.dates.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f", s.values[i]);
        out << s.dates[i].iso() << ',' << buf << '\n';
    }
}

} // namespace emicast

#endif // EMICAST_INGEST_HPP
