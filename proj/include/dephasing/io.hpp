#pragma once

// Tabular serialisation shared by the command-line tools: CSV with a units
// comment and 17-significant-digit values, and a JSON mirror using the same
// column names. Missing values are NaN in memory, empty in CSV, null in JSON.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dephasing/profile.hpp"
#include "dephasing/sweep.hpp"

namespace dephasing::io {

inline constexpr std::string_view kUnitsComment = "units: omega_c = 1 (times in 1/omega_c, frequencies in omega_c)";

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw std::out_of_range("Table: no column named " + std::string(name));
    }
};

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline std::string format_double(double v) {
    if (std::isnan(v)) return {};
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view field) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    if (field.empty()) return kMissing;
    double v = 0.0;
    const auto r = std::from_chars(field.data(), field.data() + field.size(), v);
    if (r.ec != std::errc() || r.ptr != field.data() + field.size())
        throw std::runtime_error("CSV: malformed number '" + std::string(field) + "'");
    return v;
}

inline void write_csv(std::ostream& out, const Table& table) {
    out << "# " << kUnitsComment << '\n';
    for (const auto& c : table.comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline Table read_csv(std::istream& in) {
    Table table;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view c(line);
            c.remove_prefix(c.size() > 1 && c[1] == ' ' ? 2 : 1);
            if (c != kUnitsComment) table.comments.emplace_back(c);
            continue;
        }
        const auto fields = split_fields(line);
        if (!header) {
            for (auto f : fields) table.columns.emplace_back(f);
            header = true;
            continue;
        }
        if (fields.size() != table.columns.size()) throw std::runtime_error("CSV: row width does not match header");
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) row.push_back(parse_double(f));
        table.rows.push_back(std::move(row));
    }
    if (!header) throw std::runtime_error("CSV: missing header");
    return table;
}

inline nlohmann::json to_json(const Table& table) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json rec = nlohmann::json::object();
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (std::isnan(row[i]))
                rec[table.columns[i]] = nullptr;
            else
                rec[table.columns[i]] = row[i];
        }
        records.push_back(std::move(rec));
    }
    nlohmann::json doc = {{"units", kUnitsComment}, {"columns", table.columns}, {"records", std::move(records)}};
    if (!table.comments.empty()) doc["comments"] = table.comments;
    return doc;
}

inline void write_json(std::ostream& out, const Table& table) {
    out << to_json(table).dump(2) << '\n';
}

inline Table trajectory_table(const DecoherenceProfile& p) {
    Table t;
    t.columns = {"t", "gamma", "rate_left", "rate_right", "coherence"};
    t.rows.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        t.rows.push_back({p.t[i], p.gamma[i], p.rate_left[i], p.rate_right[i], p.coherence[i]});
    return t;
}

inline const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = {"s", "dt", "n_pulses", "t_final", "blp", "efficiency", "stationary"};
    return cols;
}

inline std::vector<double> sweep_row(const SweepRecord& r) {
    const auto val = [](const std::optional<double>& v) { return v.value_or(kMissing); };
    return {r.s, r.dt, static_cast<double>(r.n_pulses), r.t_final,
            val(r.report.blp), val(r.report.efficiency), val(r.report.stationary_coherence)};
}

inline Table sweep_table(const SweepResult& result) {
    Table t;
    t.columns = sweep_columns();
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const auto& r = result.records[i];
        t.rows.push_back(sweep_row(r));
        if (r.error) t.comments.push_back("error in row " + std::to_string(i + 1) + ": " + *r.error);
    }
    for (const auto& o : result.optima) {
        t.comments.push_back("optimum dt=" + format_double(o.dt) + " n_pulses=" + std::to_string(o.n_pulses) +
                             " t_final=" + format_double(o.t_final) + ": s=" + format_double(o.s) +
                             " stationary=" + format_double(o.value));
    }
    return t;
}

/// JSON for a single configuration, mirroring the sweep column names.
inline nlohmann::json record_json(const SweepRecord& r) {
    nlohmann::json j = nlohmann::json::object();
    const auto row = sweep_row(r);
    const auto& cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (std::isnan(row[i]))
            j[cols[i]] = nullptr;
        else
            j[cols[i]] = row[i];
    }
    if (r.report.blp_truncation) j["blp_truncation"] = *r.report.blp_truncation;
    if (r.report.blp) {
        nlohmann::json intervals = nlohmann::json::array();
        for (const auto& iv : r.report.backflow_intervals) intervals.push_back({iv.start, iv.end});
        j["backflow_intervals"] = std::move(intervals);
    }
    if (r.error) j["error"] = *r.error;
    return j;
}

/// Sweep output in JSON: the table envelope with one record_json per point.
inline nlohmann::json sweep_json(const SweepResult& result) {
    const auto table = sweep_table(result);
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : result.records) records.push_back(record_json(r));
    nlohmann::json doc = {{"units", kUnitsComment}, {"columns", table.columns}, {"records", std::move(records)}};
    if (!table.comments.empty()) doc["comments"] = table.comments;
    return doc;
}

}  // namespace dephasing::io
