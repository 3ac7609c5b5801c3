#pragma once

// Resolution of command-line settings into validated domain objects. All
// BathSpec and PulseSequence rules are applied here so bad input is rejected
// before any computation starts.

#include <charconv>
#include <istream>
#include <utility>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dephasing/bath.hpp"
#include "dephasing/figures.hpp"
#include "dephasing/measures.hpp"
#include "dephasing/pulse_sequence.hpp"
#include "dephasing/sweep.hpp"

namespace dephasing {

struct RunConfig {
    std::optional<double> s;
    double alpha{1.0};
    std::optional<double> dt;
    std::optional<std::string> pulse_times;
    std::optional<double> horizon;
    std::optional<double> t_final;
    std::optional<double> blp_horizon;
    bool free{false};
    MeasureSelection select{false, false, false};
    std::size_t grid{2000};

    bool any_measure() const { return select.blp || select.efficiency || select.stationary; }
};

inline double parse_number(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return v;
}

/// "a,b,c" or an inclusive range "lo:hi:step".
inline std::vector<double> parse_list(std::string_view text) {
    if (text.find(':') != std::string_view::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string_view::npos) throw std::invalid_argument("range must be lo:hi:step");
        return linear_grid(parse_number(text.substr(0, c1)), parse_number(text.substr(c1 + 1, c2 - c1 - 1)),
                           parse_number(text.substr(c2 + 1)));
    }
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        out.push_back(parse_number(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Comma-separated pulse counts; "max" means as many as fit before t_final.
inline std::vector<PulseCount> parse_counts(std::string_view text) {
    std::vector<PulseCount> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        auto field = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        if (field == "max") {
            out.emplace_back();
        } else {
            const double v = parse_number(field);
            if (!(v >= 0.0) || v != std::floor(v)) throw std::invalid_argument("pulse counts must be non-negative integers");
            out.emplace_back(static_cast<std::size_t>(v));
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Flat configuration file: one `key = value` per line, keys named like the
/// command-line flags (leading dashes optional), '#' starts a comment. Returns
/// the equivalent flag list; boolean flags take true/false.
inline std::vector<std::string> config_to_flags(std::istream& in) {
    std::vector<std::string> flags;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string_view v) {
        while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
        while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r')) v.remove_suffix(1);
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v(line);
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        auto key = trim(v.substr(0, eq));
        auto value = trim(v.substr(eq + 1));
        while (!key.empty() && key.front() == '-') key.remove_prefix(1);
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        const std::string flag = "--" + std::string(key);
        if (value == "true") {
            flags.push_back(flag);
        } else if (value == "false") {
            continue;
        } else {
            flags.push_back(flag);
            flags.emplace_back(value);
        }
    }
    return flags;
}

inline BathSpec resolve_bath(const RunConfig& c) {
    if (!c.s) throw std::invalid_argument("--s is required");
    return BathSpec(*c.s, c.alpha);
}

/// Pulse train described by the config. --dt fills [0, t_final] (or the
/// horizon); --pulse-times are taken verbatim; neither means free evolution.
inline PulseSequence resolve_sequence(const RunConfig& c) {
    if (c.dt && c.pulse_times) throw std::invalid_argument("--dt and --pulse-times are mutually exclusive");
    if (c.free && (c.dt || c.pulse_times)) throw std::invalid_argument("--free excludes --dt and --pulse-times");
    if (c.horizon && !(*c.horizon > 0.0)) throw std::invalid_argument("--horizon must be positive");
    if (c.t_final && !(*c.t_final > 0.0)) throw std::invalid_argument("--t-final must be positive");
    const std::optional<double> window = c.t_final ? c.t_final : c.horizon;
    if (c.dt) {
        if (!window) throw std::invalid_argument("--dt needs --t-final or --horizon");
        auto seq = periodic_sequence(*c.dt, *window);
        const double h = std::max(seq.horizon(), c.horizon.value_or(0.0));
        return PulseSequence({seq.times().begin(), seq.times().end()}, h);
    }
    if (c.pulse_times) {
        auto times = parse_list(*c.pulse_times);
        const double last = times.empty() ? 0.0 : times.back();
        const double h = std::max({last, c.horizon.value_or(0.0), c.t_final.value_or(0.0)});
        return PulseSequence(std::move(times), h);
    }
    return PulseSequence({}, std::max(c.horizon.value_or(0.0), c.t_final.value_or(0.0)));
}

}  // namespace dephasing
