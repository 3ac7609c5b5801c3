// Command-line front end: trajectories, measures, sweeps, figure datasets,
// optimal Ohmicity and the self-validation suite.
//
// Exit codes: 0 success, 1 validation failure, 2 bad arguments, 3 I/O failure.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dephasing/dephasing.hpp"
#include "dephasing/run_config.hpp"

namespace {

using namespace dephasing;

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kBadArguments = 2, kIoFailure = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputSpec {
    std::string path{"-"};
    std::string format;
};

void with_output(const OutputSpec& out, const std::function<void(std::ostream&)>& write) {
    if (out.path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(out.path);
    if (!file) throw IoError("cannot open '" + out.path + "' for writing");
    write(file);
    file.flush();
    if (!file) throw IoError("failed writing '" + out.path + "'");
}

void write_table(const OutputSpec& out, const io::Table& table) {
    with_output(out, [&](std::ostream& os) {
        if (out.format == "json")
            io::write_json(os, table);
        else
            io::write_csv(os, table);
    });
}

void write_sweep(const OutputSpec& out, const SweepResult& result) {
    if (out.format == "json") {
        with_output(out, [&](std::ostream& os) { os << io::sweep_json(result).dump(2) << '\n'; });
    } else {
        write_table(out, io::sweep_table(result));
    }
}

void add_output(CLI::App* cmd, OutputSpec& out, const std::string& default_format,
                std::vector<std::string> formats = {"csv", "json"}) {
    out.format = default_format;
    cmd->add_option("--out", out.path, "Output file ('-' for stdout)");
    cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember(std::move(formats)));
    // Consumed by expand_config before parsing; declared here for --help.
    cmd->add_option("--config", "Flat key = value file mirroring the flag names; flags override it");
}

void add_bath(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--s", cfg.s, "Ohmicity parameter s > 0");
    cmd->add_option("--alpha", cfg.alpha, "Coupling constant")->capture_default_str();
}

void add_pulses(CLI::App* cmd, RunConfig& cfg) {
    auto* dt = cmd->add_option("--dt", cfg.dt, "Periodic pulse spacing");
    auto* times = cmd->add_option("--pulse-times", cfg.pulse_times, "Explicit pulse instants 't1,t2,...'");
    dt->excludes(times);
    auto* free = cmd->add_flag("--free", cfg.free, "Free evolution (no pulses)");
    free->excludes(dt)->excludes(times);
    cmd->add_option("--horizon", cfg.horizon, "Final evaluation time");
    cmd->add_option("--t-final", cfg.t_final, "Duration of the pulse train / efficiency window");
}

void add_selection(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_flag("--blp", cfg.select.blp, "Trace-distance non-Markovianity");
    cmd->add_flag("--efficiency", cfg.select.efficiency, "Decoupling efficiency (time-averaged coherence)");
    cmd->add_flag("--stationary", cfg.select.stationary, "Stationary coherence");
}

MeasureSelection selection_or_all(const RunConfig& cfg, bool have_window) {
    if (cfg.any_measure()) return cfg.select;
    return {true, have_window, true};
}

int cmd_trajectory(const RunConfig& cfg, const OutputSpec& out) {
    const auto spec = resolve_bath(cfg);
    const auto seq = resolve_sequence(cfg);
    if (!(seq.horizon() > 0.0)) throw std::invalid_argument("trajectory needs --horizon or --t-final");
    GridSpec grid;
    grid.points = cfg.grid;
    auto table = io::trajectory_table(profile(spec, seq, grid));
    write_table(out, table);
    return kOk;
}

SweepRecord measure_record(const RunConfig& cfg) {
    const auto spec = resolve_bath(cfg);
    const auto seq = resolve_sequence(cfg);
    const std::optional<double> window = cfg.t_final ? cfg.t_final : cfg.horizon;
    MeasureOptions opts;
    opts.select = selection_or_all(cfg, window.has_value());
    if (opts.select.efficiency && !window) throw std::invalid_argument("--efficiency needs --t-final or --horizon");
    opts.t_final = window;
    opts.blp_horizon = cfg.blp_horizon;
    if (opts.blp_horizon && !(*opts.blp_horizon > 0.0)) throw std::invalid_argument("--blp-horizon must be positive");
    SweepRecord rec;
    rec.s = spec.s();
    rec.dt = cfg.dt.value_or(cfg.pulse_times ? io::kMissing : 0.0);
    rec.n_pulses = seq.size();
    rec.t_final = window.value_or(io::kMissing);
    rec.report = evaluate_measures(spec, seq, opts);
    rec.report.t_final = rec.t_final;
    return rec;
}

int cmd_measure(const RunConfig& cfg, const OutputSpec& out) {
    SweepResult result;
    result.records.push_back(measure_record(cfg));
    if (result.records.front().report.stationary_coherence) result.optima = slice_optima(result.records, 1);
    write_sweep(out, result);
    return kOk;
}

struct SweepArgs {
    std::string s;
    std::string dt;
    std::string n{"max"};
    std::string t_final;
    std::size_t workers{0};
    double blp_tail{kDefaultBlpTail};
};

int cmd_sweep(const RunConfig& cfg, const SweepArgs& args, const OutputSpec& out) {
    SweepSpec sw;
    if (args.s.empty()) throw std::invalid_argument("--s is required");
    if (args.t_final.empty()) throw std::invalid_argument("--t-final is required");
    sw.s_grid = parse_list(args.s);
    sw.t_final = parse_list(args.t_final);
    if (cfg.free) {
        if (!args.dt.empty()) throw std::invalid_argument("--free excludes --dt");
        sw.n_values = {PulseCount{0}};
    } else {
        if (args.dt.empty()) throw std::invalid_argument("--dt is required unless --free");
        sw.dt_grid = parse_list(args.dt);
        sw.n_values = parse_counts(args.n);
    }
    sw.select = cfg.any_measure() ? cfg.select : MeasureSelection{};
    sw.alpha = cfg.alpha;
    sw.blp_tail = args.blp_tail;
    sw.workers = args.workers;
    for (double s : sw.s_grid) (void)BathSpec(s, cfg.alpha);
    write_sweep(out, run_sweep(sw));
    return kOk;
}

int cmd_figure(const std::string& id, std::size_t workers, const OutputSpec& out) {
    const auto fig = parse_figure_id(id);
    write_table(out, figure_dataset(fig, workers));
    return kOk;
}

struct OptimalArgs {
    std::optional<double> dt;
    std::size_t n{0};
    bool free{false};
    double s_min{1.0};
    double s_max{8.0};
    double threshold{kStationaryThreshold};
    double alpha{1.0};
};

int cmd_optimal_s(const OptimalArgs& a, const OutputSpec& out) {
    const std::size_t n = a.free ? 0 : a.n;
    if (n > 0 && !a.dt) throw std::invalid_argument("--dt is required when pulses are applied");
    OptimalSOptions opts;
    opts.alpha = a.alpha;
    if (!(a.alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
    const auto best = optimal_s(a.dt.value_or(0.0), n, {a.s_min, a.s_max}, a.threshold, opts);
    io::Table t;
    t.columns = {"dt", "n_pulses", "s_star", "coherence", "tie"};
    t.rows.push_back({n == 0 ? 0.0 : *a.dt, static_cast<double>(n), best ? best->s : io::kMissing,
                      best ? best->coherence : io::kMissing, best ? (best->tie ? 1.0 : 0.0) : io::kMissing});
    if (!best) t.comments.push_back("no optimum above threshold " + io::format_double(a.threshold));
    write_table(out, t);
    return kOk;
}

int cmd_validate(double defect, const OutputSpec& out) {
    ValidationOptions opts;
    opts.gamma0_defect = defect;
    const auto report = run_validation(opts);
    with_output(out, [&](std::ostream& os) {
        if (out.format == "json") {
            nlohmann::json checks = nlohmann::json::array();
            for (const auto& c : report.checks)
                checks.push_back({{"name", c.name}, {"max_error", c.max_error}, {"tolerance", c.tolerance},
                                  {"passed", c.passed}});
            os << nlohmann::json{{"passed", report.passed()}, {"checks", checks}}.dump(2) << '\n';
            return;
        }
        for (const auto& c : report.checks) {
            os << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  max_error=" << io::format_double(c.max_error)
               << "  tolerance=" << io::format_double(c.tolerance) << '\n';
        }
    });
    return report.passed() ? kOk : kValidationFailure;
}

/// Replaces `--config FILE` with the flags the file describes, placed directly
/// after the subcommand so that explicit flags (parsed later) take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!path) return args;
    std::ifstream file(*path);
    if (!file) throw IoError("cannot read config file '" + *path + "'");
    const auto injected = config_to_flags(file);
    const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
    const auto at = sub == args.end() ? args.end() : sub + 1;
    args.insert(at, injected.begin(), injected.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pure-dephasing qubit dynamics under dynamical decoupling in Ohmic-class baths"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    RunConfig cfg;
    OutputSpec traj_out;
    OutputSpec meas_out;
    OutputSpec sweep_out;
    OutputSpec fig_out;
    OutputSpec opt_out;
    OutputSpec val_out;

    auto* traj = app.add_subcommand("trajectory", "Sample Gamma(t), rates and coherence along a pulse train");
    add_bath(traj, cfg);
    add_pulses(traj, cfg);
    traj->add_option("--grid", cfg.grid, "Uniform samples over the horizon")->capture_default_str();
    add_output(traj, traj_out, "csv");

    auto* meas = app.add_subcommand("measure", "Non-Markovianity, efficiency and stationary coherence");
    add_bath(meas, cfg);
    add_pulses(meas, cfg);
    add_selection(meas, cfg);
    meas->add_option("--blp-horizon", cfg.blp_horizon, "Integration horizon for the non-Markovianity (default t_f + 50)");
    add_output(meas, meas_out, "json");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Evaluate measures over (s, dt, n, t_final) grids");
    sweep->add_option("--s", sweep_args.s, "Ohmicity values 'a,b,c' or 'lo:hi:step'");
    sweep->add_option("--alpha", cfg.alpha, "Coupling constant")->capture_default_str();
    sweep->add_option("--dt", sweep_args.dt, "Pulse spacings");
    sweep->add_option("--n", sweep_args.n, "Pulse counts, or 'max' to fill t_final")->capture_default_str();
    sweep->add_option("--t-final", sweep_args.t_final, "Pulse-train durations");
    sweep->add_flag("--free", cfg.free, "Free evolution only");
    sweep->add_option("--blp-tail", sweep_args.blp_tail, "Non-Markovianity horizon beyond the last pulse")
        ->capture_default_str();
    sweep->add_option("--workers", sweep_args.workers, "Worker threads (default $DEPHASING_WORKERS or all cores)");
    add_selection(sweep, cfg);
    add_output(sweep, sweep_out, "csv");

    std::string figure_id;
    std::size_t figure_workers = 0;
    auto* fig = app.add_subcommand("figure", "Regenerate a figure dataset (fig1 ... fig5)");
    fig->add_option("id", figure_id, "Figure identifier")->required();
    fig->add_option("--workers", figure_workers, "Worker threads");
    add_output(fig, fig_out, "csv");

    OptimalArgs opt_args;
    auto* opt = app.add_subcommand("optimal-s", "Ohmicity maximising the stationary coherence");
    auto* opt_dt = opt->add_option("--dt", opt_args.dt, "Pulse spacing");
    auto* opt_n = opt->add_option("--n", opt_args.n, "Number of pulses")->capture_default_str();
    opt->add_flag("--free", opt_args.free, "No pulses")->excludes(opt_dt)->excludes(opt_n);
    opt->add_option("--s-min", opt_args.s_min, "Lower end of the s range (exclusive at 1)")->capture_default_str();
    opt->add_option("--s-max", opt_args.s_max, "Upper end of the s range")->capture_default_str();
    opt->add_option("--threshold", opt_args.threshold, "Minimum coherence for a reported optimum")->capture_default_str();
    opt->add_option("--alpha", opt_args.alpha, "Coupling constant")->capture_default_str();
    add_output(opt, opt_out, "csv");

    double defect = 0.0;
    auto* val = app.add_subcommand("validate", "Run the internal consistency checks");
    val->add_option("--corrupt-gamma0", defect, "Test hook: corrupt the closed-form exponent by this factor");
    add_output(val, val_out, "text", {"text", "json"});

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArguments;
    }
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector

    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadArguments;
    }

    try {
        if (*traj) return cmd_trajectory(cfg, traj_out);
        if (*meas) return cmd_measure(cfg, meas_out);
        if (*sweep) return cmd_sweep(cfg, sweep_args, sweep_out);
        if (*fig) return cmd_figure(figure_id, figure_workers, fig_out);
        if (*opt) return cmd_optimal_s(opt_args, opt_out);
        if (*val) return cmd_validate(defect, val_out);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArguments;
    }
    return kBadArguments;
}
