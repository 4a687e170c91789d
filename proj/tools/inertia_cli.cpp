#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "inertia/io.hpp"
#include "inertia/pipeline.hpp"
#include "inertia/report.hpp"
#include "inertia/sweep.hpp"

namespace {

using namespace inertia;

enum ExitCode { kOk = 0, kUsage = 1, kRuntime = 2, kCheckFailed = 3 };

struct UsageError : Error {
    using Error::Error;
};

struct ModelFlags {
    std::optional<int> scenario;
    std::string config;
    std::string wind_control;  // "", "on" or "off"
    std::optional<double> dt;
    std::optional<double> duration;
    std::optional<double> f0;
    std::optional<double> noise_sigma;
    std::uint64_t seed = 0;
};

struct EstimateFlags {
    std::string method = "all";
    std::optional<std::size_t> wall_a;
    std::optional<std::size_t> wall_w;
    std::optional<double> dp;
    std::optional<double> t_dist;
};

void add_model_flags(CLI::App& cmd, ModelFlags& f, bool with_scenario) {
    if (with_scenario) cmd.add_option("--scenario", f.scenario, "Preset generation mix")->check(CLI::Range(1, 4));
    cmd.add_option("--config", f.config, "JSON scenario configuration; flags override its values")
        ->check(CLI::ExistingFile);
    if (with_scenario)
        cmd.add_option("--wind-control", f.wind_control, "Fast power reserve controller")
            ->check(CLI::IsMember({"on", "off"}));
    cmd.add_option("--dt", f.dt, "Integration step, s");
    cmd.add_option("--duration", f.duration, "Simulated time, s");
    cmd.add_option("--f0", f.f0, "Nominal frequency, Hz");
    cmd.add_option("--noise-sigma", f.noise_sigma, "Gaussian measurement noise on f, Hz");
    cmd.add_option("--seed", f.seed, "Noise seed")->capture_default_str();
}

void add_estimate_flags(CLI::App& cmd, EstimateFlags& f) {
    std::vector<std::string> names{"all"};
    for (Method m : kAllMethods) names.emplace_back(method_name(m));
    cmd.add_option("--method", f.method, "Estimator to run")->check(CLI::IsMember(names))->capture_default_str();
    cmd.add_option("--wall-a", f.wall_a, "Wall averaging window, samples")->check(CLI::PositiveNumber);
    cmd.add_option("--wall-w", f.wall_w, "Wall gap between windows, samples")->check(CLI::PositiveNumber);
    cmd.add_option("--dp", f.dp, "Signed power imbalance, pu (negative for a load increase)");
    cmd.add_option("--t-dist", f.t_dist, "Disturbance time, s");
}

ScenarioConfig build_config(const ModelFlags& f) {
    ScenarioConfig cfg = scenario_preset(f.scenario.value_or(1), f.wind_control == "on");
    if (!f.config.empty()) {
        cfg = load_config_file(f.config, cfg);
        if (f.scenario) {
            const ScenarioConfig preset = scenario_preset(*f.scenario, cfg.wind_control);
            cfg.scenario = preset.scenario;
            cfg.shares = preset.shares;
        }
    }
    if (!f.wind_control.empty()) cfg.wind_control = f.wind_control == "on";
    if (f.dt) cfg.solver.dt = *f.dt;
    if (f.duration) cfg.solver.duration = *f.duration;
    if (f.f0) cfg.base.f0_hz = *f.f0;
    if (f.noise_sigma) cfg.noise = NoiseSettings{*f.noise_sigma, f.seed};
    else if (cfg.noise) cfg.noise->seed = f.seed;
    try {
        cfg.validate();
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

std::vector<Method> selected_methods(const std::string& name) {
    if (name == "all") return {std::begin(kAllMethods), std::end(kAllMethods)};
    return {parse_method(name)};
}

EstimationSettings build_settings(const EstimateFlags& f) {
    EstimationSettings s;
    s.dp = f.dp;
    s.t_dist = f.t_dist;
    s.wall_a = f.wall_a;
    s.wall_w = f.wall_w;
    return s;
}

/// Seconds after the disturbance until |f - f0| stays inside `band_hz`.
double settling_time(const SimulationTrace& tr, double band_hz) {
    std::size_t last = tr.disturbance_index();
    for (std::size_t k = tr.disturbance_index(); k < tr.size(); ++k)
        if (std::abs(tr.f_hz[k] - tr.f0) > band_hz) last = k;
    return tr.time(last) - tr.t_dist;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_.open(path);
        if (!file_) throw Error("cannot open '" + path + "' for writing");
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    bool is_stdout() const { return !file_.is_open(); }

private:
    std::ofstream file_;
};

int cmd_simulate(const ModelFlags& mf, const std::string& out, const std::string& format, double rocof_window) {
    const ScenarioConfig cfg = build_config(mf);
    const SimulationTrace tr = simulate(cfg);
    OutputTarget target(out);
    if (format == "json")
        target.stream() << json{{"config", config_to_json(cfg)}, {"trace", trace_to_json(tr)}}.dump() << '\n';
    else
        write_trace_csv(target.stream(), tr);
    if (!target.stream()) throw Error("writing the trace failed");

    std::ostream& log = target.is_stdout() ? std::cerr : std::cout;
    log << "scenario " << cfg.scenario << ", wind control " << (cfg.wind_control ? "on" : "off") << ", H_rot "
        << fmt("%.4g", cfg.rotational_inertia()) << " s\n"
        << "nadir " << fmt("%.4f", frequency_nadir_hz(tr)) << " Hz\n"
        << "rocof " << fmt("%.2f", rocof_metric(tr, rocof_window)) << " mHz/s over " << rocof_window << " s\n"
        << "settling (20 mHz band) " << fmt("%.2f", settling_time(tr, 0.02)) << " s\n";
    return kOk;
}

int cmd_estimate(const std::string& in, const EstimateFlags& ef, std::optional<double> f0, const std::string& out,
                 const std::string& format, double rocof_window) {
    SimulationTrace tr = read_trace_csv(in);
    if (f0) {
        tr.f0 = *f0;
        for (std::size_t k = 0; k < tr.size(); ++k) tr.delta_f_pu[k] = tr.f_hz[k] / tr.f0 - 1.0;
    }
    const EstimationSettings settings = build_settings(ef);
    const DisturbanceInfo d = resolve_disturbance(tr, settings);
    if (d.t_dist != tr.t_dist) tr.t_dist = d.t_dist;
    const auto estimates = run_estimators(tr, selected_methods(ef.method), settings);

    OutputTarget target(out);
    auto& os = target.stream();
    if (format == "csv") {
        os << "method,h_est\n";
        for (const auto& e : estimates) os << method_name(e.method) << ',' << format_double(e.h_est) << '\n';
    } else {
        json est = json::array();
        for (const auto& e : estimates) est.push_back(estimate_to_json(e));
        json report{{"input", in},
                    {"f0", tr.f0},
                    {"disturbance", {{"dp", d.dp}, {"t_dist", d.t_dist}}},
                    {"rocof_mhz_s", rocof_metric(tr, rocof_window)},
                    {"estimates", est}};
        os << report.dump(2) << '\n';
    }
    if (!os) throw Error("writing the report failed");
    return kOk;
}

int cmd_sweep(const ModelFlags& mf, const EstimateFlags& ef, const std::vector<int>& scenarios,
              const std::string& out, double rocof_window, bool check, bool serial) {
    SweepOptions opt;
    opt.scenarios = scenarios;
    opt.base = build_config(mf);
    opt.methods = selected_methods(ef.method);
    opt.estimation = build_settings(ef);
    opt.rocof_window = rocof_window;
    opt.parallel = !serial;
    SweepResult res = run_sweep(opt);
    res.generated_at = utc_timestamp();
    const std::string dir = out.empty() ? "sweep_out" : out;
    for (const auto& p : write_sweep_outputs(dir, res)) std::cout << "wrote " << p.string() << '\n';

    for (const auto& r : res.runs) {
        std::cout << run_label(r) << ": H_rot " << fmt("%.3f", r.h_rot) << " s, rocof "
                  << fmt("%.2f", r.rocof_mhz_s) << " mHz/s";
        for (const auto& e : r.estimates)
            std::cout << ", " << method_name(e.method) << ' ' << (e.h_est ? fmt("%.3f", *e.h_est) : "failed");
        std::cout << '\n';
    }
    if (res.regression.fitted)
        std::cout << "virtual inertia: slope " << fmt("%.5f", res.regression.relation.slope) << " s/%, R^2 "
                  << fmt("%.4f", res.regression.relation.r_squared) << ", H_V,WT "
                  << fmt("%.3f", res.regression.h_v_wt()) << " s\n";
    else
        std::cout << res.regression.notice << '\n';

    if (!check) return kOk;
    int failed = 0;
    for (const auto& c : res.checks)
        if (!c.passed) {
            ++failed;
            std::cerr << "check failed: " << c.name << " (" << c.detail << ")\n";
        }
    std::cout << res.checks.size() - static_cast<std::size_t>(failed) << "/" << res.checks.size()
              << " expectations met\n";
    return failed ? kCheckFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Power-system frequency simulation and inertia estimation"};
    app.require_subcommand(1);

    ModelFlags sim_flags;
    std::string sim_out, sim_format = "csv";
    double sim_rocof_window = 0.5;
    auto* sim = app.add_subcommand("simulate", "Simulate a load step and write the trace");
    add_model_flags(*sim, sim_flags, true);
    sim->add_option("--out", sim_out, "Trace file ('-' for stdout)");
    sim->add_option("--format", sim_format, "Trace format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sim->add_option("--rocof-window", sim_rocof_window, "ROCOF averaging window, s")->capture_default_str();

    std::string est_in, est_out, est_format = "json";
    EstimateFlags est_flags;
    std::optional<double> est_f0;
    double est_rocof_window = 0.5;
    auto* est = app.add_subcommand("estimate", "Estimate inertia from a trace CSV");
    est->add_option("--in,trace", est_in, "Trace CSV")->required();
    add_estimate_flags(*est, est_flags);
    est->add_option("--f0", est_f0, "Nominal frequency override, Hz");
    est->add_option("--out", est_out, "Report file (stdout when omitted)");
    est->add_option("--format", est_format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    est->add_option("--rocof-window", est_rocof_window, "ROCOF averaging window, s")->capture_default_str();

    ModelFlags sweep_flags;
    EstimateFlags sweep_est;
    std::vector<int> sweep_scenarios{1, 2, 3, 4};
    std::string sweep_out = "sweep_out";
    double sweep_rocof_window = 0.5;
    bool sweep_check = false, sweep_serial = false;
    auto* sweep = app.add_subcommand("sweep", "Run every scenario with and without wind control");
    add_model_flags(*sweep, sweep_flags, false);
    add_estimate_flags(*sweep, sweep_est);
    sweep->add_option("--scenarios", sweep_scenarios, "Scenarios to run")
        ->delimiter(',')
        ->check(CLI::Range(1, 4));
    sweep->add_option("--out", sweep_out, "Output directory")->capture_default_str();
    sweep->add_option("--rocof-window", sweep_rocof_window, "ROCOF averaging window, s")->capture_default_str();
    sweep->add_flag("--check", sweep_check, "Exit with status 3 when an expectation is not met");
    sweep->add_flag("--serial", sweep_serial, "Run scenarios one after another");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sim) return cmd_simulate(sim_flags, sim_out, sim_format, sim_rocof_window);
        if (*est) return cmd_estimate(est_in, est_flags, est_f0, est_out, est_format, est_rocof_window);
        if (*sweep)
            return cmd_sweep(sweep_flags, sweep_est, sweep_scenarios, sweep_out, sweep_rocof_window, sweep_check,
                             sweep_serial);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}
