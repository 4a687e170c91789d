#pragma once

// JSON and CSV renderings of estimation and sweep results.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "inertia/io.hpp"
#include "inertia/sweep.hpp"

namespace inertia {

inline constexpr const char* kReportSchema = "inertia-sweep-report";
inline constexpr int kReportVersion = 1;

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json estimate_to_json(const InertiaEstimate& e) {
    return {{"method", std::string(method_name(e.method))}, {"h_est", e.h_est}, {"diagnostics", e.diagnostics}};
}

// ---- sweep report ----------------------------------------------------------

inline json sweep_to_json(const SweepResult& s) {
    json runs = json::array();
    for (const auto& r : s.runs) {
        json est = json::array();
        for (const auto& e : r.estimates)
            est.push_back({{"method", std::string(method_name(e.method))},
                           {"h_est", optional_number(e.h_est)},
                           {"deviation_pct", optional_number(e.deviation_pct)},
                           {"error", e.error}});
        runs.push_back({{"scenario", r.scenario},
                        {"wind_control", r.wind_control},
                        {"wpi", r.wpi},
                        {"h_rot", r.h_rot},
                        {"rocof_mhz_s", r.rocof_mhz_s},
                        {"nadir_hz", r.nadir_hz},
                        {"estimates", est}});
    }
    json points = json::array();
    for (const auto& p : s.regression.points) points.push_back({{"wpi", p.wpi}, {"h_v", p.h_v}});
    json reg{{"fitted", s.regression.fitted}, {"notice", s.regression.notice}, {"points", points}};
    if (s.regression.fitted) {
        reg["slope"] = s.regression.relation.slope;
        reg["r_squared"] = s.regression.relation.r_squared;
        reg["h_v_wt"] = s.regression.h_v_wt();
    }
    json checks = json::array();
    for (const auto& c : s.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"schema", kReportSchema},
            {"version", kReportVersion},
            {"metadata",
             {{"generator_version", kVersion},
              {"generated_at", s.generated_at},
              {"dt", s.dt},
              {"duration", s.duration},
              {"seed", s.seed},
              {"noise_sigma_hz", s.noise_sigma_hz},
              {"rocof_window", s.rocof_window}}},
            {"runs", runs},
            {"regression", reg},
            {"checks", checks}};
}

namespace detail {

inline std::optional<double> read_optional_number(const json& v) {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

}  // namespace detail

/// Strict reader: unknown fields, a different schema name or version are errors.
/// Traces and Wall curves are not part of the report and stay empty.
inline SweepResult sweep_from_json(const json& j) {
    using detail::apply_fields;
    using detail::assign;
    SweepResult s;
    std::string schema;
    int version = 0;
    bool has_schema = false, has_version = false;
    apply_fields(j, "report", {
        {"schema", [&](const json& v) { schema = v.get<std::string>(); has_schema = true; }},
        {"version", [&](const json& v) { version = v.get<int>(); has_version = true; }},
        {"metadata", [&](const json& v) {
             std::string generator;
             apply_fields(v, "metadata", {{"generator_version", assign(generator)},
                                          {"generated_at", assign(s.generated_at)},
                                          {"dt", assign(s.dt)},
                                          {"duration", assign(s.duration)},
                                          {"seed", assign(s.seed)},
                                          {"noise_sigma_hz", assign(s.noise_sigma_hz)},
                                          {"rocof_window", assign(s.rocof_window)}});
         }},
        {"runs", [&](const json& v) {
             if (!v.is_array()) throw MalformedInput("report.runs: expected an array");
             for (const auto& rj : v) {
                 RunOutcome r;
                 apply_fields(rj, "run", {
                     {"scenario", assign(r.scenario)},
                     {"wind_control", assign(r.wind_control)},
                     {"wpi", assign(r.wpi)},
                     {"h_rot", assign(r.h_rot)},
                     {"rocof_mhz_s", assign(r.rocof_mhz_s)},
                     {"nadir_hz", assign(r.nadir_hz)},
                     {"estimates", [&](const json& ev) {
                          if (!ev.is_array()) throw MalformedInput("run.estimates: expected an array");
                          for (const auto& ej : ev) {
                              MethodOutcome o;
                              apply_fields(ej, "estimate", {
                                  {"method", [&](const json& m) {
                                       try {
                                           o.method = parse_method(m.get<std::string>());
                                       } catch (const InvalidParameter& e) {
                                           throw MalformedInput(std::string("estimate.method: ") + e.what());
                                       }
                                   }},
                                  {"h_est", [&](const json& x) { o.h_est = detail::read_optional_number(x); }},
                                  {"deviation_pct",
                                   [&](const json& x) { o.deviation_pct = detail::read_optional_number(x); }},
                                  {"error", assign(o.error)},
                              });
                              r.estimates.push_back(std::move(o));
                          }
                      }},
                 });
                 s.runs.push_back(std::move(r));
             }
         }},
        {"regression", [&](const json& v) {
             double h_v_wt = 0.0;
             apply_fields(v, "regression", {
                 {"fitted", assign(s.regression.fitted)},
                 {"notice", assign(s.regression.notice)},
                 {"slope", assign(s.regression.relation.slope)},
                 {"r_squared", assign(s.regression.relation.r_squared)},
                 {"h_v_wt", assign(h_v_wt)},
                 {"points", [&](const json& pv) {
                      if (!pv.is_array()) throw MalformedInput("regression.points: expected an array");
                      for (const auto& pj : pv) {
                          VirtualInertiaPoint p;
                          apply_fields(pj, "point", {{"wpi", assign(p.wpi)}, {"h_v", assign(p.h_v)}});
                          s.regression.points.push_back(p);
                      }
                  }},
             });
         }},
        {"checks", [&](const json& v) {
             if (!v.is_array()) throw MalformedInput("report.checks: expected an array");
             for (const auto& cj : v) {
                 SweepCheck c;
                 apply_fields(cj, "check",
                              {{"name", assign(c.name)}, {"passed", assign(c.passed)}, {"detail", assign(c.detail)}});
                 s.checks.push_back(std::move(c));
             }
         }},
    });
    if (!has_schema || schema != kReportSchema) throw MalformedInput("report: missing or unknown schema name");
    if (!has_version || version != kReportVersion)
        throw MalformedInput("report: unsupported version " + std::to_string(version));
    return s;
}

// ---- CSV outputs -----------------------------------------------------------

inline std::string control_label(bool on) { return on ? "on" : "off"; }

namespace detail {

inline std::string csv_number(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

inline std::ofstream open_output(const std::filesystem::path& p) {
    std::ofstream os(p);
    if (!os) throw Error("cannot open '" + p.string() + "' for writing");
    return os;
}

}  // namespace detail

inline void write_summary_csv(std::ostream& os, const SweepResult& s) {
    os << "scenario,wind_control,wpi,h_rot,rocof_mhz_s,nadir_hz,method,h_est,deviation_pct,error\n";
    for (const auto& r : s.runs)
        for (const auto& e : r.estimates)
            os << r.scenario << ',' << control_label(r.wind_control) << ',' << format_double(r.wpi) << ','
               << format_double(r.h_rot) << ',' << format_double(r.rocof_mhz_s) << ',' << format_double(r.nadir_hz)
               << ',' << method_name(e.method) << ',' << detail::csv_number(e.h_est) << ','
               << detail::csv_number(e.deviation_pct) << ',' << (e.error.empty() ? "" : "\"" + e.error + "\"")
               << '\n';
}

/// Bar-chart data: one row per run and method with the rotational reference and,
/// when the regression was fitted, the rotational plus fitted virtual inertia.
inline void write_h_comparison_csv(std::ostream& os, const SweepResult& s) {
    os << "scenario,wind_control,wpi,method,h_est,h_rot,h_total_fit\n";
    for (const auto& r : s.runs)
        for (const auto& e : r.estimates) {
            std::optional<double> total;
            if (s.regression.fitted) total = r.h_rot + s.regression.relation.slope * r.wpi;
            os << r.scenario << ',' << control_label(r.wind_control) << ',' << format_double(r.wpi) << ','
               << method_name(e.method) << ',' << detail::csv_number(e.h_est) << ',' << format_double(r.h_rot)
               << ',' << detail::csv_number(total) << '\n';
        }
}

struct PlotWindow {
    double before = 1.0;  // s before the disturbance
    double after = 20.0;  // s after it
};

inline void write_rocof_traces_csv(std::ostream& os, const SweepResult& s, PlotWindow w = {}) {
    os << "scenario,wind_control,t,f_hz,rocof_mhz_s,mode\n";
    for (const auto& r : s.runs) {
        const auto& tr = r.trace;
        for (std::size_t k = 0; k < tr.size(); ++k) {
            const double t = tr.time(k);
            if (t < tr.t_dist - w.before || t > tr.t_dist + w.after) continue;
            os << r.scenario << ',' << control_label(r.wind_control) << ',' << format_double(t) << ','
               << format_double(tr.f_hz[k]) << ',' << format_double(1000.0 * tr.rocof_hz_s[k]) << ','
               << to_string(tr.mode[k]) << '\n';
        }
    }
}

inline void write_wall_panels_csv(std::ostream& os, const SweepResult& s, PlotWindow w = {}) {
    os << "scenario,wind_control,t,h_wall,valid,p_sync_pu,rocof_pu_s,p_step,r_step\n";
    for (const auto& r : s.runs) {
        if (!r.wall) continue;
        const auto& tr = r.trace;
        const auto& wall = *r.wall;
        const TimeSeries p = tr.synchronous_balance();
        for (std::size_t k = 0; k < tr.size() && k < wall.h.size(); ++k) {
            const double t = tr.time(k);
            if (t < tr.t_dist - w.before || t > tr.t_dist + w.after) continue;
            const std::optional<double> h = std::isfinite(wall.h[k]) ? std::optional<double>(wall.h[k]) : std::nullopt;
            os << r.scenario << ',' << control_label(r.wind_control) << ',' << format_double(t) << ','
               << detail::csv_number(h) << ',' << (wall.valid[k] ? 1 : 0) << ',' << format_double(p[k]) << ','
               << format_double(tr.rocof_hz_s[k] / tr.f0) << ',' << format_double(wall.p_step[k]) << ','
               << format_double(wall.r_step[k]) << '\n';
        }
    }
}

inline void write_regression_csv(std::ostream& os, const SweepResult& s) {
    os << "wpi,h_v,h_v_fit,slope,r_squared\n";
    if (!s.regression.fitted) return;
    const auto& rel = s.regression.relation;
    for (const auto& p : s.regression.points)
        os << format_double(p.wpi) << ',' << format_double(p.h_v) << ',' << format_double(rel.slope * p.wpi) << ','
           << format_double(rel.slope) << ',' << format_double(rel.r_squared) << '\n';
}

/// Writes sweep_report.json, sweep_summary.csv and the four plot-data files into `dir`.
inline std::vector<std::filesystem::path> write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& s) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto emit = [&](const char* name, auto&& writer) {
        const auto path = dir / name;
        auto os = detail::open_output(path);
        writer(os);
        if (!os) throw Error("write to '" + path.string() + "' failed");
        written.push_back(path);
    };
    emit("sweep_report.json", [&](std::ostream& os) { os << sweep_to_json(s).dump(2) << '\n'; });
    emit("sweep_summary.csv", [&](std::ostream& os) { write_summary_csv(os, s); });
    emit("h_comparison.csv", [&](std::ostream& os) { write_h_comparison_csv(os, s); });
    emit("rocof_traces.csv", [&](std::ostream& os) { write_rocof_traces_csv(os, s); });
    emit("wall_panels.csv", [&](std::ostream& os) { write_wall_panels_csv(os, s); });
    emit("regression.csv", [&](std::ostream& os) { write_regression_csv(os, s); });
    return written;
}

}  // namespace inertia
