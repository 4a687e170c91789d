#pragma once

// Trace CSV format and the JSON scenario configuration file.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "inertia/sim.hpp"

namespace inertia {

using json = nlohmann::json;

inline constexpr const char* kTraceColumns[] = {"t",           "f_hz",       "delta_f_pu", "rocof_hz_s",
                                               "p_thermal_pu", "p_hydro_pu", "p_wind_pu",  "p_load_pu",
                                               "omega_wt_pu",  "mode"};
inline constexpr std::size_t kTraceColumnCount = std::size(kTraceColumns);

/// Shortest decimal that reads back to the same double (17 significant digits at most).
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_trace_csv(std::ostream& os, const SimulationTrace& tr) {
    for (std::size_t c = 0; c < kTraceColumnCount; ++c) os << (c ? "," : "") << kTraceColumns[c];
    os << '\n';
    for (std::size_t k = 0; k < tr.size(); ++k) {
        os << format_double(tr.time(k)) << ',' << format_double(tr.f_hz[k]) << ',' << format_double(tr.delta_f_pu[k])
           << ',' << format_double(tr.rocof_hz_s[k]) << ',' << format_double(tr.p_thermal[k]) << ','
           << format_double(tr.p_hydro[k]) << ',' << format_double(tr.p_wind[k]) << ','
           << format_double(tr.p_load[k]) << ',' << format_double(tr.omega_wt[k]) << ',' << to_string(tr.mode[k])
           << '\n';
    }
}

inline void write_trace_csv(const std::string& path, const SimulationTrace& tr) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    write_trace_csv(os, tr);
    if (!os) throw Error("write to '" + path + "' failed");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline double parse_cell(const std::string& cell, std::size_t line, std::size_t column) {
    double v = 0.0;
    const char* end = cell.data() + cell.size();
    const auto res = std::from_chars(cell.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw MalformedInput("line " + std::to_string(line) + ", column " + std::to_string(column) + " (" +
                             kTraceColumns[column - 1] + "): '" + cell + "' is not a finite number");
    return v;
}

inline WindMode parse_mode(const std::string& cell, std::size_t line) {
    for (WindMode m : {WindMode::Normal, WindMode::Overproduction, WindMode::Recovery})
        if (cell == to_string(m)) return m;
    throw MalformedInput("line " + std::to_string(line) + ", column " + std::to_string(kTraceColumnCount) +
                         " (mode): unknown mode '" + cell + "'");
}

}  // namespace detail

/// Reads a trace written by write_trace_csv. f0 is recovered from the first
/// row; t_dist is left at the sample of the largest load jump.
inline SimulationTrace read_trace_csv(std::istream& is) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line)) throw MalformedInput("line 1: trace file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_csv_line(line);
    if (header.size() != kTraceColumnCount)
        throw MalformedInput("line 1: expected " + std::to_string(kTraceColumnCount) + " columns, found " +
                             std::to_string(header.size()));
    for (std::size_t c = 0; c < kTraceColumnCount; ++c)
        if (header[c] != kTraceColumns[c])
            throw MalformedInput("line 1, column " + std::to_string(c + 1) + ": expected '" + kTraceColumns[c] +
                                 "', found '" + header[c] + "'");

    SimulationTrace tr;
    std::vector<double> t;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != kTraceColumnCount)
            throw MalformedInput("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(kTraceColumnCount) + " columns, found " +
                                 std::to_string(cells.size()));
        t.push_back(detail::parse_cell(cells[0], line_no, 1));
        tr.f_hz.push_back(detail::parse_cell(cells[1], line_no, 2));
        tr.delta_f_pu.push_back(detail::parse_cell(cells[2], line_no, 3));
        tr.rocof_hz_s.push_back(detail::parse_cell(cells[3], line_no, 4));
        tr.p_thermal.push_back(detail::parse_cell(cells[4], line_no, 5));
        tr.p_hydro.push_back(detail::parse_cell(cells[5], line_no, 6));
        tr.p_wind.push_back(detail::parse_cell(cells[6], line_no, 7));
        tr.p_load.push_back(detail::parse_cell(cells[7], line_no, 8));
        tr.omega_wt.push_back(detail::parse_cell(cells[8], line_no, 9));
        tr.mode.push_back(detail::parse_mode(cells[9], line_no));
    }
    if (t.size() < 2) throw MalformedInput("trace holds fewer than two samples");
    tr.t0 = t[0];
    tr.dt = t[1] - t[0];
    if (!(tr.dt > 0.0)) throw MalformedInput("line 3, column 1 (t): time must increase");
    for (std::size_t k = 1; k < t.size(); ++k)
        if (std::abs(t[k] - tr.time(k)) > 1e-6 * tr.dt)
            throw MalformedInput("line " + std::to_string(k + 2) + ", column 1 (t): samples are not uniformly spaced");
    tr.f0 = tr.f_hz[0] / (1.0 + tr.delta_f_pu[0]);
    tr.damping = 0.0;
    tr.t_dist = tr.t0;
    double jump = 0.0;
    for (std::size_t k = 1; k < tr.size(); ++k) {
        const double d = std::abs(tr.p_load[k] - tr.p_load[k - 1]);
        if (d > jump) {
            jump = d;
            tr.t_dist = tr.time(k);
        }
    }
    return tr;
}

inline SimulationTrace read_trace_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw MalformedInput("cannot open trace file '" + path + "'");
    return read_trace_csv(is);
}

/// Column-oriented JSON rendering of a trace.
inline json trace_to_json(const SimulationTrace& tr) {
    std::vector<double> t(tr.size());
    std::vector<std::string> mode(tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        t[k] = tr.time(k);
        mode[k] = to_string(tr.mode[k]);
    }
    return json{{"t", t},
                {"f_hz", tr.f_hz},
                {"delta_f_pu", tr.delta_f_pu},
                {"rocof_hz_s", tr.rocof_hz_s},
                {"p_thermal_pu", tr.p_thermal},
                {"p_hydro_pu", tr.p_hydro},
                {"p_wind_pu", tr.p_wind},
                {"p_load_pu", tr.p_load},
                {"omega_wt_pu", tr.omega_wt},
                {"mode", mode}};
}

// ---- scenario configuration ------------------------------------------------

namespace detail {

using FieldMap = std::vector<std::pair<const char*, std::function<void(const json&)>>>;

inline void apply_fields(const json& obj, const std::string& where, const FieldMap& fields) {
    if (!obj.is_object()) throw MalformedInput(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const auto& [name, set] : fields) {
            if (key == name) {
                try {
                    set(value);
                } catch (const json::exception&) {
                    throw MalformedInput(where + "." + key + ": wrong value type");
                }
                known = true;
                break;
            }
        }
        if (!known) throw MalformedInput(where + ": unknown field '" + key + "'");
    }
}

template <class T>
std::function<void(const json&)> assign(T& target) {
    return [&target](const json& v) { target = v.get<T>(); };
}

}  // namespace detail

/// Applies a nested JSON object onto `cfg`. Absent keys keep their current
/// value; a "scenario" key first resets to that preset.
inline void apply_config_json(const json& j, ScenarioConfig& cfg) {
    using detail::assign;
    if (!j.is_object()) throw MalformedInput("config: expected an object");
    if (j.contains("scenario")) {
        const bool control = j.contains("wind_control") ? j.at("wind_control").get<bool>() : cfg.wind_control;
        cfg = scenario_preset(j.at("scenario").get<int>(), control);
    }
    NoiseSettings noise = cfg.noise.value_or(NoiseSettings{});
    bool noise_set = false;
    detail::apply_fields(j, "config", {
        {"scenario", [](const json&) {}},
        {"wind_control", assign(cfg.wind_control)},
        {"shares", [&](const json& v) {
             detail::apply_fields(v, "shares", {{"thermal", assign(cfg.shares.thermal)},
                                                {"hydro", assign(cfg.shares.hydro)},
                                                {"wind", assign(cfg.shares.wind)}});
         }},
        {"thermal", [&](const json& v) {
             auto& p = cfg.thermal;
             detail::apply_fields(v, "thermal", {{"t_g", assign(p.t_g)}, {"f_hp", assign(p.f_hp)},
                                                 {"t_rh", assign(p.t_rh)}, {"t_ch", assign(p.t_ch)},
                                                 {"r_t", assign(p.r_t)}, {"k_i", assign(p.k_i)},
                                                 {"h", assign(p.h)}});
         }},
        {"hydro", [&](const json& v) {
             auto& p = cfg.hydro;
             detail::apply_fields(v, "hydro", {{"t_g", assign(p.t_g)}, {"t_r", assign(p.t_r)},
                                               {"r_t", assign(p.r_t)}, {"r_p", assign(p.r_p)},
                                               {"t_w", assign(p.t_w)}, {"r_h", assign(p.r_h)},
                                               {"k_i", assign(p.k_i)}, {"h", assign(p.h)}});
         }},
        {"wind", [&](const json& v) {
             auto& p = cfg.wind;
             detail::apply_fields(v, "wind", {{"v_w", assign(p.v_w)}, {"k_pt", assign(p.k_pt)},
                                              {"k_it", assign(p.k_it)}, {"v_wt", assign(p.v_wt)},
                                              {"t_con", assign(p.t_con)}, {"t_f", assign(p.t_f)},
                                              {"h_wt", assign(p.h_wt)}, {"k_opt", assign(p.k_opt)},
                                              {"v_rated", assign(p.v_rated)}, {"omega_min", assign(p.omega_min)},
                                              {"delta_f_lim", assign(p.delta_f_lim)}, {"k_op", assign(p.k_op)},
                                              {"x", assign(p.x)}, {"recovery_tol", assign(p.recovery_tol)},
                                              {"omega_guard_horizon", assign(p.omega_guard_horizon)}});
         }},
        {"load", [&](const json& v) {
             detail::apply_fields(v, "load", {{"d", assign(cfg.load.d)},
                                              {"delta_p_l", assign(cfg.load.delta_p_l)},
                                              {"t_dist", assign(cfg.load.t_dist)}});
         }},
        {"base", [&](const json& v) {
             detail::apply_fields(v, "base", {{"s_base_mw", assign(cfg.base.s_base_mw)},
                                              {"f0_hz", assign(cfg.base.f0_hz)}});
         }},
        {"solver", [&](const json& v) {
             detail::apply_fields(v, "solver", {{"dt", assign(cfg.solver.dt)},
                                                {"duration", assign(cfg.solver.duration)}});
         }},
        {"noise", [&](const json& v) {
             noise_set = true;
             detail::apply_fields(v, "noise", {{"sigma_hz", assign(noise.sigma_hz)}, {"seed", assign(noise.seed)}});
         }},
    });
    if (noise_set) cfg.noise = noise;
}

inline ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {}) {
    std::ifstream is(path);
    if (!is) throw MalformedInput("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw MalformedInput("config '" + path + "': " + e.what());
    }
    apply_config_json(j, base);
    return base;
}

inline json config_to_json(const ScenarioConfig& c) {
    json j{{"scenario", c.scenario},
           {"wind_control", c.wind_control},
           {"shares", {{"thermal", c.shares.thermal}, {"hydro", c.shares.hydro}, {"wind", c.shares.wind}}},
           {"thermal", {{"t_g", c.thermal.t_g}, {"f_hp", c.thermal.f_hp}, {"t_rh", c.thermal.t_rh},
                        {"t_ch", c.thermal.t_ch}, {"r_t", c.thermal.r_t}, {"k_i", c.thermal.k_i},
                        {"h", c.thermal.h}}},
           {"hydro", {{"t_g", c.hydro.t_g}, {"t_r", c.hydro.t_r}, {"r_t", c.hydro.r_t}, {"r_p", c.hydro.r_p},
                      {"t_w", c.hydro.t_w}, {"r_h", c.hydro.r_h}, {"k_i", c.hydro.k_i}, {"h", c.hydro.h}}},
           {"wind", {{"v_w", c.wind.v_w}, {"k_pt", c.wind.k_pt}, {"k_it", c.wind.k_it}, {"v_wt", c.wind.v_wt},
                     {"t_con", c.wind.t_con}, {"t_f", c.wind.t_f}, {"h_wt", c.wind.h_wt},
                     {"k_opt", c.wind.k_opt}, {"v_rated", c.wind.v_rated}, {"omega_min", c.wind.omega_min},
                     {"delta_f_lim", c.wind.delta_f_lim}, {"k_op", c.wind.k_op}, {"x", c.wind.x},
                     {"recovery_tol", c.wind.recovery_tol},
                     {"omega_guard_horizon", c.wind.omega_guard_horizon}}},
           {"load", {{"d", c.load.d}, {"delta_p_l", c.load.delta_p_l}, {"t_dist", c.load.t_dist}}},
           {"base", {{"s_base_mw", c.base.s_base_mw}, {"f0_hz", c.base.f0_hz}}},
           {"solver", {{"dt", c.solver.dt}, {"duration", c.solver.duration}}}};
    if (c.noise) j["noise"] = {{"sigma_hz", c.noise->sigma_hz}, {"seed", c.noise->seed}};
    return j;
}

}  // namespace inertia
