#pragma once

// Runs the estimator suite on a simulation trace with one shared set of settings.

#include <cmath>
#include <optional>
#include <vector>

#include "inertia/estimators.hpp"
#include "inertia/sim.hpp"

namespace inertia {

struct EstimationSettings {
    std::optional<double> dp;      // signed imbalance; detected from the load column when unset
    std::optional<double> t_dist;  // detected from the load column when unset
    double inoue_window = 1.0;     // s
    RocofSampling rocof;
    // Wall geometry in seconds, converted with the trace step unless samples are given.
    double wall_window = 1.5;
    double wall_gap = 0.02;
    std::optional<std::size_t> wall_a;
    std::optional<std::size_t> wall_w;
    int tuttelberg_order = 3;
    double tuttelberg_pre = 1.0;    // s of data before the disturbance
    double tuttelberg_post = 20.0;  // s of data after it
    ZografosROptions zografos_r;

    WallGeometry wall_geometry(double dt) const {
        WallGeometry g;
        g.a = wall_a ? *wall_a : static_cast<std::size_t>(std::max<long long>(2, std::llround(wall_window / dt)));
        g.w = wall_w ? *wall_w : static_cast<std::size_t>(std::max<long long>(1, std::llround(wall_gap / dt)));
        return g;
    }
};

/// Locates the load step as the largest jump of the load column. dp is returned
/// with the imbalance sign (negative for a load increase); damping-driven
/// changes between neighbouring samples are orders of magnitude smaller.
inline DisturbanceInfo detect_disturbance(const SimulationTrace& tr) {
    if (tr.size() < 2) throw WindowError("trace too short to locate a disturbance");
    std::size_t best = 0;
    double jump = 0.0;
    for (std::size_t k = 1; k < tr.size(); ++k) {
        const double d = tr.p_load[k] - tr.p_load[k - 1];
        if (std::abs(d) > std::abs(jump)) {
            jump = d;
            best = k;
        }
    }
    if (jump == 0.0) throw UndefinedEstimate("trace contains no load step");
    return {-jump, tr.time(best)};
}

inline DisturbanceInfo resolve_disturbance(const SimulationTrace& tr, const EstimationSettings& s) {
    DisturbanceInfo d;
    if (!s.dp || !s.t_dist) d = detect_disturbance(tr);
    if (s.dp) d.dp = *s.dp;
    if (s.t_dist) d.t_dist = *s.t_dist;
    d.validate();
    return d;
}

/// Load-step input sequence (+|dp| after the disturbance) used for model identification.
inline TimeSeries load_step_input(const SimulationTrace& tr, const DisturbanceInfo& d) {
    std::vector<double> u(tr.size(), 0.0);
    for (std::size_t k = 0; k < tr.size(); ++k)
        if (tr.time(k) >= d.t_dist - 0.5 * tr.dt) u[k] = -d.dp;
    return tr.series(u);
}

inline ReducedModel identify_from_trace(const SimulationTrace& tr, const DisturbanceInfo& d,
                                        const EstimationSettings& s) {
    const TimeSeries f = tr.frequency_pu();
    const TimeSeries u = load_step_input(tr, d);
    const double lo = std::max(tr.t0, d.t_dist - s.tuttelberg_pre);
    const double hi = d.t_dist + s.tuttelberg_post;
    const std::size_t first = f.index_of(lo);
    const std::size_t last = f.index_of(hi);
    if (hi > f.end_time() + 0.5 * f.dt()) throw WindowError("tuttelberg: identification window leaves the trace");
    return identify_reduced_model(u.slice(first, last), f.slice(first, last), s.tuttelberg_order);
}

inline WallResult wall_from_trace(const SimulationTrace& tr, const EstimationSettings& s) {
    return estimate_wall(tr.synchronous_balance(), tr.rocof().scaled(1.0 / tr.f0), s.wall_geometry(tr.dt));
}

inline InertiaEstimate run_estimator(Method m, const SimulationTrace& tr, const DisturbanceInfo& d,
                                     const EstimationSettings& s) {
    const TimeSeries f = tr.frequency_pu();
    switch (m) {
    case Method::Inoue: return estimate_inoue(f, d, s.inoue_window);
    case Method::Chassin: return estimate_chassin(f, d, s.rocof);
    case Method::Wall: return wall_from_trace(tr, s).estimate;
    case Method::Zografos17: return estimate_zografos17(f, d, s.rocof);
    case Method::Tuttelberg: return estimate_tuttelberg(identify_from_trace(tr, d, s));
    case Method::ZografosR: return estimate_zografos_r(f, d, s.zografos_r);
    }
    throw InvalidParameter("unknown method");
}

inline std::vector<InertiaEstimate> run_estimators(const SimulationTrace& tr, const std::vector<Method>& methods,
                                                   const EstimationSettings& s) {
    const DisturbanceInfo d = resolve_disturbance(tr, s);
    std::vector<InertiaEstimate> out;
    out.reserve(methods.size());
    for (Method m : methods) out.push_back(run_estimator(m, tr, d, s));
    return out;
}

}  // namespace inertia
