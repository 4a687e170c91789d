#pragma once

// Closed-loop frequency dynamics of an aggregated system with thermal, hydro
// and wind generation, integrated with fixed-step RK4.

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inertia/core.hpp"
#include "inertia/ode.hpp"
#include "inertia/plants.hpp"
#include "inertia/wind.hpp"

namespace inertia {

struct GenerationShares {
    double thermal = 0.88;
    double hydro = 0.12;
    double wind = 0.0;
};

struct SolverSettings {
    double dt = 0.01;
    double duration = 150.0;
};

struct NoiseSettings {
    double sigma_hz = 0.0;
    std::uint64_t seed = 0;
};

struct ScenarioConfig {
    int scenario = 0;  // preset number, 0 for a custom mix
    GenerationShares shares;
    bool wind_control = false;
    ThermalParams thermal;
    HydroParams hydro;
    WindParams wind;
    LoadParams load;
    PerUnitSystem base;
    SolverSettings solver;
    std::optional<NoiseSettings> noise;

    void validate() const {
        base.validate();
        thermal.validate();
        hydro.validate();
        wind.validate();
        load.validate();
        const double sum = shares.thermal + shares.hydro + shares.wind;
        if (shares.thermal < 0 || shares.hydro < 0 || shares.wind < 0 || std::abs(sum - 1.0) > 1e-9)
            throw InvalidParameter("generation shares must be non-negative and sum to 1");
        if (!(solver.dt > 0.0 && solver.dt <= 0.05)) throw InvalidParameter("dt must lie in (0, 0.05] s");
        if (!(solver.duration > load.t_dist)) throw InvalidParameter("duration must exceed the disturbance time");
        if (!(load.t_dist >= 0.0)) throw InvalidParameter("disturbance time must be non-negative");
        if (noise && !(noise->sigma_hz >= 0.0)) throw InvalidParameter("noise sigma must be non-negative");
        if (!(rotational_inertia() > 0.0)) throw InvalidParameter("system has no synchronous inertia");
    }

    /// Synchronous inertia over S_B; wind counts with zero rotational inertia.
    double rotational_inertia() const {
        const std::array<PlantShare, 3> mix{{{thermal.h, shares.thermal}, {hydro.h, shares.hydro}, {0.0, shares.wind}}};
        return aggregate_rotational_inertia(mix);
    }

    /// Expected total inertia when the wind fleet emulates `h_virtual` seconds.
    double total_inertia(double h_virtual) const {
        const std::array<PlantShare, 2> rot{{{thermal.h, shares.thermal}, {hydro.h, shares.hydro}}};
        const std::array<PlantShare, 1> virt{{{h_virtual, shares.wind}}};
        return aggregate_with_virtual(rot, virt);
    }

    bool wind_control_active() const { return wind_control && shares.wind > 0.0; }
};

/// Table of generation mixes; hydro is fixed at 12 %.
inline ScenarioConfig scenario_preset(int n, bool wind_control) {
    static constexpr std::array<GenerationShares, 4> kMixes{{
        {0.88, 0.12, 0.00},
        {0.73, 0.12, 0.15},
        {0.58, 0.12, 0.30},
        {0.43, 0.12, 0.45},
    }};
    if (n < 1 || n > 4) throw InvalidParameter("scenario must be 1, 2, 3 or 4");
    ScenarioConfig cfg;
    cfg.scenario = n;
    cfg.shares = kMixes[static_cast<std::size_t>(n - 1)];
    cfg.wind_control = wind_control;
    return cfg;
}

/// Per-step record. Powers are deviations in system per-unit; p_load includes damping.
struct SimulationTrace {
    double t0 = 0.0;
    double dt = 0.01;
    double f0 = 50.0;
    double t_dist = 50.0;
    double h_eq = 0.0;   // synchronous inertia used by the swing equation
    double damping = 1.0;
    std::vector<double> f_hz;
    std::vector<double> delta_f_pu;
    std::vector<double> rocof_hz_s;
    std::vector<double> p_thermal;
    std::vector<double> p_hydro;
    std::vector<double> p_wind;
    std::vector<double> p_load;
    std::vector<double> omega_wt;
    std::vector<WindMode> mode;

    std::size_t size() const { return f_hz.size(); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    std::size_t disturbance_index() const { return static_cast<std::size_t>(std::llround((t_dist - t0) / dt)); }

    TimeSeries series(const std::vector<double>& v) const { return {t0, dt, v}; }
    TimeSeries frequency_hz() const { return series(f_hz); }
    TimeSeries frequency_pu() const { return series(delta_f_pu); }
    TimeSeries rocof() const { return series(rocof_hz_s); }

    /// Generation variation dP_T + dP_H + dP_WF.
    TimeSeries generation() const {
        std::vector<double> v(size());
        for (std::size_t k = 0; k < size(); ++k) v[k] = p_thermal[k] + p_hydro[k] + p_wind[k];
        return series(v);
    }

    /// Accelerating power seen by the synchronous units from everything except
    /// the wind fleet: dP_T + dP_H - dP_e.
    TimeSeries synchronous_balance() const {
        std::vector<double> v(size());
        for (std::size_t k = 0; k < size(); ++k) v[k] = p_thermal[k] + p_hydro[k] - p_load[k];
        return series(v);
    }
};

/// dDelta_f/dt = (dP_m - dP_L - D Delta_f) / (2 H). Pass dp_e = dP_L + D Delta_f with damping 0,
/// or the bare load step together with the damping constant.
inline double swing_step(double delta_f, double dp_m, double dp_l, double h_eq, double damping = 0.0) {
    if (!(h_eq > 0.0)) throw InvalidParameter("equivalent inertia must be positive");
    return (dp_m - dp_l - damping * delta_f) / (2.0 * h_eq);
}

namespace detail {

enum StateIndex : int {
    kThGov, kThChest, kThReheat,
    kHyGov, kHyDroop, kHyWater,
    kSecondary,
    kOmega, kPi, kPMeas, kPInj,
    kDeltaF,
    kStateCount
};

using StateVector = Eigen::Matrix<double, kStateCount, 1>;

inline ThermalState thermal_of(const StateVector& y) { return {y[kThGov], y[kThChest], y[kThReheat]}; }
inline HydroState hydro_of(const StateVector& y) { return {y[kHyGov], y[kHyDroop], y[kHyWater]}; }

inline WindState wind_of(const StateVector& y, const WindState& discrete) {
    WindState s = discrete;
    s.omega = y[kOmega];
    s.pi_state = y[kPi];
    s.p_meas = y[kPMeas];
    s.p_inj = y[kPInj];
    return s;
}

struct Outputs {
    double p_thermal = 0.0;
    double p_hydro = 0.0;
    double p_wind = 0.0;
    double p_load = 0.0;
    double d_delta_f = 0.0;
};

class SystemModel {
public:
    explicit SystemModel(const ScenarioConfig& cfg)
        : cfg_(cfg), h_eq_(cfg.rotational_inertia()), p0_(p_available(cfg.wind)),
          sync_share_(cfg.shares.thermal + cfg.shares.hydro) {}

    double h_eq() const { return h_eq_; }

    Outputs outputs(const StateVector& y, bool load_on) const {
        Outputs o;
        o.p_thermal = cfg_.shares.thermal * thermal_power(thermal_of(y), cfg_.thermal);
        o.p_hydro = cfg_.shares.hydro * hydro_power(hydro_of(y), cfg_.hydro);
        o.p_wind = cfg_.shares.wind * (y[kPInj] - p0_);
        o.p_load = load_power(y[kDeltaF], load_on, cfg_.load);
        o.d_delta_f = swing_step(y[kDeltaF], o.p_thermal + o.p_hydro + o.p_wind, o.p_load, h_eq_);
        return o;
    }

    StateVector derivative(const StateVector& y, const WindState& discrete, bool load_on) const {
        StateVector dy = StateVector::Zero();
        const double df = y[kDeltaF];
        const double setpoint = sync_share_ > 0.0 ? y[kSecondary] / sync_share_ : 0.0;

        const auto th = thermal_derivatives(thermal_of(y), df, cfg_.thermal, setpoint);
        dy[kThGov] = th.d.gov;
        dy[kThChest] = th.d.chest;
        dy[kThReheat] = th.d.reheat;

        const auto hy = hydro_derivatives(hydro_of(y), df, cfg_.hydro, setpoint);
        dy[kHyGov] = hy.d.gov;
        dy[kHyDroop] = hy.d.droop;
        dy[kHyWater] = hy.d.water;

        dy[kSecondary] = -cfg_.thermal.k_i * df;

        const WindState ws = wind_of(y, discrete);
        const double p_cmd = command_power(ws, df * cfg_.base.f0_hz, cfg_.wind);
        const auto wd = wind_derivatives(ws, p_cmd, cfg_.wind);
        dy[kOmega] = wd.d_omega;
        dy[kPi] = wd.d_pi;
        dy[kPMeas] = wd.d_p_meas;
        dy[kPInj] = wd.d_p_inj;

        dy[kDeltaF] = outputs(y, load_on).d_delta_f;
        return dy;
    }

private:
    ScenarioConfig cfg_;
    double h_eq_;
    double p0_;
    double sync_share_;
};

}  // namespace detail

/// Runs the scenario from equilibrium. The load step is snapped to the nearest sample.
inline SimulationTrace simulate(const ScenarioConfig& cfg) {
    using namespace detail;
    cfg.validate();

    const double dt = cfg.solver.dt;
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.solver.duration / dt));
    const auto k_dist = static_cast<std::size_t>(std::llround(cfg.load.t_dist / dt));
    const bool control = cfg.wind_control_active();
    const double f0 = cfg.base.f0_hz;

    SystemModel model(cfg);
    SimulationTrace tr;
    tr.t0 = 0.0;
    tr.dt = dt;
    tr.f0 = f0;
    tr.t_dist = static_cast<double>(k_dist) * dt;
    tr.h_eq = model.h_eq();
    tr.damping = cfg.load.d;
    for (auto* v : {&tr.f_hz, &tr.delta_f_pu, &tr.rocof_hz_s, &tr.p_thermal, &tr.p_hydro, &tr.p_wind, &tr.p_load,
                    &tr.omega_wt})
        v->reserve(n_steps + 1);
    tr.mode.reserve(n_steps + 1);

    const WindState eq = wind_equilibrium(cfg.wind);
    WindState discrete = eq;
    StateVector y = StateVector::Zero();
    y[kOmega] = eq.omega;
    y[kPi] = eq.pi_state;
    y[kPMeas] = eq.p_meas;
    y[kPInj] = eq.p_inj;

    bool load_on = false;
    auto rhs = [&](double, const StateVector& s) -> StateVector { return model.derivative(s, discrete, load_on); };

    double t = 0.0;
    for (std::size_t k = 0;; ++k) {
        t = static_cast<double>(k) * dt;
        load_on = k >= k_dist;
        if (!y.allFinite()) throw IntegrationFailure("integration produced a non-finite state", t);

        if (control) {
            const auto step = controller_step(wind_of(y, discrete), y[kDeltaF] * f0, cfg.wind);
            discrete = step.next;
            y[kPi] = step.next.pi_state;
        }

        const Outputs o = model.outputs(y, load_on);
        tr.f_hz.push_back(f0 * (1.0 + y[kDeltaF]));
        tr.delta_f_pu.push_back(y[kDeltaF]);
        tr.rocof_hz_s.push_back(f0 * o.d_delta_f);
        tr.p_thermal.push_back(o.p_thermal);
        tr.p_hydro.push_back(o.p_hydro);
        tr.p_wind.push_back(o.p_wind);
        tr.p_load.push_back(o.p_load);
        tr.omega_wt.push_back(y[kOmega]);
        tr.mode.push_back(discrete.mode);

        if (k == n_steps) break;
        try {
            y = rk4_step(rhs, t, y, dt);
        } catch (const ModelValidityError& e) {
            throw IntegrationFailure(e.what(), t);
        }
    }

    if (cfg.noise && cfg.noise->sigma_hz > 0.0) {
        std::mt19937_64 rng(cfg.noise->seed);
        std::normal_distribution<double> gauss(0.0, cfg.noise->sigma_hz);
        for (std::size_t k = 0; k < tr.size(); ++k) {
            tr.f_hz[k] += gauss(rng);
            tr.delta_f_pu[k] = tr.f_hz[k] / f0 - 1.0;
        }
    }
    return tr;
}

/// Mean ROCOF over [t_dist, t_dist + window] in mHz/s.
inline double rocof_metric(const SimulationTrace& tr, double window = 0.5) {
    if (!(window > 0.0)) throw WindowError("ROCOF window must be positive");
    if (tr.size() == 0) throw WindowError("empty trace");
    const std::size_t first = tr.disturbance_index();
    const std::size_t last = first + static_cast<std::size_t>(std::llround(window / tr.dt));
    if (first >= tr.size() || last >= tr.size()) throw WindowError("ROCOF window lies outside the trace");
    double sum = 0.0;
    for (std::size_t k = first; k <= last; ++k) sum += tr.rocof_hz_s[k];
    return 1000.0 * sum / static_cast<double>(last - first + 1);
}

}  // namespace inertia
