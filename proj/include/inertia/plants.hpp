#pragma once

// Deviation-form governor/turbine models of a reheat thermal unit and a hydro
// unit with transient-droop compensation, plus the frequency-dependent load.
// Every state is zero at the pre-disturbance equilibrium. Powers are in the
// plant's own per-unit base unless stated otherwise.

#include "inertia/errors.hpp"

namespace inertia {

struct ThermalParams {
    double t_g = 0.20;   // speed relay
    double f_hp = 0.30;  // high-pressure fraction
    double t_rh = 7.00;  // reheater
    double t_ch = 0.30;  // steam chest
    double r_t = 0.05;   // droop
    double k_i = 1.00;   // secondary integral gain
    double h = 5.00;

    void validate() const {
        if (!(t_g > 0 && t_rh > 0 && t_ch > 0)) throw InvalidParameter("thermal time constants must be positive");
        if (!(f_hp > 0 && f_hp < 1)) throw InvalidParameter("thermal F_HP must lie in (0, 1)");
        if (!(r_t > 0)) throw InvalidParameter("thermal droop must be positive");
        if (!(h >= 0)) throw InvalidParameter("thermal inertia constant must be non-negative");
    }
};

struct HydroParams {
    double t_g = 0.20;   // speed relay
    double t_r = 5.00;   // reset time
    double r_t = 0.38;   // temporary droop
    double r_p = 0.05;   // permanent droop
    double t_w = 1.00;   // water starting time
    double r_h = 0.05;   // speed droop
    double k_i = 1.00;   // secondary integral gain
    double h = 10.0 / 3.0;

    void validate() const {
        if (!(t_g > 0 && t_r > 0 && t_w > 0)) throw InvalidParameter("hydro time constants must be positive");
        if (!(r_p > 0 && r_t > r_p)) throw InvalidParameter("hydro droops must satisfy r_t > r_p > 0");
        if (!(r_h > 0)) throw InvalidParameter("hydro speed droop must be positive");
        if (!(h >= 0)) throw InvalidParameter("hydro inertia constant must be non-negative");
    }

    /// Lag time constant of the transient-droop compensator.
    double droop_lag() const { return r_t / r_p * t_r; }
};

struct LoadParams {
    double d = 1.0;            // pu MW / pu Hz
    double delta_p_l = 0.05;   // pu step, positive = load increase
    double t_dist = 50.0;      // s

    void validate() const {
        if (!(d >= 0)) throw InvalidParameter("load damping must be non-negative");
    }
};

/// Servo, steam chest and reheater outputs.
struct ThermalState {
    double gov = 0.0;
    double chest = 0.0;
    double reheat = 0.0;
};

/// Servo output, transient-droop lag and water-column lag.
struct HydroState {
    double gov = 0.0;
    double droop = 0.0;
    double water = 0.0;
};

struct ThermalDerivative {
    ThermalState d;
    double dp = 0.0;  // mechanical power deviation
};

struct HydroDerivative {
    HydroState d;
    double dp = 0.0;
};

/// Mechanical power of the reheat turbine for a given state.
inline double thermal_power(const ThermalState& s, const ThermalParams& p) {
    return p.f_hp * s.chest + (1.0 - p.f_hp) * s.reheat;
}

/// Governor 1/(1+sT_G) feeding (1+sF_HP T_RH)/((1+sT_RH)(1+sT_CH)).
/// `delta_f` is per-unit; `setpoint` is the secondary-control load reference.
inline ThermalDerivative thermal_derivatives(const ThermalState& s, double delta_f, const ThermalParams& p,
                                             double setpoint = 0.0) {
    const double u = setpoint - delta_f / p.r_t;
    ThermalDerivative out;
    out.d.gov = (u - s.gov) / p.t_g;
    out.d.chest = (s.gov - s.chest) / p.t_ch;
    out.d.reheat = (s.chest - s.reheat) / p.t_rh;
    out.dp = thermal_power(s, p);
    return out;
}

/// Output of the transient-droop compensator (1+sT_R)/(1+s(R_T/R_P)T_R).
inline double hydro_gate(const HydroState& s, const HydroParams& p) {
    return s.droop + p.t_r / p.droop_lag() * (s.gov - s.droop);
}

/// Water column (1 - sT_W)/(1 + 0.5 sT_W) written as -2 + 3/(1 + 0.5 sT_W).
inline double hydro_power(const HydroState& s, const HydroParams& p) {
    return 3.0 * s.water - 2.0 * hydro_gate(s, p);
}

inline HydroDerivative hydro_derivatives(const HydroState& s, double delta_f, const HydroParams& p,
                                         double setpoint = 0.0) {
    const double u = setpoint - delta_f / p.r_h;
    const double gate = hydro_gate(s, p);
    HydroDerivative out;
    out.d.gov = (u - s.gov) / p.t_g;
    out.d.droop = (s.gov - s.droop) / p.droop_lag();
    out.d.water = (gate - s.water) / (0.5 * p.t_w);
    out.dp = 3.0 * s.water - 2.0 * gate;
    return out;
}

/// Electrical demand deviation: load step plus frequency-sensitive damping.
inline double load_power(double delta_f, double t, const LoadParams& p) {
    const double step = t >= p.t_dist ? p.delta_p_l : 0.0;
    return step + p.d * delta_f;
}

/// Same as load_power with the step state decided by the caller.
inline double load_power(double delta_f, bool step_active, const LoadParams& p) {
    return (step_active ? p.delta_p_l : 0.0) + p.d * delta_f;
}

}  // namespace inertia
