#pragma once

// Equivalent variable-speed wind turbine: single-mass rotor, MPPT speed
// controller and the three-mode fast-power-reserve frequency controller.
// Turbine powers are in the turbine's own per-unit base.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "inertia/errors.hpp"

namespace inertia {

enum class WindMode { Normal, Overproduction, Recovery };

inline const char* to_string(WindMode m) {
    switch (m) {
    case WindMode::Normal: return "normal";
    case WindMode::Overproduction: return "overproduction";
    case WindMode::Recovery: return "recovery";
    }
    return "normal";
}

struct WindParams {
    double v_w = 10.0;          // m/s
    double k_pt = 3.0;          // speed PI, proportional
    double k_it = 0.6;          // speed PI, integral
    double v_wt = 1.0;          // pu terminal voltage
    double t_con = 0.02;        // s, current injection lag
    double t_f = 5.0;           // s, power measurement filter
    double h_wt = 5.29;         // s, rotor inertia constant
    double k_opt = 1.0;         // MPPT law P = k_opt * omega^3
    double v_rated = 12.0;      // m/s, wind speed at which the MPPT speed is 1 pu
    double omega_min = 0.70;    // pu
    double delta_f_lim = 0.10;  // Hz
    double k_op = 0.15;         // pu/Hz
    double x = 0.5;             // recovery proportionality
    double recovery_tol = 0.005;        // relative closeness to the MPPT point that ends recovery
    double omega_guard_horizon = 0.10;  // s, look-ahead of the minimum-speed exit

    void validate() const {
        if (!(t_con > 0 && t_f > 0 && h_wt > 0)) throw InvalidParameter("wind time constants must be positive");
        if (!(omega_min > 0 && omega_min < 1)) throw InvalidParameter("omega_min must lie in (0, 1)");
        if (!(delta_f_lim > 0)) throw InvalidParameter("delta_f_lim must be positive");
        if (!(x > 0 && x <= 1)) throw InvalidParameter("recovery constant x must lie in (0, 1]");
        if (!(v_w > 0 && v_rated > 0 && k_opt > 0 && v_wt > 0)) throw InvalidParameter("wind operating point must be positive");
        if (!(k_op >= 0 && recovery_tol > 0 && omega_guard_horizon >= 0))
            throw InvalidParameter("wind controller gains must be non-negative");
        if (!(omega_mppt() > omega_min)) throw InvalidParameter("MPPT speed must exceed omega_min");
    }

    /// Rotor speed at the maximum power point for the current wind speed.
    double omega_mppt() const { return std::min(v_w / v_rated, 1.0); }
};

/// Power on the MPPT tracking curve, k_opt * omega^3 clipped to [0, 1].
inline double p_mppt(double omega, const WindParams& p) {
    return std::clamp(p.k_opt * omega * omega * omega, 0.0, 1.0);
}

/// P_MPPT at the operating speed, the pre-event power P0.
inline double p_available(const WindParams& p) { return p_mppt(p.omega_mppt(), p); }

/// Aerodynamic power at fixed wind speed, quadratic around its maximum at the MPPT speed.
inline double p_mechanical(double omega, const WindParams& p) {
    const double r = omega / p.omega_mppt();
    return std::max(0.0, p_available(p) * (2.0 * r - r * r));
}

/// Second recovery piece: P_MPPT + x (P_mt - P_MPPT), all at the current speed.
inline double recovery_curve(double omega, const WindParams& p) {
    const double mppt = p_mppt(omega, p);
    return mppt + p.x * (p_mechanical(omega, p) - mppt);
}

struct Parabola {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double omega) const { return (a * omega + b) * omega + c; }
    double slope(double omega) const { return 2.0 * a * omega + b; }
};

/// Parabola through (omega_entry, p_entry) that meets the recovery curve at
/// omega_v with zero slope there.
inline Parabola build_recovery_parabola(double omega_entry, double p_entry, double omega_v, const WindParams& p) {
    if (!(omega_entry < omega_v)) throw InvalidParameter("recovery parabola needs omega_entry < omega_v");
    if (!(omega_v < p.omega_mppt())) throw InvalidParameter("recovery midpoint must lie below the MPPT speed");
    Eigen::Matrix3d m;
    m << omega_entry * omega_entry, omega_entry, 1.0,
         omega_v * omega_v, omega_v, 1.0,
         2.0 * omega_v, 1.0, 0.0;
    const Eigen::Vector3d rhs(p_entry, recovery_curve(omega_v, p), 0.0);
    const Eigen::Vector3d abc = m.fullPivLu().solve(rhs);
    return {abc[0], abc[1], abc[2]};
}

struct WindState {
    double omega = 0.0;     // pu rotor speed
    double pi_state = 0.0;  // speed controller integrator (torque, pu)
    double p_meas = 0.0;    // filtered electric power
    double p_inj = 0.0;     // injected power after the converter lag
    WindMode mode = WindMode::Normal;
    double omega_v = 0.0;   // recovery midpoint
    Parabola parabola;
    bool has_parabola = false;
    bool armed = true;      // overproduction may trigger
};

/// Steady operation at the maximum power point.
inline WindState wind_equilibrium(const WindParams& p) {
    WindState s;
    s.omega = p.omega_mppt();
    s.p_meas = p_available(p);
    s.p_inj = s.p_meas;
    s.pi_state = s.p_meas / s.omega;
    return s;
}

inline double speed_reference(const WindState& s, const WindParams& p) {
    return std::cbrt(std::max(s.p_meas, 0.0) / p.k_opt);
}

/// Output of the MPPT speed PI, converted from torque to power.
inline double speed_controller_power(const WindState& s, const WindParams& p) {
    const double err = s.omega - speed_reference(s, p);
    return s.omega * (p.k_pt * err + s.pi_state);
}

/// Commanded power for the state's current mode. `delta_f_hz` < 0 is under-frequency.
inline double command_power(const WindState& s, double delta_f_hz, const WindParams& p) {
    switch (s.mode) {
    case WindMode::Normal:
        return speed_controller_power(s, p);
    case WindMode::Overproduction:
        return p_mechanical(s.omega, p) + p.k_op * std::max(-delta_f_hz, 0.0);
    case WindMode::Recovery:
        if (s.has_parabola && s.omega <= s.omega_v) return s.parabola(s.omega);
        return recovery_curve(s.omega, p);
    }
    return 0.0;
}

struct ControllerStep {
    double p_cmd = 0.0;
    WindState next;
};

/// Evaluates the mode-transition predicates and returns the state to continue
/// with together with its commanded power. Only Normal -> Overproduction ->
/// Recovery -> Normal transitions exist. Overproduction is left only through
/// the minimum-speed or power-floor exits, never by |delta_f| falling back
/// under the threshold.
inline ControllerStep controller_step(const WindState& state, double delta_f_hz, const WindParams& p) {
    WindState next = state;
    const double omega0 = p.omega_mppt();
    const double p0 = p_available(p);

    switch (state.mode) {
    case WindMode::Normal:
        if (next.armed && -delta_f_hz > p.delta_f_lim) {
            next.mode = WindMode::Overproduction;
            next.armed = false;
        } else if (!next.armed && std::abs(delta_f_hz) <= p.delta_f_lim) {
            next.armed = true;
        }
        break;

    case WindMode::Overproduction: {
        const double p_cmd = command_power(state, delta_f_hz, p);
        const double rate = (p_mechanical(state.omega, p) - state.p_inj) / (2.0 * p.h_wt * state.omega);
        const double omega_ahead = state.omega + std::min(rate, 0.0) * p.omega_guard_horizon;
        if (omega_ahead < p.omega_min || p_cmd < p0) {
            next.mode = WindMode::Recovery;
            next.omega_v = 0.5 * (state.omega + omega0);
            next.has_parabola = next.omega_v - state.omega > 1e-9 && next.omega_v < omega0;
            if (next.has_parabola)
                next.parabola = build_recovery_parabola(state.omega, recovery_curve(state.omega, p), next.omega_v, p);
        }
        break;
    }

    case WindMode::Recovery: {
        const double p_cmd = command_power(state, delta_f_hz, p);
        if (std::abs(state.omega - omega0) <= p.recovery_tol * omega0 || p_cmd >= p0 * (1.0 - p.recovery_tol)) {
            next.mode = WindMode::Normal;
            next.has_parabola = false;
            // bumpless hand-back to the speed controller
            next.pi_state = p_cmd / state.omega - p.k_pt * (state.omega - speed_reference(state, p));
        }
        break;
    }
    }
    return {command_power(next, delta_f_hz, p), next};
}

struct WindDerivative {
    double d_omega = 0.0;
    double d_pi = 0.0;
    double d_p_meas = 0.0;
    double d_p_inj = 0.0;
    double p_e = 0.0;
};

/// Single-mass rotor 2 H dOmega/dt = (P_mt - P_e)/Omega, speed PI tracking the
/// MPPT reference, converter lag T_con and measurement filter T_f.
inline WindDerivative wind_derivatives(const WindState& s, double p_cmd, const WindParams& p) {
    if (!(s.omega > 0.0)) throw ModelValidityError("wind rotor speed is not positive");
    WindDerivative d;
    d.p_e = s.p_inj;
    d.d_omega = (p_mechanical(s.omega, p) - d.p_e) / (2.0 * p.h_wt * s.omega);
    d.d_pi = s.mode == WindMode::Normal ? p.k_it * (s.omega - speed_reference(s, p)) : 0.0;
    d.d_p_meas = (d.p_e - s.p_meas) / p.t_f;
    d.d_p_inj = (p_cmd - s.p_inj) / p.t_con;
    return d;
}

}  // namespace inertia
