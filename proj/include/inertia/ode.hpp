#pragma once

#include <concepts>

namespace inertia {

/// One classical fourth-order Runge-Kutta step of y' = f(t, y).
/// `State` needs vector-space operators (Eigen vectors qualify).
template <class State, class Rhs>
    requires std::invocable<Rhs&, double, const State&>
State rk4_step(Rhs& f, double t, const State& y, double h) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = f(t + h, State(y + h * k3));
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrates from t0 over n fixed steps, calling `observe(k, t, y)` before every step and after the last.
template <class State, class Rhs, class Observer>
State rk4_integrate(Rhs& f, double t0, State y, double h, std::size_t n, Observer&& observe) {
    for (std::size_t k = 0; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) * h;
        observe(k, t, y);
        y = rk4_step(f, t, y, h);
    }
    observe(n, t0 + static_cast<double>(n) * h, y);
    return y;
}

}  // namespace inertia
