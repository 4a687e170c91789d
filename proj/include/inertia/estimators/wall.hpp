#pragma once

#include <limits>
#include <vector>

#include "inertia/estimators/common.hpp"

namespace inertia {

/// Sliding-window geometry: two windows of `a` samples separated by a gap of `w` samples.
struct WallGeometry {
    std::size_t a = 5;
    std::size_t w = 2;
    /// H(t) is reported only where |R2 - R1| reaches this fraction of its maximum.
    double validity_fraction = 0.5;
};

struct WallResult {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> h;       // NaN where undefined or flagged
    std::vector<bool> valid;
    std::vector<double> p_step;  // P2 - P1
    std::vector<double> r_step;  // R2 - R1
    InertiaEstimate estimate;
};

/// Four sliding means (P1, R1 over the earlier window, P2, R2 over the later
/// one ending at t_n) and H(t_n) = (P2 - P1) / (2 (R2 - R1)).
///
/// `p_total` is the accelerating power on the synchronous units in per-unit
/// (a load increase shows up as a negative step) and `rocof` is df/dt in pu/s.
/// The scalar estimate is read with the later window starting at the
/// disturbance, located as the largest sample-to-sample ROCOF jump. Samples
/// whose |R2 - R1| falls below `validity_fraction` of its value there are
/// flagged invalid.
inline WallResult estimate_wall(const TimeSeries& p_total, const TimeSeries& rocof, const WallGeometry& g = {}) {
    check_aligned(p_total, rocof, "wall");
    if (g.a < 2 || g.w < 1) throw InvalidParameter("wall: need a >= 2 and w >= 1");
    if (!(g.validity_fraction > 0.0 && g.validity_fraction <= 1.0))
        throw InvalidParameter("wall: validity fraction must lie in (0, 1]");
    const std::size_t n = p_total.size();
    const std::size_t span = 2 * g.a + g.w;
    if (n < span) throw WindowError("wall: series shorter than the window geometry");

    std::vector<double> pp(n + 1, 0.0), rp(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        pp[k + 1] = pp[k] + p_total[k];
        rp[k + 1] = rp[k] + rocof[k];
    }
    const double inv_a = 1.0 / static_cast<double>(g.a);
    auto mean = [&](const std::vector<double>& prefix, std::size_t lo, std::size_t hi) {
        return (prefix[hi + 1] - prefix[lo]) * inv_a;
    };

    WallResult out;
    out.t0 = p_total.t0();
    out.dt = p_total.dt();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.h.assign(n, nan);
    out.valid.assign(n, false);
    out.p_step.assign(n, 0.0);
    out.r_step.assign(n, 0.0);

    for (std::size_t k = span - 1; k < n; ++k) {
        const std::size_t late_lo = k + 1 - g.a;
        const std::size_t early_hi = late_lo - g.w - 1;
        const std::size_t early_lo = early_hi + 1 - g.a;
        out.p_step[k] = mean(pp, late_lo, k) - mean(pp, early_lo, early_hi);
        out.r_step[k] = mean(rp, late_lo, k) - mean(rp, early_lo, early_hi);
    }

    // Disturbance instant: the sharpest sample-to-sample ROCOF jump.
    std::size_t onset = 0;
    double jump = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double d = std::abs(rocof[k] - rocof[k - 1]);
        if (d > jump * (1.0 + 1e-12)) {
            jump = d;
            onset = k;
        }
    }
    if (!(jump > 1e-12)) throw UndefinedEstimate("wall: ROCOF never changes");
    // later window starts at the onset, earlier window ends w samples before it
    const std::size_t eval = onset + g.a - 1;
    if (onset < g.a + g.w || eval >= n) throw WindowError("wall: windows around the disturbance leave the series");
    const double denom = std::abs(out.r_step[eval]);
    if (!(denom > 1e-12)) throw UndefinedEstimate("wall: ROCOF windows do not differ at the disturbance");

    for (std::size_t k = span - 1; k < n; ++k) {
        if (std::abs(out.r_step[k]) >= g.validity_fraction * denom) {
            out.valid[k] = true;
            out.h[k] = 0.5 * out.p_step[k] / out.r_step[k];
        }
    }
    out.estimate = detail::finite_estimate(Method::Wall, 0.5 * out.p_step[eval] / out.r_step[eval],
                                           {{"index", static_cast<double>(eval)},
                                            {"t_eval", p_total.time(eval)},
                                            {"t_onset", p_total.time(onset)},
                                            {"p_step", out.p_step[eval]},
                                            {"r_step", out.r_step[eval]},
                                            {"a", static_cast<double>(g.a)},
                                            {"w", static_cast<double>(g.w)}});
    return out;
}

}  // namespace inertia
