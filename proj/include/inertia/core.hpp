#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "inertia/errors.hpp"

namespace inertia {

/// Base quantities used to normalise powers and frequencies.
struct PerUnitSystem {
    double s_base_mw = 1350.0;
    double f0_hz = 50.0;

    void validate() const {
        if (!(s_base_mw > 0.0) || !(f0_hz > 0.0))
            throw InvalidParameter("per-unit bases must be positive");
    }
};

/// A plant's inertia constant together with its capacity as a fraction of the system base.
struct PlantShare {
    double h = 0.0;      // s
    double share = 0.0;  // S_B,i / S_B
};

struct PhysicalRotor {
    double j = 0.0;    // kg m^2
    double f_m = 0.0;  // Hz
    double s_r = 0.0;  // VA
};

/// Uniformly sampled signal. Samples are finite; dt is strictly positive.
class TimeSeries {
public:
    TimeSeries() = default;

    TimeSeries(double t0, double dt, std::vector<double> values)
        : t0_(t0), dt_(dt), values_(std::move(values)) {
        if (!(dt_ > 0.0) || !std::isfinite(dt_) || !std::isfinite(t0_))
            throw InvalidParameter("time series step must be positive and finite");
        for (double v : values_)
            if (!std::isfinite(v)) throw InvalidParameter("time series contains a non-finite sample");
    }

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
    double end_time() const noexcept { return empty() ? t0_ : time(size() - 1); }
    double operator[](std::size_t k) const { return values_[k]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Index of the sample nearest to t, clamped to the series.
    std::size_t index_of(double t) const noexcept {
        if (empty()) return 0;
        const double k = std::round((t - t0_) / dt_);
        if (k <= 0.0) return 0;
        const auto idx = static_cast<std::size_t>(k);
        return idx >= size() ? size() - 1 : idx;
    }

    /// Returns true when t lies inside [t0, end] up to half a step.
    bool covers(double t) const noexcept {
        return !empty() && t >= t0_ - 0.5 * dt_ && t <= end_time() + 0.5 * dt_;
    }

    /// Copy of samples [first, last] (inclusive).
    TimeSeries slice(std::size_t first, std::size_t last) const {
        if (first > last || last >= size()) throw WindowError("slice outside the time series");
        return {time(first), dt_,
                std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                    values_.begin() + static_cast<std::ptrdiff_t>(last) + 1)};
    }

    TimeSeries scaled(double k) const {
        std::vector<double> v(values_);
        for (double& x : v) x *= k;
        return {t0_, dt_, std::move(v)};
    }

private:
    double t0_ = 0.0;
    double dt_ = 1.0;
    std::vector<double> values_;
};

inline void check_aligned(const TimeSeries& a, const TimeSeries& b, const char* who) {
    if (a.size() != b.size() || std::abs(a.dt() - b.dt()) > 1e-12 * a.dt() ||
        std::abs(a.t0() - b.t0()) > 1e-9 * std::max(1.0, std::abs(a.t0())))
        throw InvalidParameter(std::string(who) + ": series are not aligned");
}

/// Kinetic energy (J) of a rotor spinning at its rated mechanical frequency.
inline double kinetic_energy(const PhysicalRotor& rotor) {
    if (!(rotor.j >= 0.0) || !(rotor.f_m >= 0.0)) throw InvalidParameter("rotor J and f_m must be non-negative");
    const double omega = 2.0 * std::numbers::pi * rotor.f_m;
    return 0.5 * rotor.j * omega * omega;
}

/// Inertia constant H = E_kin / S_r in seconds.
inline double inertia_constant(const PhysicalRotor& rotor) {
    if (!(rotor.s_r > 0.0)) throw InvalidParameter("rated power must be positive");
    return kinetic_energy(rotor) / rotor.s_r;
}

/// Capacity-weighted inertia of the synchronous units; shares are already normalised to S_B.
inline double aggregate_rotational_inertia(std::span<const PlantShare> mix) {
    if (mix.empty()) throw InvalidParameter("generation mix is empty");
    double h = 0.0;
    for (const auto& p : mix) {
        if (!(p.share >= 0.0) || !(p.h >= 0.0)) throw InvalidParameter("negative share or inertia constant");
        h += p.h * p.share;
    }
    return h;
}

/// Rotational plus emulated inertia over the union of both plant lists.
inline double aggregate_with_virtual(std::span<const PlantShare> rotational, std::span<const PlantShare> virt) {
    if (rotational.empty() && virt.empty()) throw InvalidParameter("generation mix is empty");
    double h = rotational.empty() ? 0.0 : aggregate_rotational_inertia(rotational);
    if (!virt.empty()) h += aggregate_rotational_inertia(virt);
    return h;
}

/// Central differences inside, one-sided differences at both ends.
inline TimeSeries derivative(const TimeSeries& ts) {
    const std::size_t n = ts.size();
    if (n < 2) throw WindowError("derivative needs at least two samples");
    const double h = ts.dt();
    std::vector<double> d(n);
    d.front() = (ts[1] - ts[0]) / h;
    d.back() = (ts[n - 1] - ts[n - 2]) / h;
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (ts[k + 1] - ts[k - 1]) / (2.0 * h);
    return {ts.t0(), h, std::move(d)};
}

/// Centered moving average over an odd number of samples; the window shrinks at the edges.
inline TimeSeries moving_average(const TimeSeries& ts, std::size_t width) {
    if (width < 1) throw InvalidParameter("moving-average width must be at least one sample");
    if (width % 2 == 0) ++width;
    const std::size_t half = width / 2;
    const std::size_t n = ts.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + ts[k];
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k >= half ? k - half : 0;
        const std::size_t hi = std::min(n - 1, k + half);
        out[k] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return {ts.t0(), ts.dt(), std::move(out)};
}

}  // namespace inertia
