#pragma once

#include "inertia/estimators/common.hpp"

namespace inertia {

/// How the onset ROCOF is read from a (possibly noisy) frequency record.
struct RocofSampling {
    double denoise_width = 0.15;  // s, centered moving average; 0 disables
    double window = 0.1;          // s, averaging span of the derivative
};

/// Mean of the denoised central-difference derivative over
/// [t_dist + denoise_width/2, t_dist + denoise_width/2 + window], in units of f per second.
/// The offset keeps the smoothing kernel clear of the pre-disturbance samples.
inline double sample_onset_rocof(const TimeSeries& f, double t_dist, const RocofSampling& s) {
    if (!(s.window > 0.0) || !(s.denoise_width >= 0.0)) throw InvalidParameter("invalid ROCOF sampling");
    const std::size_t k_dist = detail::disturbance_index(f, t_dist, "rocof");
    std::size_t width = static_cast<std::size_t>(std::llround(s.denoise_width / f.dt()));
    if (width % 2 == 0) ++width;
    const std::size_t half = width / 2;
    const TimeSeries smooth = width > 1 ? moving_average(f, width) : f;
    const TimeSeries d = derivative(smooth);

    const std::size_t first = k_dist + half + 1;
    const std::size_t last = first + std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(s.window / f.dt())));
    if (last + half >= f.size()) throw WindowError("rocof: sampling window extends past the end of the series");
    double sum = 0.0;
    for (std::size_t k = first; k <= last; ++k) sum += d[k];
    return sum / static_cast<double>(last - first + 1);
}

/// Denoise, differentiate, H = dp / (2 df/dt) with per-unit frequency.
inline InertiaEstimate estimate_chassin(const TimeSeries& f_pu, const DisturbanceInfo& dist,
                                        const RocofSampling& sampling = {}) {
    dist.validate();
    const double rocof = sample_onset_rocof(f_pu, dist.t_dist, sampling);
    if (std::abs(rocof) < 1e-9) throw UndefinedEstimate("chassin: frequency derivative is zero");
    return detail::finite_estimate(Method::Chassin, dist.dp / (2.0 * rocof),
                                   {{"rocof_pu_s", rocof}, {"denoise_width", sampling.denoise_width},
                                    {"window", sampling.window}});
}

/// Voltage-independent load form: dP(t) = dP_dist, sampled like the Chassin estimator.
inline InertiaEstimate estimate_zografos17(const TimeSeries& f_pu, const DisturbanceInfo& dist,
                                           const RocofSampling& sampling = {}) {
    dist.validate();
    const double load_term = 0.0;
    const double rocof = sample_onset_rocof(f_pu, dist.t_dist, sampling);
    if (std::abs(rocof) < 1e-9) throw UndefinedEstimate("zografos17: frequency derivative is zero");
    return detail::finite_estimate(Method::Zografos17, (load_term + dist.dp) / (2.0 * rocof),
                                   {{"rocof_pu_s", rocof}, {"load_term", load_term}});
}

}  // namespace inertia
