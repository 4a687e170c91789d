#pragma once

#include <Eigen/Dense>

#include "inertia/estimators/common.hpp"

namespace inertia {

struct ZografosROptions {
    std::size_t n_points = 10;   // neighbours around t_sr, even
    double search_horizon = 10.0;  // s after the disturbance to look for t_sr
};

/// First local maximum of |df/dt| after the disturbance sample; on a plateau
/// (constant ROCOF) its first sample. Returns the index.
inline std::size_t first_rocof_extremum(const TimeSeries& rocof, std::size_t k_dist, std::size_t k_stop) {
    for (std::size_t k = k_dist + 1; k + 1 <= k_stop && k + 1 < rocof.size(); ++k) {
        const double here = std::abs(rocof[k]);
        const double tol = 1e-9 * here;
        if (here > 0.0 && here + tol >= std::abs(rocof[k - 1]) && here + tol >= std::abs(rocof[k + 1])) return k;
    }
    throw UndefinedEstimate("zografos-r: no local ROCOF extremum after the disturbance");
}

/// Governor response modelled as dP_m(t) = -R(t) Delta_f(t) with R unknown at
/// every sample. Around t_sr the swing equation is written for N + 1 samples
/// with R(t_sr) tied to the mean of its N neighbours, giving N + 1 equations in
/// H and the N neighbour values of R. The estimate is the swing equation at t_sr.
inline InertiaEstimate estimate_zografos_r(const TimeSeries& f_pu, const DisturbanceInfo& dist,
                                           const ZografosROptions& opt = {}) {
    dist.validate();
    const std::size_t n = opt.n_points;
    if (n < 2 || n % 2 != 0) throw InvalidParameter("zografos-r: neighbour count must be even and >= 2");
    const std::size_t half = n / 2;
    const std::size_t k_dist = detail::disturbance_index(f_pu, dist.t_dist, "zografos-r");
    const TimeSeries rocof = derivative(f_pu);

    const std::size_t k_stop = k_dist + static_cast<std::size_t>(std::llround(opt.search_horizon / f_pu.dt()));
    std::size_t k_sr = first_rocof_extremum(rocof, k_dist, k_stop);
    // the neighbourhood must lie strictly after the disturbance sample
    k_sr = std::max(k_sr, k_dist + 1 + half);
    if (k_sr + half + 1 >= f_pu.size()) throw WindowError("zografos-r: neighbourhood extends past the series");

    const auto dim = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Constant(dim, dist.dp);
    // unknowns: [H, R(t_sr - N/2) .. R(t_sr - 1), R(t_sr + 1) .. R(t_sr + N/2)]
    Eigen::Index col = 1;
    for (std::ptrdiff_t i = -static_cast<std::ptrdiff_t>(half); i <= static_cast<std::ptrdiff_t>(half); ++i) {
        if (i == 0) continue;
        const auto k = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k_sr) + i);
        m(col, 0) = 2.0 * rocof[k];
        m(col, col) = f_pu[k];
        ++col;
    }
    m(0, 0) = 2.0 * rocof[k_sr];
    for (Eigen::Index j = 1; j < dim; ++j) m(0, j) = f_pu[k_sr] / static_cast<double>(n);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw RankDeficient("zografos-r: linear system is singular");
    const Eigen::VectorXd x = lu.solve(rhs);
    const double r_sr = x.tail(dim - 1).mean();
    if (std::abs(rocof[k_sr]) < 1e-12) throw UndefinedEstimate("zografos-r: zero ROCOF at t_sr");
    const double h = (dist.dp - r_sr * f_pu[k_sr]) / (2.0 * rocof[k_sr]);
    return detail::finite_estimate(Method::ZografosR, h,
                                   {{"t_sr", f_pu.time(k_sr)}, {"r_sr", r_sr}, {"h_system", x[0]},
                                    {"n_points", static_cast<double>(n)}});
}

}  // namespace inertia
