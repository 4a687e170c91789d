#pragma once

#include <Eigen/Dense>

#include "inertia/estimators/common.hpp"

namespace inertia {

struct PolynomialFit {
    Eigen::VectorXd coefficients;  // A_1 .. A_degree, in 1/s^k
    double rms_residual = 0.0;
};

/// Least-squares fit of y(t) = sum_{k=1..degree} A_k t^k (no constant term),
/// t measured from the first sample.
inline PolynomialFit fit_origin_polynomial(const TimeSeries& y, int degree) {
    const auto n = static_cast<Eigen::Index>(y.size());
    if (degree < 1) throw InvalidParameter("polynomial degree must be at least 1");
    const double span = static_cast<double>(n - 1) * y.dt();
    if (!(span > 0.0)) throw WindowError("polynomial fit needs at least two samples");

    // Fit in normalised time tau = t / span for conditioning.
    Eigen::MatrixXd m(n, degree);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double tau = static_cast<double>(k) * y.dt() / span;
        double p = 1.0;
        for (int j = 0; j < degree; ++j) {
            p *= tau;
            m(k, j) = p;
        }
        rhs[k] = y[static_cast<std::size_t>(k)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(1e-12);
    if (qr.rank() < degree) throw RankDeficient("polynomial fit is rank deficient");
    Eigen::VectorXd c = qr.solve(rhs);
    const double rms = std::sqrt((m * c - rhs).squaredNorm() / static_cast<double>(n));
    double scale = 1.0;
    for (int j = 0; j < degree; ++j) {
        scale *= span;
        c[j] /= scale;
    }
    return {c, rms};
}

/// Fifth-degree polynomial fit of the per-unit deviation over [t_dist, t_dist + fit_window];
/// the linear coefficient approximates the initial ROCOF and H = dp / (2 A_1).
inline InertiaEstimate estimate_inoue(const TimeSeries& f_pu, const DisturbanceInfo& dist, double fit_window = 1.0,
                                      int degree = 5) {
    dist.validate();
    if (!(fit_window > 0.0)) throw WindowError("inoue: fit window must be positive");
    const std::size_t first = detail::disturbance_index(f_pu, dist.t_dist, "inoue");
    const std::size_t last = first + static_cast<std::size_t>(std::llround(fit_window / f_pu.dt()));
    if (last >= f_pu.size()) throw WindowError("inoue: fit window extends past the end of the series");
    if (last - first + 1 < 50) throw WindowError("inoue: fit window holds fewer than 50 samples");

    const auto fit = fit_origin_polynomial(f_pu.slice(first, last), degree);
    const double a1 = fit.coefficients[0];
    if (std::abs(a1) < 1e-12) throw UndefinedEstimate("inoue: linear coefficient vanishes");
    return detail::finite_estimate(Method::Inoue, dist.dp / (2.0 * a1),
                                   {{"a1", a1}, {"fit_window", fit_window}, {"rms_residual", fit.rms_residual},
                                    {"degree", degree}});
}

}  // namespace inertia
