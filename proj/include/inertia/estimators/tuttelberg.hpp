#pragma once

#include <vector>

#include <Eigen/Dense>

#include "inertia/estimators/common.hpp"

namespace inertia {

/// Continuous strictly proper model
///   (b_{n-1} s^{n-1} + ... + b_0) / (a_n s^n + ... + a_0),
/// coefficients stored highest power first.
struct ReducedModel {
    std::vector<double> num;  // b_{n-1} .. b_0
    std::vector<double> den;  // a_n .. a_0
    std::vector<double> discrete_a;  // 1, a_1 .. a_n  (powers of z^-1)
    std::vector<double> discrete_b;  // b_1 .. b_n
    double feedthrough = 0.0;        // removed direct term of the bilinear image
    double rms_residual = 0.0;
    double dt = 0.0;

    int order() const { return static_cast<int>(den.size()) - 1; }

    /// Unit impulse response at t = 0+.
    double impulse_at_zero() const { return num.front() / den.front(); }
};

namespace detail {

// Ascending-power polynomial product.
inline std::vector<double> poly_mul(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

// sum_i c_i (2 - sT)^i (2 + sT)^(n - i), ascending powers of s.
inline std::vector<double> tustin_image(const std::vector<double>& c, int n, double T) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        std::vector<double> term{c[static_cast<std::size_t>(i)]};
        for (int k = 0; k < i; ++k) term = poly_mul(term, {2.0, -T});
        for (int k = i; k < n; ++k) term = poly_mul(term, {2.0, T});
        for (std::size_t j = 0; j < term.size(); ++j) out[j] += term[j];
    }
    return out;
}

}  // namespace detail

/// Equation-error (ARX) least squares of an order-n discrete model
///   y[k] + a_1 y[k-1] + ... + a_n y[k-n] = b_1 u[k-1] + ... + b_n u[k-n],
/// mapped to continuous time with z^-1 = (2 - sT)/(2 + sT). The direct term the
/// bilinear map introduces is split off so the returned model is strictly proper.
inline ReducedModel identify_reduced_model(const TimeSeries& u, const TimeSeries& y, int order = 3) {
    check_aligned(u, y, "identify_reduced_model");
    if (order < 1) throw InvalidParameter("model order must be at least 1");
    const auto n = static_cast<std::size_t>(order);
    if (y.size() < 4 * n + 2) throw WindowError("identify_reduced_model: too few samples for the model order");

    const auto rows = static_cast<Eigen::Index>(y.size() - n);
    const auto cols = static_cast<Eigen::Index>(2 * n);
    Eigen::MatrixXd phi(rows, cols);
    Eigen::VectorXd target(rows);
    for (std::size_t k = n; k < y.size(); ++k) {
        const auto r = static_cast<Eigen::Index>(k - n);
        for (std::size_t i = 1; i <= n; ++i) {
            phi(r, static_cast<Eigen::Index>(i - 1)) = -y[k - i];
            phi(r, static_cast<Eigen::Index>(n + i - 1)) = u[k - i];
        }
        target[r] = y[k];
    }
    Eigen::VectorXd scale = phi.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < cols; ++j) {
        if (!(scale[j] > 0.0)) throw RankDeficient("identify_reduced_model: regressor column is identically zero");
        phi.col(j) /= scale[j];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
    qr.setThreshold(1e-10);
    if (qr.rank() < cols) throw RankDeficient("identify_reduced_model: normal equations are rank deficient");
    Eigen::VectorXd theta = qr.solve(target);
    const double rms = std::sqrt((phi * theta - target).squaredNorm() / static_cast<double>(rows));
    theta = theta.cwiseQuotient(scale);

    ReducedModel model;
    model.dt = y.dt();
    model.rms_residual = rms;
    std::vector<double> a(n + 1, 0.0), b(n + 1, 0.0);
    a[0] = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
        a[i] = theta[static_cast<Eigen::Index>(i - 1)];
        b[i] = theta[static_cast<Eigen::Index>(n + i - 1)];
    }
    model.discrete_a = a;
    model.discrete_b.assign(b.begin() + 1, b.end());

    const auto den_s = detail::tustin_image(a, order, y.dt());
    auto num_s = detail::tustin_image(b, order, y.dt());
    const double lead = den_s.back();
    if (std::abs(lead) < 1e-300) throw RankDeficient("identify_reduced_model: continuous model loses its order");
    model.feedthrough = num_s.back() / lead;
    for (std::size_t j = 0; j < num_s.size(); ++j) num_s[j] -= model.feedthrough * den_s[j];

    model.den.assign(den_s.rbegin(), den_s.rend());
    model.num.assign(num_s.rbegin() + 1, num_s.rend());
    return model;
}

/// H = 1 / (2 |h(0+)|) with h(0+) = b_{n-1} / a_n. The frequency response to a
/// load increase is negative, hence the magnitude.
inline InertiaEstimate estimate_tuttelberg(const ReducedModel& model) {
    if (model.num.empty() || model.num.size() >= model.den.size() || model.den.front() == 0.0)
        throw InvalidParameter("tuttelberg: model is not strictly proper");
    const double h0 = model.impulse_at_zero();
    if (std::abs(h0) < 1e-12) throw UndefinedEstimate("tuttelberg: impulse response vanishes at t = 0");
    return detail::finite_estimate(Method::Tuttelberg, 1.0 / (2.0 * std::abs(h0)),
                                   {{"impulse_0", h0}, {"order", model.order()}, {"rms_residual", model.rms_residual},
                                    {"feedthrough", model.feedthrough}});
}

}  // namespace inertia
