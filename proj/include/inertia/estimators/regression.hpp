#pragma once

#include <vector>

#include "inertia/estimators/common.hpp"

namespace inertia {

struct VirtualInertiaPoint {
    double wpi = 0.0;  // wind power integration, %
    double h_v = 0.0;  // s
};

struct LinearRelation {
    double slope = 0.0;  // s per %
    double r_squared = 0.0;
};

/// Zero-intercept least squares h_v = slope * wpi. R^2 uses the centered total sum of squares.
inline LinearRelation fit_virtual_inertia_relation(const std::vector<VirtualInertiaPoint>& pts) {
    if (pts.size() < 2) throw InvalidParameter("regression needs at least two points");
    bool distinct = false;
    for (const auto& p : pts)
        if (p.wpi != pts.front().wpi) distinct = true;
    if (!distinct) throw InvalidParameter("regression needs at least two distinct WPI values");

    double sxy = 0.0, sxx = 0.0, mean_y = 0.0;
    for (const auto& p : pts) {
        sxy += p.wpi * p.h_v;
        sxx += p.wpi * p.wpi;
        mean_y += p.h_v;
    }
    mean_y /= static_cast<double>(pts.size());
    const double slope = sxy / sxx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& p : pts) {
        const double e = p.h_v - slope * p.wpi;
        ss_res += e * e;
        ss_tot += (p.h_v - mean_y) * (p.h_v - mean_y);
    }
    double r2 = 0.0;
    if (ss_tot > 0.0)
        r2 = 1.0 - ss_res / ss_tot;
    else
        r2 = ss_res <= 1e-30 ? 1.0 : 0.0;
    return {slope, r2};
}

}  // namespace inertia
