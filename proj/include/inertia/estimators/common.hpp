#pragma once

#include <cmath>
#include <map>
#include <string>
#include <string_view>

#include "inertia/core.hpp"

namespace inertia {

enum class Method { Inoue, Chassin, Wall, Zografos17, Tuttelberg, ZografosR };

inline constexpr Method kAllMethods[] = {Method::Inoue,      Method::Chassin,    Method::Wall,
                                         Method::Zografos17, Method::Tuttelberg, Method::ZografosR};

inline std::string_view method_name(Method m) {
    switch (m) {
    case Method::Inoue: return "inoue";
    case Method::Chassin: return "chassin";
    case Method::Wall: return "wall";
    case Method::Zografos17: return "zografos17";
    case Method::Tuttelberg: return "tuttelberg";
    case Method::ZografosR: return "zografos-r";
    }
    return "";
}

inline Method parse_method(std::string_view name) {
    for (Method m : kAllMethods)
        if (method_name(m) == name) return m;
    throw InvalidParameter("unknown estimation method '" + std::string(name) + "'");
}

struct InertiaEstimate {
    Method method = Method::Inoue;
    double h_est = 0.0;  // s
    std::map<std::string, double> diagnostics;
};

/// Known disturbance. `dp` is the signed imbalance dP_m - dP_L, so a load
/// increase of 0.05 pu is dp = -0.05 and every estimate comes out positive.
struct DisturbanceInfo {
    double dp = -0.05;
    double t_dist = 50.0;

    void validate() const {
        if (!(dp != 0.0) || !std::isfinite(dp)) throw InvalidParameter("disturbance size must be non-zero");
    }
};

namespace detail {

inline InertiaEstimate finite_estimate(Method m, double h, std::map<std::string, double> diag = {}) {
    if (!std::isfinite(h)) throw UndefinedEstimate(std::string(method_name(m)) + ": estimate is not finite");
    return {m, h, std::move(diag)};
}

inline std::size_t disturbance_index(const TimeSeries& ts, double t_dist, const char* who) {
    if (!ts.covers(t_dist)) throw WindowError(std::string(who) + ": disturbance time outside the series");
    return ts.index_of(t_dist);
}

}  // namespace detail
}  // namespace inertia
