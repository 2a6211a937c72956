#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "opjensen/errors.hpp"

namespace opjensen {

// Root of g on [lo, hi] by bisection. Requires a strict sign change;
// an endpoint value of exactly zero is returned as the root.
inline double bisect(const std::function<double(double)>& g, double lo, double hi,
                     double t_tol = 1e-12, int max_iter = 200) {
    double g_lo = g(lo);
    double g_hi = g(hi);
    if (g_lo == 0.0) return lo;
    if (g_hi == 0.0) return hi;
    if ((g_lo > 0.0) == (g_hi > 0.0))
        throw BracketingError("no sign change over bracket: g(lo)=" + std::to_string(g_lo) +
                                  ", g(hi)=" + std::to_string(g_hi),
                              g_lo, g_hi);
    for (int it = 0; it < max_iter && hi - lo > t_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = g(mid);
        if (g_mid == 0.0) return mid;
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section minimum of f on [lo, hi]. Ties shrink toward lo, so on a
// flat stretch the left end wins.
inline std::pair<double, double> golden_min(const std::function<double(double)>& f, double lo,
                                            double hi, double x_tol = 1e-10) {
    constexpr double ratio = 0.6180339887498949;  // (sqrt(5)-1)/2
    double a = lo, b = hi;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// Global scan on a uniform grid followed by golden-section refinement in the
// bracket around the best grid point. The refined point replaces the grid
// point only on strict improvement, so grid ties resolve to the smallest x.
inline std::pair<double, double> grid_golden_min(const std::function<double(double)>& f, double lo,
                                                 double hi, int grid_points,
                                                 double x_tol = 1e-10) {
    if (grid_points < 3) throw ConfigError("grid must have at least 3 points");
    double best_x = lo;
    double best_f = f(lo);
    int best_k = 0;
    const double step = (hi - lo) / (grid_points - 1);
    for (int k = 1; k < grid_points; ++k) {
        const double x = (k == grid_points - 1) ? hi : lo + step * k;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
            best_k = k;
        }
    }
    const double bracket_lo = (best_k == 0) ? lo : lo + step * (best_k - 1);
    const double bracket_hi = (best_k == grid_points - 1) ? hi : lo + step * (best_k + 1);
    const auto [rx, rf] = golden_min(f, bracket_lo, bracket_hi, x_tol);
    if (rf < best_f) return {rx, rf};
    return {best_x, best_f};
}

}  // namespace opjensen
