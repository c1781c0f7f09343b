#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace srae {

/// Bisection on a bracketing interval. Robust over fast: every root search in
/// this toolkit runs on provably bracketed monotone scans.
template <typename F>
double bisect(F&& f, double lo, double hi, double x_tol = 1e-12, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisection interval does not bracket a root");
    for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace srae
