#pragma once

#include <cmath>
#include <vector>

#include "srae/measures.hpp"
#include "srae/rootfind.hpp"

namespace srae {

// Numerical certification of the derivative/convexity claims behind the
// monogamy machinery: analytic derivative expressions, finite-difference
// cross-checks, boundary limits, critical orders and critical curves.

namespace detail {

constexpr double kLn2 = 0.6931471805599453;

struct SplitX {
    double a;    // 1 + sqrt(1-x)
    double b;    // 1 - sqrt(1-x), computed cancellation-free
    double root; // sqrt(1-x)
};

inline SplitX split_x(double x) {
    if (!(x > 0.0 && x < 1.0))
        throw std::invalid_argument("x must be interior to (0,1); use the limit expressions");
    const double root = std::sqrt(1.0 - x);
    return SplitX{1.0 + root, x / (1.0 + root), root};
}

// ln of 2^-alpha (A^alpha + B^alpha) = ln((A/2)^alpha + (B/2)^alpha).
inline double log_scaled_powersum(const SplitX& s, double alpha) {
    return std::log(std::pow(s.a / 2.0, alpha) + std::pow(s.b / 2.0, alpha));
}

} // namespace detail

/// First derivative of the squared Renyi-alpha entanglement with respect to
/// the squared concurrence x, from the closed-form expression. The order-1
/// case switches to the binary-entropy branch.
inline double d1_sq_renyi(double x, double alpha) {
    const detail::SplitX s = detail::split_x(x);
    if (std::abs(alpha - 1.0) < 1e-6) {
        const double a = s.a / 2.0;
        const double b = s.b / 2.0;
        double h = 0.0;
        if (a > 0.0) h -= a * std::log2(a);
        if (b > 0.0) h -= b * std::log2(b);
        return h * std::log2(a / b) / (2.0 * s.root);
    }
    const double pa = std::pow(s.a, alpha);
    const double pb = std::pow(s.b, alpha);
    const double num = alpha * (std::pow(s.b, alpha - 1.0) - std::pow(s.a, alpha - 1.0)) *
                       detail::log_scaled_powersum(s, alpha);
    const double den = (1.0 - alpha) * (1.0 - alpha) * (pa + pb) * s.root *
                       detail::kLn2 * detail::kLn2;
    return num / den;
}

namespace detail {

// Scaled second derivative of the squared Renyi-alpha entanglement:
// (1-alpha)^2 d^2(E_alpha^2)/dx^2, evaluated from the closed form. Defined
// for every positive order; identically zero along alpha = 1.
inline double convexity_kernel(double x, double alpha) {
    const SplitX s = split_x(x);
    const double pa = std::pow(s.a, alpha);
    const double pb = std::pow(s.b, alpha);
    const double pa1 = std::pow(s.a, alpha - 1.0);
    const double pb1 = std::pow(s.b, alpha - 1.0);
    const double pa2 = std::pow(s.a, alpha - 2.0);
    const double pb2 = std::pow(s.b, alpha - 2.0);
    const double powersum = pa + pb;
    const double lambda =
        alpha / (2.0 * powersum * powersum * (1.0 - x) * kLn2 * kLn2);
    const double diff1 = pa1 - pb1;
    const double bracket = (pb1 - pa1) * powersum / s.root +
                           (alpha - 1.0) * (pa2 + pb2) * powersum -
                           alpha * diff1 * diff1;
    return lambda * (alpha * diff1 * diff1 + bracket * log_scaled_powersum(s, alpha));
}

} // namespace detail

/// Convexity kernel h_alpha for orders >= 1 (the regime the convexity proof
/// scans); equals (1-alpha)^2 times the second x-derivative of the squared
/// entanglement.
inline double h_alpha(double x, double alpha) {
    if (alpha < 1.0 - 1e-12)
        throw std::invalid_argument("convexity kernel is defined for orders >= 1");
    return detail::convexity_kernel(x, alpha);
}

/// First derivative of the (unsquared) Renyi-alpha entanglement in x.
inline double d1_renyi(double x, double alpha) {
    const detail::SplitX s = detail::split_x(x);
    if (std::abs(alpha - 1.0) < 1e-6) {
        const double a = s.a / 2.0;
        const double b = s.b / 2.0;
        return std::log2(a / b) / (4.0 * s.root);
    }
    const double pa = std::pow(s.a, alpha);
    const double pb = std::pow(s.b, alpha);
    const double num = alpha * (std::pow(s.b, alpha - 1.0) - std::pow(s.a, alpha - 1.0));
    const double den = 2.0 * (1.0 - alpha) * (pa + pb) * s.root * detail::kLn2;
    return num / den;
}

// Boundary limits of the derivative expressions.
inline double h_alpha_limit_x0(double alpha) {
    return alpha * alpha / (8.0 * detail::kLn2 * detail::kLn2);
}
inline double h_alpha_limit_x1(double alpha) {
    const double one_m = 1.0 - alpha;
    return one_m * one_m * alpha *
           (3.0 * alpha + 2.0 * (alpha * alpha + alpha - 3.0) * detail::kLn2) /
           (6.0 * detail::kLn2 * detail::kLn2);
}
inline double d2_sq_renyi_limit_x1(double alpha) {
    return alpha * (3.0 * alpha + 2.0 * (alpha * alpha + alpha - 3.0) * detail::kLn2) /
           (6.0 * detail::kLn2 * detail::kLn2);
}
inline double d2_renyi_limit_x1(double alpha) {
    return alpha * (alpha * alpha + alpha - 3.0) / (6.0 * detail::kLn2);
}

namespace detail {

inline double interior_step(double x, double step) {
    return std::min({step, x / 8.0, (1.0 - x) / 8.0});
}

// Central difference with one Richardson extrapolation level.
template <typename F>
double fd_first(F&& f, double x, double h) {
    auto d = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2.0 * hh); };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

template <typename F>
double fd_second(F&& f, double x, double h) {
    auto d = [&](double hh) { return (f(x + hh) - 2.0 * f(x) + f(x - hh)) / (hh * hh); };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

} // namespace detail

/// Second x-derivative of the Renyi-alpha entanglement: finite difference of
/// the analytic first derivative.
inline double d2_renyi_fd(double x, double alpha, double step = 1e-5) {
    const double h = detail::interior_step(x, step);
    return detail::fd_first([alpha](double t) { return d1_renyi(t, alpha); }, x, h);
}

/// Second x-derivative of the squared Renyi-alpha entanglement, same route.
inline double d2_sq_renyi_fd(double x, double alpha, double step = 1e-5) {
    const double h = detail::interior_step(x, step);
    return detail::fd_first([alpha](double t) { return d1_sq_renyi(t, alpha); }, x, h);
}

enum class DerivativeFormula {
    d1_sq_renyi,
    h_alpha,
    d1_renyi,
    d2_renyi_fd,
    d2_sq_renyi_fd,
};

/// Grid of derivative values; x points must stay interior since the
/// expressions are singular at the boundary.
struct DerivativeGrid {
    std::vector<double> x_points;
    std::vector<double> alpha_points;
    std::vector<std::vector<double>> values; // values[i][j] at (x_i, alpha_j)
    DerivativeFormula formula_id;
};

inline double evaluate_formula(DerivativeFormula id, double x, double alpha) {
    switch (id) {
        case DerivativeFormula::d1_sq_renyi: return d1_sq_renyi(x, alpha);
        case DerivativeFormula::h_alpha: return h_alpha(x, alpha);
        case DerivativeFormula::d1_renyi: return d1_renyi(x, alpha);
        case DerivativeFormula::d2_renyi_fd: return d2_renyi_fd(x, alpha);
        case DerivativeFormula::d2_sq_renyi_fd: return d2_sq_renyi_fd(x, alpha);
    }
    throw std::invalid_argument("unknown derivative formula");
}

inline DerivativeGrid evaluate_grid(DerivativeFormula id, std::vector<double> x_points,
                                    std::vector<double> alpha_points) {
    for (double x : x_points)
        if (!(x > 0.0 && x < 1.0))
            throw std::invalid_argument("grid x points must be interior to (0,1)");
    DerivativeGrid grid{std::move(x_points), std::move(alpha_points), {}, id};
    grid.values.resize(grid.x_points.size(),
                       std::vector<double>(grid.alpha_points.size(), 0.0));
    for (std::size_t i = 0; i < grid.x_points.size(); ++i)
        for (std::size_t j = 0; j < grid.alpha_points.size(); ++j)
            grid.values[i][j] = evaluate_formula(id, grid.x_points[i], grid.alpha_points[j]);
    return grid;
}

struct FdCheck {
    double analytic;
    double numeric;
    double rel_err;
};

/// Cross-check an analytic derivative expression against a Richardson
/// finite difference taken directly on the underlying function.
inline FdCheck fd_check(DerivativeFormula id, double x, double alpha, double step = 1e-5) {
    const double h = detail::interior_step(x, step);
    const AlphaOrder order(alpha);
    auto f = [order](double t) { return f_alpha(t, order); };
    auto fsq = [order](double t) {
        const double v = f_alpha(t, order);
        return v * v;
    };

    double analytic = 0.0;
    double numeric = 0.0;
    switch (id) {
        case DerivativeFormula::d1_sq_renyi:
            analytic = d1_sq_renyi(x, alpha);
            numeric = detail::fd_first(fsq, x, h);
            break;
        case DerivativeFormula::h_alpha:
            analytic = h_alpha(x, alpha);
            numeric = (1.0 - alpha) * (1.0 - alpha) * detail::fd_second(fsq, x, h);
            break;
        case DerivativeFormula::d1_renyi:
            analytic = d1_renyi(x, alpha);
            numeric = detail::fd_first(f, x, h);
            break;
        case DerivativeFormula::d2_renyi_fd:
            analytic = d2_renyi_fd(x, alpha, step);
            numeric = detail::fd_second(f, x, h);
            break;
        case DerivativeFormula::d2_sq_renyi_fd:
            analytic = d2_sq_renyi_fd(x, alpha, step);
            numeric = detail::fd_second(fsq, x, h);
            break;
    }
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-300});
    return FdCheck{analytic, numeric, std::abs(analytic - numeric) / scale};
}

// ---------------------------------------------------------------------------
// Critical orders and critical curves.
// ---------------------------------------------------------------------------

enum class CriticalOrder { convexity_onset, concavity_end };

inline double critical_alpha_closed_form(CriticalOrder which) {
    if (which == CriticalOrder::convexity_onset) {
        const double c = 2.0 * detail::kLn2 + 3.0;
        return (-c + std::sqrt(c * c + 48.0 * detail::kLn2 * detail::kLn2)) / (4.0 * detail::kLn2);
    }
    return (std::sqrt(13.0) - 1.0) / 2.0;
}

/// Critical orders located by bisection on the x -> 1 limit expressions.
/// convexity_onset: positive root of 3a + 2(a^2+a-3) ln 2 (~0.764);
/// concavity_end: positive root of a^2 + a - 3 (~1.303).
inline double critical_alpha(CriticalOrder which) {
    if (which == CriticalOrder::convexity_onset)
        return bisect(
            [](double a) { return 3.0 * a + 2.0 * (a * a + a - 3.0) * detail::kLn2; }, 0.5, 1.0,
            1e-12);
    return bisect([](double a) { return a * a + a - 3.0; }, 1.0, 2.0, 1e-12);
}

enum class CurveEquation {
    dhdx_zero,       // partial_x of the convexity kernel = 0 (orders > 1)
    dhdalpha_zero,   // partial_alpha of the convexity kernel = 0 (orders > 1)
    d2_sq_zero,      // d^2(E_alpha^2)/dx^2 = 0 (orders < 1)
    d2_zero,         // d^2(E_alpha)/dx^2 = 0 (orders > concavity_end)
};

struct CurvePoint {
    double x;
    double alpha;
};

struct CriticalCurve {
    std::vector<CurvePoint> points;
    std::vector<double> gaps; // grid-line coordinates where no root was found
};

namespace detail {

inline double dkernel_dx(double x, double alpha) {
    const double h = interior_step(x, 1e-5);
    return (convexity_kernel(x + h, alpha) - convexity_kernel(x - h, alpha)) / (2.0 * h);
}

inline double dkernel_dalpha(double x, double alpha) {
    const double h = 1e-5;
    return (convexity_kernel(x, alpha + h) - convexity_kernel(x, alpha - h)) / (2.0 * h);
}

template <typename F>
void scan_roots(F&& f, const std::vector<double>& samples, std::vector<double>& roots) {
    roots.clear();
    double prev = f(samples.front());
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double cur = f(samples[i]);
        if (prev == 0.0) roots.push_back(samples[i - 1]);
        else if ((prev > 0.0) != (cur > 0.0))
            roots.push_back(bisect(f, samples[i - 1], samples[i], 1e-10));
        prev = cur;
    }
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return v;
}

} // namespace detail

/// Extract a zero-level curve of the named equation. Grid lines without a
/// root are recorded in the gap list rather than failing.
inline CriticalCurve critical_curve(CurveEquation equation, std::size_t grid_points = 64) {
    if (grid_points < 50) throw std::invalid_argument("grid resolution must be at least 50");
    CriticalCurve curve;
    std::vector<double> roots;

    if (equation == CurveEquation::dhdx_zero || equation == CurveEquation::dhdalpha_zero) {
        // One alpha line at a time, roots located in x.
        const std::vector<double> alphas = detail::linspace(1.02, 3.0, grid_points);
        const std::vector<double> xs = detail::linspace(0.01, 0.99, grid_points);
        for (double alpha : alphas) {
            auto f = [&](double x) {
                return equation == CurveEquation::dhdx_zero ? detail::dkernel_dx(x, alpha)
                                                            : detail::dkernel_dalpha(x, alpha);
            };
            detail::scan_roots(f, xs, roots);
            if (roots.empty()) curve.gaps.push_back(alpha);
            for (double x : roots) curve.points.push_back({x, alpha});
        }
        return curve;
    }

    // One x line at a time, roots located in alpha.
    const std::vector<double> xs = detail::linspace(0.05, 0.9995, grid_points);
    const std::vector<double> alphas = equation == CurveEquation::d2_sq_zero
                                           ? detail::linspace(0.05, 0.995, grid_points)
                                           : detail::linspace(1.05, 8.0, grid_points);
    for (double x : xs) {
        auto f = [&](double alpha) {
            return equation == CurveEquation::d2_sq_zero ? d2_sq_renyi_fd(x, alpha)
                                                         : d2_renyi_fd(x, alpha);
        };
        detail::scan_roots(f, alphas, roots);
        if (roots.empty()) curve.gaps.push_back(x);
        for (double alpha : roots) curve.points.push_back({x, alpha});
    }
    return curve;
}

} // namespace srae
