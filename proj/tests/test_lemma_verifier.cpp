#include <catch2/catch_amalgamated.hpp>

#include "srae/lemma_verifier.hpp"

using namespace srae;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return v;
}

const std::vector<double> kLemma1Alphas = {0.83, 0.9, 0.95, 0.99, 1.0, 1.05,
                                           1.1,  1.3, 1.5,  2.0,  2.5, 3.0};

} // namespace

TEST_CASE("first derivative of the squared entanglement is positive") {
    double min_value = 1e300;
    for (double x : linspace(0.001, 0.999, 200))
        for (double a : kLemma1Alphas) min_value = std::min(min_value, d1_sq_renyi(x, a));
    CHECK(min_value > 0.0);
    CHECK_THROWS_AS(d1_sq_renyi(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(d1_sq_renyi(1.0, 2.0), std::invalid_argument);
}

TEST_CASE("sign of the first derivative is uniform across orders") {
    for (double x : {0.05, 0.3, 0.6, 0.9})
        for (double a : linspace(0.83, 3.0, 40)) CHECK(d1_sq_renyi(x, a) > 0.0);
}

TEST_CASE("convexity kernel nonnegative with vanishing order-1 boundary") {
    double min_kernel = 1e300;
    for (double x : linspace(0.001, 0.999, 150))
        for (double a : linspace(1.0, 3.0, 60)) min_kernel = std::min(min_kernel, h_alpha(x, a));
    CHECK(min_kernel >= -1e-9);

    for (double x : linspace(0.01, 0.99, 25)) CHECK(h_alpha(x, 1.0) == 0.0);
    CHECK_THROWS_AS(h_alpha(0.5, 0.9), std::invalid_argument);
}

TEST_CASE("kernel boundary limits") {
    // x -> 0 limit at order 2 is ~1.0407, positive.
    CHECK(h_alpha_limit_x0(2.0) == Catch::Approx(1.0407).margin(1e-4));
    for (double a : {1.5, 2.0, 2.5, 3.0}) {
        CHECK(h_alpha(1e-8, a) ==
              Catch::Approx(h_alpha_limit_x0(a)).epsilon(1e-3));
        CHECK(h_alpha(1.0 - 1e-8, a) ==
              Catch::Approx(h_alpha_limit_x1(a)).epsilon(1e-3));
        CHECK(h_alpha_limit_x1(a) > 0.0);
    }
    // The x -> 1 limit grows monotonically above order 1.
    double prev = h_alpha_limit_x1(1.1);
    for (double a = 1.2; a <= 3.0; a += 0.1) {
        const double cur = h_alpha_limit_x1(a);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("first derivative of the unsquared entanglement is nonnegative") {
    CHECK(d1_renyi(0.5, 0.83) > 0.0);
    CHECK(d1_renyi(0.5, 2.0) > 0.0);
    CHECK(d1_renyi(0.3, 0.4) > 0.0);
    CHECK(d1_renyi(0.3, 5.0) > 0.0);
    double min_value = 1e300;
    for (double x : linspace(0.001, 0.999, 200))
        for (double a : {0.2, 0.5, 0.83, 1.0, 1.5, 3.0})
            min_value = std::min(min_value, d1_renyi(x, a));
    CHECK(min_value > 0.0);
}

TEST_CASE("squared entanglement stays convex below order one") {
    double min_value = 1e300;
    for (double x : linspace(0.001, 0.999, 150))
        for (double a : linspace(0.83, 0.999, 30))
            min_value = std::min(min_value, d2_sq_renyi_fd(x, a));
    CHECK(min_value >= -1e-9);
}

TEST_CASE("entanglement is concave inside the concavity window") {
    // The window's right edge is the exact concavity endpoint; its printed
    // 1.303 rounding lies just outside and already turns the sign.
    double max_value = -1e300;
    for (double x : linspace(0.001, 0.999, 150))
        for (double a : linspace(0.83, kAlphaConcaveMax, 30))
            max_value = std::max(max_value, d2_renyi_fd(x, a));
    CHECK(max_value <= 1e-9);
    CHECK(d2_renyi_fd(0.999, 1.31) > 0.0);
}

TEST_CASE("finite differences confirm the analytic expressions") {
    // The three anchor checks.
    CHECK(fd_check(DerivativeFormula::d1_renyi, 0.5, 2.0).rel_err <= 1e-4);
    CHECK(fd_check(DerivativeFormula::h_alpha, 0.5, 1.5).rel_err <= 1e-4);
    CHECK(fd_check(DerivativeFormula::d1_sq_renyi, 0.9, 1.2).rel_err <= 1e-4);

    double worst = 0.0;
    for (double x : {0.1, 0.25, 0.5, 0.75, 0.9})
        for (double a : {0.83, 0.9, 1.2, 1.5, 2.0, 3.0})
            for (DerivativeFormula id :
                 {DerivativeFormula::d1_sq_renyi, DerivativeFormula::d1_renyi})
                worst = std::max(worst, fd_check(id, x, a).rel_err);
    for (double x : {0.1, 0.25, 0.5, 0.75, 0.9})
        for (double a : {1.2, 1.5, 2.0, 3.0})
            worst = std::max(worst, fd_check(DerivativeFormula::h_alpha, x, a).rel_err);
    // Second-derivative routes agree where the values are bounded away from
    // their zero curves (relative error is meaningless on a crossing). The
    // wider step keeps the direct second difference above its noise floor.
    for (double x : {0.1, 0.5, 0.9})
        for (double a : {0.83, 1.0, 1.2})
            worst = std::max(worst, fd_check(DerivativeFormula::d2_renyi_fd, x, a, 1e-4).rel_err);
    for (double x : {0.1, 0.5, 0.9})
        for (double a : {0.83, 1.5, 3.0})
            worst =
                std::max(worst, fd_check(DerivativeFormula::d2_sq_renyi_fd, x, a, 1e-4).rel_err);
    CHECK(worst <= 1e-4);
}

TEST_CASE("derivative grids evaluate and guard their domain") {
    const DerivativeGrid grid = evaluate_grid(DerivativeFormula::d1_sq_renyi,
                                              linspace(0.01, 0.99, 10), {1.0, 2.0});
    REQUIRE(grid.values.size() == 10);
    REQUIRE(grid.values[0].size() == 2);
    for (const auto& row : grid.values)
        for (double v : row) CHECK(v > 0.0);
    CHECK_THROWS_AS(evaluate_grid(DerivativeFormula::d1_renyi, {0.0, 0.5}, {2.0}),
                    std::invalid_argument);
}

TEST_CASE("critical orders from bisection and closed forms agree") {
    const double c1 = critical_alpha(CriticalOrder::convexity_onset);
    CHECK(std::abs(c1 - critical_alpha_closed_form(CriticalOrder::convexity_onset)) <= 1e-10);
    CHECK(c1 == Catch::Approx(0.764).margin(1e-3));

    const double c2 = critical_alpha(CriticalOrder::concavity_end);
    CHECK(std::abs(c2 - (std::sqrt(13.0) - 1.0) / 2.0) <= 1e-12);
    CHECK(c2 == Catch::Approx(1.303).margin(1e-3));
}

TEST_CASE("zero curves of the second derivatives end at the critical orders") {
    const CriticalCurve convex = critical_curve(CurveEquation::d2_sq_zero, 64);
    REQUIRE_FALSE(convex.points.empty());
    CHECK(convex.gaps.empty());
    // x grows monotonically with the order along the curve.
    for (std::size_t i = 1; i < convex.points.size(); ++i)
        CHECK(convex.points[i].alpha >= convex.points[i - 1].alpha - 1e-9);
    CHECK(convex.points.back().alpha ==
          Catch::Approx(critical_alpha(CriticalOrder::convexity_onset)).margin(2e-3));

    const CriticalCurve concave = critical_curve(CurveEquation::d2_zero, 64);
    REQUIRE_FALSE(concave.points.empty());
    CHECK(concave.gaps.empty());
    for (std::size_t i = 1; i < concave.points.size(); ++i)
        CHECK(concave.points[i].alpha <= concave.points[i - 1].alpha + 1e-9);
    CHECK(concave.points.back().alpha ==
          Catch::Approx(critical_alpha(CriticalOrder::concavity_end)).margin(2e-3));
}

TEST_CASE("kernel gradient curves meet only on the order-1 boundary") {
    const CriticalCurve dx = critical_curve(CurveEquation::dhdx_zero, 64);
    const CriticalCurve dalpha = critical_curve(CurveEquation::dhdalpha_zero, 64);
    // No interior stationary point solves both equations at once: every
    // near-coincident pair must sit essentially on the order-1 line.
    for (const CurvePoint& a : dx.points)
        for (const CurvePoint& b : dalpha.points) {
            const double dist = std::hypot(a.x - b.x, a.alpha - b.alpha);
            if (dist < 1e-2) CHECK(a.alpha <= 1.0 + 1e-2);
        }
    // The order-1 line itself solves the first equation identically.
    for (double x : linspace(0.05, 0.95, 10))
        CHECK(std::abs(h_alpha(x + 1e-5, 1.0) - h_alpha(x - 1e-5, 1.0)) <= 1e-15);
    CHECK_THROWS_AS(critical_curve(CurveEquation::d2_zero, 10), std::invalid_argument);
}
