#include <catch2/catch_amalgamated.hpp>

#include "srae/measures.hpp"
#include "srae/state_factory.hpp"
#include "support/random_states.hpp"

using namespace srae;

namespace {

// Independent oracle for the order-1 branch: binary entropy of the larger
// Schmidt weight.
double binary_entropy(double a) {
    double h = 0.0;
    if (a > 0.0) h -= a * std::log2(a);
    if (a < 1.0) h -= (1.0 - a) * std::log2(1.0 - a);
    return h;
}

double f1_oracle(double x) { return binary_entropy((1.0 + std::sqrt(1.0 - x)) / 2.0); }

const std::vector<double> kAlphaSamples = {0.83, 0.9, 1.0, 1.2, 2.0, 3.0, 7.0};

PureState bell_pair() {
    const double r = 1.0 / std::sqrt(2.0);
    return PureState({2, 2}, {r, 0.0, 0.0, r});
}

} // namespace

TEST_CASE("alpha order validation and windows") {
    CHECK_THROWS_AS(AlphaOrder(0.0), std::invalid_argument);
    CHECK_THROWS_AS(AlphaOrder(-1.0), std::invalid_argument);

    CHECK(AlphaOrder(1.0).is_eof_limit());
    CHECK(AlphaOrder(1.0 + 5e-7).is_eof_limit());
    CHECK_FALSE(AlphaOrder(1.0 + 1e-4).is_eof_limit());

    CHECK(AlphaOrder(kAlphaFormulaMin).in_two_qubit_window());
    CHECK_FALSE(AlphaOrder(kAlphaFormulaMin - 1e-6).in_two_qubit_window());
    CHECK(AlphaOrder(kAlphaConcaveMax).in_concave_window());
    CHECK_FALSE(AlphaOrder(1.31).in_concave_window());
    CHECK(AlphaOrder(2.0).in_two_qubit_window());
}

TEST_CASE("Renyi entropy on flat, pure and qutrit spectra") {
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= cplx{0.5, 0.0};
    const DensityMatrix mixed({2}, half);
    ComplexMatrix third = ComplexMatrix::identity(3);
    third *= cplx{1.0 / 3.0, 0.0};
    const DensityMatrix qutrit({3}, third);
    const DensityMatrix pure = density_of(PureState({2}, {1.0, 0.0}));

    for (double a : kAlphaSamples) {
        CHECK(renyi_entropy(mixed, AlphaOrder(a)) == Catch::Approx(1.0).margin(1e-12));
        CHECK(renyi_entropy(pure, AlphaOrder(a)) == Catch::Approx(0.0).margin(1e-12));
        CHECK(renyi_entropy(qutrit, AlphaOrder(a)) == Catch::Approx(std::log2(3.0)).margin(1e-12));
    }
}

TEST_CASE("zero eigenvalues contribute nothing and tiny negatives are clipped") {
    CHECK(renyi_entropy_from_spectrum({0.5, 0.5, 0.0, -5e-11}, AlphaOrder(0.9)) ==
          Catch::Approx(1.0).margin(1e-9));
    CHECK_THROWS_AS(renyi_entropy_from_spectrum({1.1, -0.1}, AlphaOrder(2.0)), state_error);
}

TEST_CASE("f_alpha endpoints and the order-1 oracle value") {
    for (double a : kAlphaSamples) {
        CHECK(f_alpha(0.0, AlphaOrder(a)) == Catch::Approx(0.0).margin(1e-12));
        CHECK(f_alpha(1.0, AlphaOrder(a)) == Catch::Approx(1.0).margin(1e-12));
    }
    // Frozen from the oracle below; feeds the k=3 table entry at order 1.
    CHECK(f_alpha(24.0 / 49.0, AlphaOrder(1.0)) == Catch::Approx(0.591673).margin(5e-7));
    for (double x : {0.1, 0.3, 24.0 / 49.0, 0.7, 0.95})
        CHECK(f_alpha(x, AlphaOrder(1.0)) == Catch::Approx(f1_oracle(x)).margin(1e-12));
}

TEST_CASE("f_alpha rejects orders below the window and bad arguments") {
    CHECK_THROWS_AS(f_alpha(0.5, AlphaOrder(0.5)), window_error);
    CHECK_THROWS_AS(f_alpha(0.5, AlphaOrder(0.82)), window_error);
    CHECK_THROWS_AS(f_alpha(1.5, AlphaOrder(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(f_alpha(-0.1, AlphaOrder(1.0)), std::invalid_argument);
    CHECK_NOTHROW(f_alpha(1.0 + 5e-13, AlphaOrder(1.0))); // inside the clamp slack
}

TEST_CASE("squared f_alpha is monotone and convex on the grid") {
    const std::size_t kPoints = 1000;
    for (double a : {0.83, 1.0, 1.5, 2.0, 3.0}) {
        const AlphaOrder order(a);
        std::vector<double> fsq(kPoints);
        for (std::size_t i = 0; i < kPoints; ++i) {
            const double x = double(i) / double(kPoints - 1);
            const double f = f_alpha(x, order);
            fsq[i] = f * f;
        }
        double min_first = 1e300;
        for (std::size_t i = 1; i < kPoints; ++i) min_first = std::min(min_first, fsq[i] - fsq[i - 1]);
        CHECK(min_first > 0.0);

        double min_second = 1e300;
        for (std::size_t i = 1; i + 1 < kPoints; ++i)
            min_second = std::min(min_second, fsq[i + 1] - 2.0 * fsq[i] + fsq[i - 1]);
        CHECK(min_second >= -1e-9);
    }
}

TEST_CASE("f_alpha itself is concave in the concavity window") {
    const std::size_t kPoints = 1000;
    for (double a : {0.83, 1.0, 1.3}) {
        const AlphaOrder order(a);
        std::vector<double> f(kPoints);
        for (std::size_t i = 0; i < kPoints; ++i)
            f[i] = f_alpha(double(i) / double(kPoints - 1), order);
        double max_second = -1e300;
        for (std::size_t i = 1; i + 1 < kPoints; ++i)
            max_second = std::max(max_second, f[i + 1] - 2.0 * f[i] + f[i - 1]);
        CHECK(max_second <= 1e-9);
    }
}

TEST_CASE("f_alpha is continuous across the order-1 branch switch") {
    for (double x = 0.0; x <= 1.0; x += 0.01) {
        const double center = f_alpha(x, AlphaOrder(1.0));
        CHECK(std::abs(f_alpha(x, AlphaOrder(1.0 + 1e-4)) - center) <= 1e-3);
        CHECK(std::abs(f_alpha(x, AlphaOrder(1.0 - 1e-4)) - center) <= 1e-3);
    }
}

TEST_CASE("pure-state concurrence across cuts") {
    CHECK(concurrence_pure(bell_pair(), Cut({0}, 2)) == Catch::Approx(1.0).margin(1e-12));

    const PureState product({2, 2}, {1.0, 0.0, 0.0, 0.0});
    CHECK(concurrence_pure(product, Cut({0}, 2)) == Catch::Approx(0.0).margin(1e-12));

    CHECK(concurrence_pure(w_state(7), Cut({0}, 7)) ==
          Catch::Approx(std::sqrt(24.0 / 49.0)).margin(1e-12));
}

TEST_CASE("Wootters concurrence on the standard cases") {
    CHECK(concurrence_wootters(density_of(bell_pair())) == Catch::Approx(1.0).margin(1e-9));

    ComplexMatrix quarter = ComplexMatrix::identity(4);
    quarter *= cplx{0.25, 0.0};
    CHECK(concurrence_wootters(DensityMatrix({2, 2}, quarter)) == Catch::Approx(0.0).margin(1e-9));

    // Closed-form oracle max(0, (3p-1)/2) for the isotropic Bell mixture,
    // anchored by the eigenvalue procedure at the endpoints above.
    for (double p : {0.0, 0.25, 0.4, 0.5, 0.75, 1.0}) {
        ComplexMatrix m = density_of(bell_pair()).matrix();
        m *= cplx{p, 0.0};
        ComplexMatrix iso = ComplexMatrix::identity(4);
        iso *= cplx{(1.0 - p) / 4.0, 0.0};
        m += iso;
        const double expected = std::max(0.0, (3.0 * p - 1.0) / 2.0);
        CHECK(concurrence_wootters(DensityMatrix({2, 2}, m)) ==
              Catch::Approx(expected).margin(1e-9));
    }

    CHECK_THROWS_WITH(concurrence_wootters(density_of(PureState({2}, {1.0, 0.0}))),
                      "two-qubit input required");
}

TEST_CASE("Wootters agrees with the pure-state concurrence on projectors") {
    testing::Rng rng(808);
    for (int trial = 0; trial < 1000; ++trial) {
        const PureState psi = testing::random_pure_state({2, 2}, rng);
        const double pure = concurrence_pure(psi, Cut({0}, 2));
        const double wootters = concurrence_wootters(density_of(psi));
        CHECK(std::abs(pure - wootters) < 1e-9);
    }
}

TEST_CASE("pure-state Renyi entanglement basics") {
    for (double a : kAlphaSamples) {
        CHECK(e_alpha_pure(bell_pair(), Cut({0}, 2), AlphaOrder(a)) ==
              Catch::Approx(1.0).margin(1e-12));
        CHECK(e_alpha_pure(ghz_state(3), Cut({0}, 3), AlphaOrder(a)) ==
              Catch::Approx(1.0).margin(1e-12));
        CHECK(e_alpha_pure(ou_antisymmetric_state(), Cut({0}, 3), AlphaOrder(a)) ==
              Catch::Approx(std::log2(3.0)).margin(1e-12));
    }
}

TEST_CASE("entropy route matches the concurrence formula on pure 2xd states") {
    testing::Rng rng(909);
    for (const auto& dims : {std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{2, 4}}) {
        for (int trial = 0; trial < 50; ++trial) {
            const PureState psi = testing::random_pure_state(dims, rng);
            const Cut cut({0}, dims.size());
            const double c = concurrence_pure(psi, cut);
            for (double a : {0.83, 1.0, 1.2, 2.0}) {
                const AlphaOrder order(a);
                CHECK(std::abs(e_alpha_pure(psi, cut, order) - f_alpha(c * c, order)) < 1e-9);
            }
        }
    }
}

TEST_CASE("two-qubit mixed-state entanglement") {
    const DensityMatrix separable = density_of(PureState({2, 2}, {0.0, 1.0, 0.0, 0.0}));
    CHECK(e_alpha_two_qubit(separable, AlphaOrder(1.5)) == Catch::Approx(0.0).margin(1e-9));

    CHECK(e_alpha_two_qubit(density_of(bell_pair()), AlphaOrder(2.0)) ==
          Catch::Approx(1.0).margin(1e-9));

    const DensityMatrix w_pair = partial_trace(density_of(w_state(7)), {0, 1});
    CHECK(e_alpha_two_qubit(w_pair, AlphaOrder(1.0)) ==
          Catch::Approx(f1_oracle(4.0 / 49.0)).margin(1e-9));
    CHECK(e_alpha_two_qubit(w_pair, AlphaOrder(1.0)) == Catch::Approx(0.1462).margin(1e-4));

    CHECK_THROWS_AS(e_alpha_two_qubit(w_pair, AlphaOrder(0.7)), window_error);
}

TEST_CASE("2xd exact formula routes") {
    const DensityMatrix ghz_rho = density_of(ghz_state(3));
    const DensityMatrix ghz_2xd({2, 4}, ghz_rho.matrix());
    CHECK(e_alpha_2xd(ghz_2xd, Cut({0}, 2), AlphaOrder(1.0)) == Catch::Approx(1.0).margin(1e-9));

    CHECK(e_alpha_2xd(ghz_2xd, Cut({0}, 2), AlphaOrder(1.2), 0.7) ==
          Catch::Approx(f_alpha(0.7, AlphaOrder(1.2))).margin(1e-15));
    CHECK(e_alpha_2xd(ghz_2xd, Cut({0}, 2), AlphaOrder(0.9), 0.0) ==
          Catch::Approx(0.0).margin(1e-15));

    CHECK_THROWS_AS(e_alpha_2xd(ghz_2xd, Cut({0}, 2), AlphaOrder(2.0)), window_error);

    testing::Rng rng(111);
    const DensityMatrix mixed = testing::random_density_matrix({2, 3}, 3, rng);
    CHECK_THROWS_AS(e_alpha_2xd(mixed, Cut({0}, 2), AlphaOrder(1.0)), missing_concurrence_error);
    CHECK_THROWS_AS(e_alpha_2xd(mixed, Cut({1}, 2), AlphaOrder(1.0), 0.5), std::invalid_argument);
}

TEST_CASE("lower bound above the concavity window") {
    CHECK(e_alpha_lower_bound(0.0, AlphaOrder(2.0)) == Catch::Approx(0.0).margin(1e-15));
    CHECK(e_alpha_lower_bound(1.0, AlphaOrder(2.0)) == Catch::Approx(1.0).margin(1e-15));
    // Direct closed-form oracle at order 2: -log2((1 + (1-x))/2).
    const double expected = -std::log2(0.75);
    CHECK(e_alpha_lower_bound(0.5, AlphaOrder(2.0)) == Catch::Approx(expected).margin(1e-12));
    CHECK_THROWS_AS(e_alpha_lower_bound(0.5, AlphaOrder(1.2)), window_error);
}
