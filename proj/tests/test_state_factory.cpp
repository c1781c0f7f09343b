#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "srae/measures.hpp"
#include "srae/state_factory.hpp"
#include "support/random_states.hpp"

using namespace srae;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("sf_test_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("mixture endpoint p=1 is the GHZ projector") {
    const DensityMatrix mix = ghz_w_mixture(1.0);
    const DensityMatrix ghz = density_of(ghz_state(3));
    CHECK(max_abs_diff(mix.matrix(), ghz.matrix()) < 1e-14);
}

TEST_CASE("W(7) pair marginal has squared concurrence 4/49") {
    const DensityMatrix pair = partial_trace(density_of(w_state(7)), {0, 1});
    const double c = concurrence_wootters(pair);
    CHECK(c * c == Catch::Approx(4.0 / 49.0).margin(1e-10));
}

TEST_CASE("antisymmetric qutrit state has maximally mixed marginals") {
    const PureState ou = ou_antisymmetric_state();
    for (std::size_t k = 0; k < 3; ++k) {
        const DensityMatrix marginal = marginal_of_pure(ou, {k});
        ComplexMatrix third = ComplexMatrix::identity(3);
        third *= cplx{1.0 / 3.0, 0.0};
        CHECK(max_abs_diff(marginal.matrix(), third) < 1e-14);
    }
}

TEST_CASE("named families satisfy the type invariants across the parameter grid") {
    for (std::size_t n = 2; n <= 8; ++n) {
        CHECK_NOTHROW(ghz_state(n));  // constructors validate normalization
        CHECK_NOTHROW(w_state(n));
    }
    for (int i = 0; i <= 100; ++i) {
        const double p = double(i) / 100.0;
        CHECK_NOTHROW(ghz_w_superposition(p));
        const DensityMatrix mix = ghz_w_mixture(p);
        CHECK_NOTHROW(mix.validate_psd());
        for (int j = 0; j < 3; ++j) CHECK_NOTHROW(ghz_w_phase_superposition(p, j));
    }
}

TEST_CASE("plain superposition equals the j=0 phase member at the tangle zero") {
    const PureState a = ghz_w_superposition(kSuperpositionTangleZero);
    const PureState b = ghz_w_phase_superposition(kSuperpositionTangleZero, 0);
    for (std::size_t i = 0; i < a.dimension(); ++i)
        CHECK(a.amplitudes()[i] == b.amplitudes()[i]);
}

TEST_CASE("mixture decomposition mixes back exactly for p below the tangle zero") {
    for (double p : {0.0, 0.1, 0.292, 0.45, 0.627}) {
        const Ensemble decomposition = ghz_w_mixture_decomposition(p);
        decomposition.require_mixes_to(ghz_w_mixture(p), 1e-9);
    }
    CHECK_THROWS_AS(ghz_w_mixture_decomposition(0.8), state_error);
}

TEST_CASE("singlet pair ensemble mixes to the antisymmetric two-party marginal") {
    const DensityMatrix marginal = marginal_of_pure(ou_antisymmetric_state(), {0, 1});
    ou_singlet_pair_ensemble().require_mixes_to(marginal, 1e-12);
}

TEST_CASE("generic front door validates parameters") {
    CHECK_THROWS_WITH(named_state(StateFamily::ghz, {{"n", 1.0}}), "invalid state parameter");
    CHECK_THROWS_WITH(named_state(StateFamily::ghz_w_superposition, {{"p", 1.2}}),
                      "invalid state parameter");
    CHECK_THROWS_WITH(named_state(StateFamily::psi_j, {{"p0", 0.5}, {"j", 3.0}}),
                      "invalid state parameter");
    CHECK_NOTHROW(named_state(StateFamily::w, {{"n", 5.0}}));
    CHECK_NOTHROW(named_state(StateFamily::ou_antisymmetric));
}

TEST_CASE("density_of builds rank-1 projectors") {
    const PureState zero({2}, {1.0, 0.0});
    const DensityMatrix rho = density_of(zero);
    CHECK(rho.matrix()(0, 0) == cplx{1.0, 0.0});
    CHECK(rho.matrix()(1, 1) == cplx{0.0, 0.0});

    const std::vector<cplx> bell = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
    const DensityMatrix bell_rho = density_of(PureState({2, 2}, bell));
    CHECK(bell_rho.matrix()(0, 3).real() == Catch::Approx(0.5).margin(1e-14));
    CHECK(bell_rho.matrix()(3, 0).real() == Catch::Approx(0.5).margin(1e-14));

    testing::Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const PureState psi = testing::random_pure_state({2, 3}, rng);
        CHECK(density_of(psi).purity() == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("state files load when valid") {
    const TempFile mixed("valid_density.json", R"({
        "kind": "density",
        "dims": [2, 2],
        "data": [[0.25,0],[0,0],[0,0],[0,0],
                 [0,0],[0.25,0],[0,0],[0,0],
                 [0,0],[0,0],[0.25,0],[0,0],
                 [0,0],[0,0],[0,0],[0.25,0]]
    })");
    const StateVariant loaded = load_state(mixed.path);
    REQUIRE(std::holds_alternative<DensityMatrix>(loaded));
    CHECK(std::get<DensityMatrix>(loaded).dims() == std::vector<std::size_t>{2, 2});

    const TempFile pure("valid_pure.json", R"({
        "kind": "pure",
        "dims": [2, 2],
        "data": [[0.70710678118654752,0],[0,0],[0,0],[0.70710678118654752,0]]
    })");
    const StateVariant bell = load_state(pure.path);
    REQUIRE(std::holds_alternative<PureState>(bell));
}

TEST_CASE("state files name the failing invariant") {
    const TempFile bad_trace("bad_trace.json", R"({
        "kind": "density",
        "dims": [2],
        "data": [[0.6,0],[0,0],[0,0],[0.3,0]]
    })");
    CHECK_THROWS_WITH(load_state(bad_trace.path), "trace deviates from 1");

    const TempFile not_psd("not_psd.json", R"({
        "kind": "density",
        "dims": [2],
        "data": [[1.5,0],[0,0],[0,0],[-0.5,0]]
    })");
    CHECK_THROWS_WITH(load_state(not_psd.path), "matrix not PSD");

    const TempFile bad_norm("bad_norm.json", R"({
        "kind": "pure",
        "dims": [2],
        "data": [[0.5,0],[0.5,0]]
    })");
    CHECK_THROWS_WITH(load_state(bad_norm.path), "state vector not normalized");

    const TempFile garbage("garbage.json", "{ not json");
    CHECK_THROWS_AS(load_state(garbage.path), state_error);

    const TempFile bad_kind("bad_kind.json",
                            R"({"kind": "foo", "dims": [2], "data": [[1,0],[0,0]]})");
    CHECK_THROWS_AS(load_state(bad_kind.path), state_error);
}

TEST_CASE("save then load round-trips") {
    testing::Rng rng(7);
    const PureState psi = testing::random_pure_state({2, 2, 2}, rng);
    save_state("sf_roundtrip_pure.json", psi);
    const StateVariant loaded = load_state("sf_roundtrip_pure.json");
    REQUIRE(std::holds_alternative<PureState>(loaded));
    const PureState& back = std::get<PureState>(loaded);
    for (std::size_t i = 0; i < psi.dimension(); ++i)
        CHECK(std::abs(back.amplitudes()[i] - psi.amplitudes()[i]) < 1e-15);
    std::remove("sf_roundtrip_pure.json");

    const DensityMatrix rho = testing::random_density_matrix({2, 2}, 3, rng);
    save_state("sf_roundtrip_density.json", rho);
    const StateVariant loaded_rho = load_state("sf_roundtrip_density.json");
    REQUIRE(std::holds_alternative<DensityMatrix>(loaded_rho));
    CHECK(max_abs_diff(std::get<DensityMatrix>(loaded_rho).matrix(), rho.matrix()) < 1e-15);
    std::remove("sf_roundtrip_density.json");
}
