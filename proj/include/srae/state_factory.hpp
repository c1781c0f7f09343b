#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "srae/states.hpp"

namespace srae {

using StateVariant = std::variant<PureState, DensityMatrix>;

// Zero of the closed-form three-tangle of the GHZ/W superposition family,
// kept as the printed two-sided constant; the recomputed root lives in the
// monogamy module.
inline constexpr double kSuperpositionTangleZero = 0.627;

enum class StateFamily {
    ghz,
    w,
    ghz_w_superposition,
    ghz_w_mixture,
    psi_j,
    ou_antisymmetric,
};

inline PureState ghz_state(std::size_t n) {
    if (n < 2) throw state_error("invalid state parameter");
    const std::size_t d = std::size_t{1} << n;
    std::vector<cplx> amp(d, cplx{0.0, 0.0});
    amp.front() = 1.0 / std::sqrt(2.0);
    amp.back() = 1.0 / std::sqrt(2.0);
    return PureState(std::vector<std::size_t>(n, 2), std::move(amp));
}

inline PureState w_state(std::size_t n) {
    if (n < 2) throw state_error("invalid state parameter");
    const std::size_t d = std::size_t{1} << n;
    std::vector<cplx> amp(d, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i)
        amp[std::size_t{1} << (n - 1 - i)] = 1.0 / std::sqrt(double(n));
    return PureState(std::vector<std::size_t>(n, 2), std::move(amp));
}

/// sqrt(p)|GHZ3> - exp(2*pi*i*j/3) sqrt(1-p)|W3>; j = 0 is the plain
/// minus-sign superposition.
inline PureState ghz_w_phase_superposition(double p, int j) {
    if (!(p >= 0.0 && p <= 1.0) || j < 0 || j > 2) throw state_error("invalid state parameter");
    const PureState g = ghz_state(3);
    const PureState w = w_state(3);
    const cplx phase = std::exp(cplx{0.0, 2.0 * M_PI * double(j) / 3.0});
    std::vector<cplx> amp(8);
    for (std::size_t i = 0; i < 8; ++i)
        amp[i] = std::sqrt(p) * g.amplitudes()[i] - phase * std::sqrt(1.0 - p) * w.amplitudes()[i];
    return PureState({2, 2, 2}, std::move(amp));
}

inline PureState ghz_w_superposition(double p) { return ghz_w_phase_superposition(p, 0); }

inline DensityMatrix ghz_w_mixture(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw state_error("invalid state parameter");
    const DensityMatrix g = density_of(ghz_state(3));
    const DensityMatrix w = density_of(w_state(3));
    ComplexMatrix m = cplx{p, 0.0} * g.matrix() + cplx{1.0 - p, 0.0} * w.matrix();
    return DensityMatrix({2, 2, 2}, std::move(m));
}

/// Totally antisymmetric three-qutrit state (basis labels 0,1,2).
inline PureState ou_antisymmetric_state() {
    std::vector<cplx> amp(27, cplx{0.0, 0.0});
    const double s = 1.0 / std::sqrt(6.0);
    auto levi = [](int a, int b, int c) -> int {
        if (a == b || b == c || a == c) return 0;
        return ((b - a + 3) % 3 == 1) ? 1 : -1;
    };
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                const int e = levi(a, b, c);
                if (e != 0) amp[std::size_t(a * 9 + b * 3 + c)] = e * s;
            }
    return PureState({3, 3, 3}, std::move(amp));
}

/// Generic front door over the named families; parameters are validated per
/// family (n >= 2, p in [0,1], j in {0,1,2}).
inline StateVariant named_state(StateFamily family, const std::map<std::string, double>& params = {}) {
    auto get = [&params](const std::string& key, double fallback, bool required) {
        auto it = params.find(key);
        if (it == params.end()) {
            if (required) throw state_error("invalid state parameter");
            return fallback;
        }
        return it->second;
    };
    switch (family) {
        case StateFamily::ghz: {
            const double n = get("n", 0, true);
            if (n < 2 || n != std::floor(n)) throw state_error("invalid state parameter");
            return ghz_state(std::size_t(n));
        }
        case StateFamily::w: {
            const double n = get("n", 0, true);
            if (n < 2 || n != std::floor(n)) throw state_error("invalid state parameter");
            return w_state(std::size_t(n));
        }
        case StateFamily::ghz_w_superposition:
            return ghz_w_superposition(get("p", 0, true));
        case StateFamily::ghz_w_mixture:
            return ghz_w_mixture(get("p", 0, true));
        case StateFamily::psi_j: {
            const double j = get("j", 0, true);
            if (j != std::floor(j)) throw state_error("invalid state parameter");
            return ghz_w_phase_superposition(get("p0", kSuperpositionTangleZero, false), int(j));
        }
        case StateFamily::ou_antisymmetric:
            return ou_antisymmetric_state();
    }
    throw state_error("invalid state parameter");
}

/// Decomposition of the GHZ/W mixture for mixing weight p <= 0.627: three
/// phase-rotated superpositions at the tangle zero plus a W remainder. Mixes
/// back to ghz_w_mixture(p) exactly.
inline Ensemble ghz_w_mixture_decomposition(double p) {
    if (!(p >= 0.0 && p <= kSuperpositionTangleZero + 1e-12))
        throw state_error("decomposition defined only for p <= 0.627");
    const double fraction = std::min(p / kSuperpositionTangleZero, 1.0);
    std::vector<EnsembleMember> members;
    for (int j = 0; j < 3; ++j)
        members.push_back({fraction / 3.0, ghz_w_phase_superposition(kSuperpositionTangleZero, j)});
    members.push_back({1.0 - fraction, w_state(3)});
    return Ensemble(std::move(members));
}

/// The two-qutrit marginal of the antisymmetric state as an equal mixture of
/// the three antisymmetric pair states (|ij> - |ji>)/sqrt(2).
inline Ensemble ou_singlet_pair_ensemble() {
    auto singlet = [](int i, int j) {
        std::vector<cplx> amp(9, cplx{0.0, 0.0});
        amp[std::size_t(i * 3 + j)] = 1.0 / std::sqrt(2.0);
        amp[std::size_t(j * 3 + i)] = -1.0 / std::sqrt(2.0);
        return PureState({3, 3}, std::move(amp));
    };
    std::vector<EnsembleMember> members;
    members.push_back({1.0 / 3.0, singlet(0, 1)});
    members.push_back({1.0 / 3.0, singlet(1, 2)});
    members.push_back({1.0 / 3.0, singlet(2, 0)});
    return Ensemble(std::move(members));
}

// ---------------------------------------------------------------------------
// State files: JSON object {kind: "pure"|"density", dims: [..], data: [[re,im],..]}.
// Pure data has length prod(dims); density data is row-major of length prod(dims)^2.
// ---------------------------------------------------------------------------

inline StateVariant load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw state_error("cannot open state file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw state_error(std::string("state file parse failure: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("kind") || !doc.contains("dims") || !doc.contains("data"))
        throw state_error("state file must have kind, dims and data fields");

    const std::string kind = doc["kind"].get<std::string>();
    if (kind != "pure" && kind != "density")
        throw state_error("state file kind must be \"pure\" or \"density\"");

    std::vector<std::size_t> dims;
    for (const auto& d : doc["dims"]) {
        if (!d.is_number_unsigned() || d.get<std::size_t>() == 0)
            throw state_error("dims must be positive integers");
        dims.push_back(d.get<std::size_t>());
    }
    if (dims.empty()) throw state_error("dims must be non-empty");

    std::vector<cplx> data;
    for (const auto& pair : doc["data"]) {
        if (!pair.is_array() || pair.size() != 2)
            throw state_error("data entries must be [re, im] pairs");
        data.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }

    const std::size_t d = total_dimension(dims);
    if (kind == "pure") {
        if (data.size() != d) throw state_error("pure data length must equal the total dimension");
        return PureState(std::move(dims), std::move(data)); // norm check inside
    }
    if (data.size() != d * d)
        throw state_error("density data length must equal the total dimension squared");
    DensityMatrix rho(std::move(dims), ComplexMatrix(d, d, std::move(data)));
    rho.validate_psd();
    return rho;
}

inline void save_state(const std::string& path, const StateVariant& state) {
    nlohmann::ordered_json doc;
    auto dump_complex = [](const std::vector<cplx>& v) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : v) arr.push_back({c.real(), c.imag()});
        return arr;
    };
    if (std::holds_alternative<PureState>(state)) {
        const auto& psi = std::get<PureState>(state);
        doc["kind"] = "pure";
        doc["dims"] = psi.dims();
        doc["data"] = dump_complex(psi.amplitudes());
    } else {
        const auto& rho = std::get<DensityMatrix>(state);
        doc["kind"] = "density";
        doc["dims"] = rho.dims();
        doc["data"] = dump_complex(rho.matrix().entries());
    }
    std::ofstream out(path);
    if (!out) throw state_error("cannot write state file: " + path);
    out << doc.dump(2) << "\n";
}

} // namespace srae
