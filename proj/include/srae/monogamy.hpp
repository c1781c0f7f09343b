#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srae/measures.hpp"
#include "srae/roof_optimizer.hpp"
#include "srae/rootfind.hpp"
#include "srae/states.hpp"

namespace srae {

struct ResidualValidity {
    bool window_satisfied = true;
    // False when any subtracted term rests on a roof-optimizer estimate or an
    // assumed-optimal decomposition rather than an exact/analytic value.
    bool exact_terms = true;
};

/// Structured result of one monogamy inequality evaluation.
struct ResidualReport {
    double left_term = 0.0;
    std::vector<std::pair<std::string, double>> subtracted_terms;
    double residual = 0.0;
    std::optional<double> alpha; // absent for concurrence-based reports
    double mu = 2.0;             // squared-measure reports use the mu = 2 convention
    ResidualValidity validity;
    std::optional<std::size_t> k_parties;
};

namespace detail {

inline ResidualReport make_report(double left,
                                  std::vector<std::pair<std::string, double>> terms,
                                  std::optional<double> alpha, double mu,
                                  ResidualValidity validity,
                                  std::optional<std::size_t> k_parties = std::nullopt) {
    ResidualReport report;
    report.left_term = left;
    report.subtracted_terms = std::move(terms);
    double sum = 0.0;
    for (const auto& [label, value] : report.subtracted_terms) sum += value;
    report.residual = left - sum;
    report.alpha = alpha;
    report.mu = mu;
    report.validity = validity;
    report.k_parties = k_parties;
    return report;
}

inline void require_qubits(const PureState& psi) {
    for (std::size_t d : psi.dims())
        if (d != 2) throw std::invalid_argument("qubit systems only");
}

inline void require_focus(const PureState& psi, std::size_t focus) {
    if (focus >= psi.subsystems()) throw std::invalid_argument("focus index out of range");
}

inline DensityMatrix pair_marginal(const PureState& psi, std::size_t a, std::size_t b) {
    return marginal_of_pure(psi, {a, b});
}

inline std::string pair_label(std::size_t a, std::size_t b) {
    return "pair(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

inline std::string block_label(const std::vector<std::size_t>& block) {
    std::string s = "block(";
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(block[i]);
    }
    return s + ")";
}

} // namespace detail

/// Squared-concurrence monogamy residual for a multiqubit pure state:
/// C^2(focus|rest) - sum_i C^2(focus, i).
inline ResidualReport residual_sc(const PureState& psi, std::size_t focus) {
    detail::require_qubits(psi);
    detail::require_focus(psi, focus);
    const std::size_t n = psi.subsystems();
    const double c = concurrence_pure(psi, Cut::one_vs_rest(focus, n));
    std::vector<std::pair<std::string, double>> terms;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == focus) continue;
        const double cw = concurrence_wootters(detail::pair_marginal(psi, focus, i));
        terms.emplace_back(detail::pair_label(focus, i), cw * cw);
    }
    return detail::make_report(c * c, std::move(terms), std::nullopt, 2.0, {});
}

/// Squared-concurrence residual from raw squared-concurrence values
/// (hypothetical-value mode).
inline ResidualReport residual_sc_values(double left_c_squared,
                                         const std::vector<double>& pair_c_squared) {
    std::vector<std::pair<std::string, double>> terms;
    for (std::size_t i = 0; i < pair_c_squared.size(); ++i)
        terms.emplace_back("pair[" + std::to_string(i) + "]", pair_c_squared[i]);
    return detail::make_report(left_c_squared, std::move(terms), std::nullopt, 2.0, {});
}

/// Squared Renyi-alpha entanglement residual on a multiqubit pure state.
/// The left term comes from the entropy of the focus marginal, the pair terms
/// from the exact two-qubit formula.
inline ResidualReport residual_srae_pure(const PureState& psi, std::size_t focus,
                                         AlphaOrder alpha) {
    detail::require_qubits(psi);
    detail::require_focus(psi, focus);
    if (!alpha.in_two_qubit_window())
        throw window_error("order below the two-qubit formula window");
    const std::size_t n = psi.subsystems();
    const double left = renyi_entropy(marginal_of_pure(psi, {focus}), alpha);
    std::vector<std::pair<std::string, double>> terms;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == focus) continue;
        const double e = e_alpha_two_qubit(detail::pair_marginal(psi, focus, i), alpha);
        terms.emplace_back(detail::pair_label(focus, i), e * e);
    }
    return detail::make_report(left * left, std::move(terms), alpha.alpha, 2.0, {});
}

/// Squared entanglement-of-formation residual (the alpha -> 1 member of the
/// family).
inline ResidualReport residual_sef(const PureState& psi, std::size_t focus) {
    return residual_srae_pure(psi, focus, AlphaOrder(1.0));
}

/// Squared Renyi-alpha residual from raw squared concurrences. The left value
/// is mapped through the 2xd exact formula, so the order must lie in the
/// concavity window.
inline ResidualReport residual_srae_values(double left_c_squared,
                                           const std::vector<double>& pair_c_squared,
                                           AlphaOrder alpha) {
    if (!alpha.in_concave_window())
        throw window_error("order outside the 2xd exact-formula window");
    const double left = f_alpha(left_c_squared, alpha);
    std::vector<std::pair<std::string, double>> terms;
    for (std::size_t i = 0; i < pair_c_squared.size(); ++i) {
        const double e = f_alpha(pair_c_squared[i], alpha);
        terms.emplace_back("pair[" + std::to_string(i) + "]", e * e);
    }
    return detail::make_report(left * left, std::move(terms), alpha.alpha, 2.0, {});
}

inline ResidualReport residual_sef_values(double left_c_squared,
                                          const std::vector<double>& pair_c_squared) {
    return residual_srae_values(left_c_squared, pair_c_squared, AlphaOrder(1.0));
}

// ---------------------------------------------------------------------------
// Multipartite entanglement indicators.
// ---------------------------------------------------------------------------

/// Pure-state indicator: the squared Renyi-alpha residual itself.
inline double tau1(const PureState& psi, std::size_t focus, AlphaOrder alpha) {
    return residual_srae_pure(psi, focus, alpha).residual;
}

/// Mixed-state indicator evaluated on a caller-supplied decomposition
/// (ensemble average of the pure-state indicator). The ensemble must mix back
/// to the state.
inline double tau1(const DensityMatrix& rho, const Ensemble& decomposition, std::size_t focus,
                   AlphaOrder alpha) {
    decomposition.require_mixes_to(rho);
    double total = 0.0;
    for (const auto& member : decomposition.members())
        if (member.weight > 0.0) total += member.weight * tau1(member.state, focus, alpha);
    return total;
}

/// Mixed-state indicator as a roof-optimizer upper bound over decompositions.
inline RoofResult tau1_upper_bound(const DensityMatrix& rho, std::size_t focus, AlphaOrder alpha,
                                   const RoofConfig& config) {
    const Cut cut = Cut::one_vs_rest(focus, rho.subsystems());
    PureMeasure indicator = [alpha](const PureState& psi, const Cut& c) {
        return tau1(psi, c.side_a.front(), alpha);
    };
    return optimize_roof(rho, cut, indicator, config);
}

namespace detail {

struct PartySplit {
    std::vector<std::size_t> singles; // parties 2..k-1
    std::vector<std::size_t> block;   // parties k..n merged into one qudit
};

inline PartySplit split_parties(std::size_t n, std::size_t focus, std::size_t k) {
    if (k < 3 || k > n) throw std::invalid_argument("party count k must lie in [3, n]");
    std::vector<std::size_t> others;
    others.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        if (i != focus) others.push_back(i);
    PartySplit split;
    split.singles.assign(others.begin(), others.begin() + (k - 2));
    split.block.assign(others.begin() + (k - 2), others.end());
    return split;
}

// Squared concurrence of the (focus | block) reduced state. Exact for a
// pure reduced state; otherwise caller-supplied or a roof-optimizer upper
// bound on the concurrence roof.
inline double block_c_squared_of(const PureState& psi, std::size_t focus,
                                 const std::vector<std::size_t>& block,
                                 std::optional<double> supplied,
                                 const std::optional<RoofConfig>& roof_config,
                                 bool& exact) {
    if (supplied) return *supplied;
    std::vector<std::size_t> keep = block;
    keep.push_back(focus);
    std::sort(keep.begin(), keep.end());
    const std::size_t focus_pos =
        std::size_t(std::lower_bound(keep.begin(), keep.end(), focus) - keep.begin());
    const DensityMatrix reduced = marginal_of_pure(psi, keep);
    const Cut cut({focus_pos}, keep.size());
    if (auto pure = detail::as_pure(reduced)) {
        const double c = concurrence_pure(*pure, cut);
        return c * c;
    }
    if (roof_config) {
        exact = false;
        PureMeasure concurrence = [](const PureState& s, const Cut& c) {
            return concurrence_pure(s, c);
        };
        const RoofResult roof = optimize_roof(reduced, cut, concurrence, *roof_config);
        return roof.value * roof.value;
    }
    throw missing_concurrence_error("squared concurrence unavailable for the block term");
}

} // namespace detail

/// Hierarchical k-party indicator: the focus qubit against k-2 single qubits
/// plus one merged block. Valid in the concavity window where the 2xd exact
/// formula covers the block term.
inline ResidualReport tau2(const PureState& psi, std::size_t focus, std::size_t k,
                           AlphaOrder alpha,
                           std::optional<double> block_c_squared = std::nullopt,
                           std::optional<RoofConfig> block_roof_config = std::nullopt) {
    detail::require_qubits(psi);
    detail::require_focus(psi, focus);
    if (!alpha.in_concave_window())
        throw window_error("order outside the 2xd exact-formula window");
    const std::size_t n = psi.subsystems();
    const detail::PartySplit split = detail::split_parties(n, focus, k);

    const double left = renyi_entropy(marginal_of_pure(psi, {focus}), alpha);
    std::vector<std::pair<std::string, double>> terms;
    for (std::size_t i : split.singles) {
        const double e = e_alpha_two_qubit(detail::pair_marginal(psi, focus, i), alpha);
        terms.emplace_back(detail::pair_label(focus, i), e * e);
    }

    ResidualValidity validity;
    if (split.block.size() == 1) {
        const double e = e_alpha_two_qubit(detail::pair_marginal(psi, focus, split.block[0]), alpha);
        terms.emplace_back(detail::pair_label(focus, split.block[0]), e * e);
    } else {
        const double c2 = detail::block_c_squared_of(psi, focus, split.block, block_c_squared,
                                                     block_roof_config, validity.exact_terms);
        const double e = f_alpha(c2, alpha);
        terms.emplace_back(detail::block_label(split.block), e * e);
    }
    return detail::make_report(left * left, std::move(terms), alpha.alpha, 2.0, validity, k);
}

/// Hierarchical residual from raw squared concurrences (left partition, pair
/// terms, block term), all mapped through the 2xd exact formula.
inline ResidualReport tau2_values(double left_c_squared,
                                  const std::vector<double>& pair_c_squared,
                                  double block_c_squared, AlphaOrder alpha, std::size_t k) {
    if (!alpha.in_concave_window())
        throw window_error("order outside the 2xd exact-formula window");
    const double left = f_alpha(left_c_squared, alpha);
    std::vector<std::pair<std::string, double>> terms;
    for (std::size_t i = 0; i < pair_c_squared.size(); ++i) {
        const double e = f_alpha(pair_c_squared[i], alpha);
        terms.emplace_back("pair[" + std::to_string(i) + "]", e * e);
    }
    const double eb = f_alpha(block_c_squared, alpha);
    terms.emplace_back("block", eb * eb);
    return detail::make_report(left * left, std::move(terms), alpha.alpha, 2.0, {}, k);
}

/// mu-th power monogamy residual. mu = 2 reduces to the squared family; the
/// three-qubit case is valid on the whole two-qubit formula window, the
/// k-party case needs the concavity window for its block term.
inline ResidualReport residual_mu(const PureState& psi, std::size_t focus, AlphaOrder alpha,
                                  double mu, std::optional<std::size_t> k = std::nullopt,
                                  std::optional<double> block_c_squared = std::nullopt,
                                  std::optional<RoofConfig> block_roof_config = std::nullopt) {
    detail::require_qubits(psi);
    detail::require_focus(psi, focus);
    if (mu < 2.0) throw window_error("power below the mu-power monogamy range");
    const std::size_t n = psi.subsystems();
    const std::size_t k_eff = k.value_or(n);
    if (n == 3) {
        if (!alpha.in_two_qubit_window())
            throw window_error("order below the two-qubit formula window");
    } else if (!alpha.in_concave_window()) {
        throw window_error("order outside the 2xd exact-formula window");
    }
    const detail::PartySplit split = detail::split_parties(n, focus, k_eff);

    const double left = renyi_entropy(marginal_of_pure(psi, {focus}), alpha);
    std::vector<std::pair<std::string, double>> terms;
    for (std::size_t i : split.singles) {
        const double e = e_alpha_two_qubit(detail::pair_marginal(psi, focus, i), alpha);
        terms.emplace_back(detail::pair_label(focus, i), std::pow(e, mu));
    }
    ResidualValidity validity;
    if (split.block.size() == 1) {
        const double e = e_alpha_two_qubit(detail::pair_marginal(psi, focus, split.block[0]), alpha);
        terms.emplace_back(detail::pair_label(focus, split.block[0]), std::pow(e, mu));
    } else {
        const double c2 = detail::block_c_squared_of(psi, focus, split.block, block_c_squared,
                                                     block_roof_config, validity.exact_terms);
        const double e = f_alpha(c2, alpha);
        terms.emplace_back(detail::block_label(split.block), std::pow(e, mu));
    }
    return detail::make_report(std::pow(left, mu), std::move(terms), alpha.alpha, mu, validity,
                               k ? std::optional<std::size_t>(k_eff) : std::nullopt);
}

// ---------------------------------------------------------------------------
// Three-tangle.
// ---------------------------------------------------------------------------

/// Concurrence-based residual tangle of a three-qubit pure state.
inline double three_tangle(const PureState& psi) {
    if (psi.dims() != std::vector<std::size_t>{2, 2, 2})
        throw std::invalid_argument("three-qubit pure state required");
    return residual_sc(psi, 0).residual;
}

namespace detail {

// Signed polynomial-invariant combination whose zeros locate the tangle
// zeros of sqrt(p)|GHZ3> - sqrt(1-p)|W3>. Negative between the two zeros;
// the tangle itself is its modulus.
inline double tangle_invariant_superposition(double p) {
    return p * p - (8.0 * std::sqrt(6.0) / 9.0) * std::sqrt(p * (1.0 - p) * (1.0 - p) * (1.0 - p));
}

} // namespace detail

/// Closed-form three-tangle of sqrt(p)|GHZ3> - sqrt(1-p)|W3>; equals the
/// concurrence residual of the state.
inline double three_tangle_superposition(double p) {
    return std::abs(detail::tangle_invariant_superposition(p));
}

/// Nontrivial zero of the closed-form three-tangle, recomputed by bisection
/// on the signed invariant. Cross-checks the printed 0.627 two-sided constant.
inline double superposition_tangle_zero() {
    return bisect([](double p) { return detail::tangle_invariant_superposition(p); }, 0.5, 0.9,
                  1e-10);
}

} // namespace srae
