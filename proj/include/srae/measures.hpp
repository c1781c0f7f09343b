#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "srae/errors.hpp"
#include "srae/states.hpp"

namespace srae {

// Critical Renyi orders bounding the analytic windows.
inline const double kAlphaFormulaMin = (std::sqrt(7.0) - 1.0) / 2.0;  // ~0.8229
inline const double kAlphaConcaveMax = (std::sqrt(13.0) - 1.0) / 2.0; // ~1.3028

/// Renyi order with its window classification. The two-qubit analytic formula
/// needs alpha >= (sqrt(7)-1)/2; the 2xd exact formula additionally needs
/// alpha <= (sqrt(13)-1)/2 (concavity window).
struct AlphaOrder {
    double alpha;

    explicit AlphaOrder(double a) : alpha(a) {
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("Renyi order must be positive and finite");
    }

    bool is_eof_limit() const { return std::abs(alpha - 1.0) < 1e-6; }
    bool in_two_qubit_window() const { return alpha >= kAlphaFormulaMin - 1e-12; }
    bool in_concave_window() const {
        return alpha >= kAlphaFormulaMin - 1e-12 && alpha <= kAlphaConcaveMax + 1e-12;
    }
};

/// Bipartition of a multipartite system into two non-empty sides.
struct Cut {
    std::vector<std::size_t> side_a;
    std::vector<std::size_t> side_b;
    std::size_t n_subsystems;

    Cut(std::vector<std::size_t> a, std::size_t n) : n_subsystems(n) {
        side_a = detail::checked_subset(n, std::move(a), "cut side must be non-empty");
        side_b = detail::complement_of(side_a, n);
        if (side_b.empty()) throw std::invalid_argument("cut must leave a non-empty complement");
    }

    static Cut one_vs_rest(std::size_t focus, std::size_t n) { return Cut({focus}, n); }
};

/// Renyi-alpha entropy in bits from a spectrum. Eigenvalues within clip
/// tolerance below zero are treated as exact zeros and contribute nothing.
inline double renyi_entropy_from_spectrum(std::vector<double> lambda, AlphaOrder alpha,
                                          double clip_tol = 1e-10) {
    for (auto& l : lambda) {
        if (l < 0.0) {
            if (l < -clip_tol) throw state_error("matrix not PSD");
            l = 0.0;
        }
    }
    if (alpha.is_eof_limit()) {
        double s = 0.0;
        for (double l : lambda)
            if (l > 0.0) s -= l * std::log2(l);
        return std::max(s, 0.0);
    }
    double powsum = 0.0;
    for (double l : lambda)
        if (l > 0.0) powsum += std::pow(l, alpha.alpha);
    if (powsum <= 0.0) return 0.0;
    const double value = std::log2(powsum) / (1.0 - alpha.alpha);
    return std::max(value, 0.0);
}

inline double renyi_entropy(const DensityMatrix& rho, AlphaOrder alpha) {
    return renyi_entropy_from_spectrum(rho.spectrum(), alpha);
}

/// Closed-form Renyi-alpha entanglement of a two-qubit state as a function of
/// its squared concurrence x. Valid for alpha >= (sqrt(7)-1)/2; the alpha -> 1
/// limit switches to the binary-entropy branch to avoid the 0/0 form.
inline double f_alpha(double x, AlphaOrder alpha) {
    if (!alpha.in_two_qubit_window())
        throw window_error("order below the two-qubit formula window");
    if (x < -1e-12 || x > 1.0 + 1e-12)
        throw std::invalid_argument("squared concurrence must lie in [0, 1]");
    x = std::min(std::max(x, 0.0), 1.0);
    if (x >= 1.0 - 1e-12) return 1.0; // Bell spectrum (1/2, 1/2) for every order
    const double root = std::sqrt(1.0 - x);
    const double a = (1.0 + root) / 2.0;
    const double b = x / (2.0 * (1.0 + root)); // (1 - root)/2 without cancellation

    if (alpha.is_eof_limit()) {
        double h = 0.0;
        if (a > 0.0) h -= a * std::log2(a);
        if (b > 0.0) h -= b * std::log2(b);
        return std::max(h, 0.0);
    }
    const double powsum = std::pow(a, alpha.alpha) + std::pow(b, alpha.alpha);
    return std::max(std::log2(powsum) / (1.0 - alpha.alpha), 0.0);
}

namespace detail {

// Single-subsystem marginal accumulated into a stack buffer; avoids the
// general strided-offset machinery in optimizer-hot loops. Supports local
// dimension up to 4 (everything in scope is qubits and qutrits).
struct SingleSiteMarginal {
    std::size_t d = 0;
    std::array<cplx, 16> m{};

    double purity() const {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) s += std::norm(m[i * d + j]);
        return s;
    }
};

inline bool single_site_marginal(const PureState& psi, std::size_t site,
                                 SingleSiteMarginal& out) {
    const std::size_t d = psi.dims()[site];
    if (d > 4) return false;
    std::size_t stride = 1;
    for (std::size_t k = psi.subsystems(); k-- > site + 1;) stride *= psi.dims()[k];
    const std::size_t block = stride * d;
    const std::size_t total = psi.dimension();
    out.d = d;
    out.m.fill(cplx{0.0, 0.0});
    const cplx* amp = psi.amplitudes().data();
    for (std::size_t base = 0; base < total; base += block)
        for (std::size_t low = 0; low < stride; ++low) {
            const cplx* cell = amp + base + low;
            for (std::size_t a = 0; a < d; ++a) {
                const cplx va = cell[a * stride];
                out.m[a * d + a] += std::norm(va);
                for (std::size_t b = a + 1; b < d; ++b)
                    out.m[a * d + b] += va * std::conj(cell[b * stride]);
            }
        }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) out.m[b * d + a] = std::conj(out.m[a * d + b]);
    return true;
}

} // namespace detail

/// Bipartite concurrence of a pure state across a cut:
/// sqrt(2 (1 - Tr rho_a^2)). For a 2xd cut this is the standard concurrence.
inline double concurrence_pure(const PureState& psi, const Cut& cut) {
    double purity = 0.0;
    detail::SingleSiteMarginal fast;
    if (cut.side_a.size() == 1 && detail::single_site_marginal(psi, cut.side_a[0], fast))
        purity = fast.purity();
    else
        purity = marginal_of_pure(psi, cut.side_a).purity();
    return std::sqrt(std::max(2.0 * (1.0 - purity), 0.0));
}

/// Wootters concurrence of a two-qubit mixed state via the Hermitian route:
/// eigenvalues of sqrt(rho) * rho_tilde * sqrt(rho) with
/// rho_tilde = (sy x sy) rho* (sy x sy).
inline double concurrence_wootters(const DensityMatrix& rho) {
    if (rho.dims() != std::vector<std::size_t>{2, 2})
        throw std::invalid_argument("two-qubit input required");
    // sy x sy is the real antidiagonal (-1, 1, 1, -1).
    static const ComplexMatrix yy{{0.0, 0.0, 0.0, -1.0},
                                  {0.0, 0.0, 1.0, 0.0},
                                  {0.0, 1.0, 0.0, 0.0},
                                  {-1.0, 0.0, 0.0, 0.0}};
    const ComplexMatrix s = psd_sqrt(rho.matrix());
    const ComplexMatrix tilde = yy * rho.matrix().conjugated() * yy;
    const ComplexMatrix m = s * tilde * s;
    const EigResult eig = eig_hermitian(m, 1e-8);
    // Eigenvalues that are pure roundoff would contribute sqrt(1e-16) ~ 1e-8
    // each; clip relative to the leading one before taking roots.
    const double clip = 1e-13 * std::max(eig.values[0], 0.0);
    double c = 0.0;
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        const double mu = eig.values[k] > clip ? eig.values[k] : 0.0;
        c += (k == 0 ? 1.0 : -1.0) * std::sqrt(mu);
    }
    return std::max(c, 0.0);
}

/// Renyi-alpha entanglement of a pure state across a cut: the entropy of the
/// side-a marginal. Qubit marginals take a closed-form eigenvalue shortcut.
inline double e_alpha_pure(const PureState& psi, const Cut& cut, AlphaOrder alpha) {
    detail::SingleSiteMarginal fast;
    if (cut.side_a.size() == 1 && psi.dims()[cut.side_a[0]] == 2 &&
        detail::single_site_marginal(psi, cut.side_a[0], fast)) {
        const double mean = 0.5 * (fast.m[0].real() + fast.m[3].real());
        const double half_gap = 0.5 * (fast.m[0].real() - fast.m[3].real());
        const double radius = std::sqrt(half_gap * half_gap + std::norm(fast.m[1]));
        return renyi_entropy_from_spectrum({mean + radius, mean - radius}, alpha);
    }
    return renyi_entropy(marginal_of_pure(psi, cut.side_a), alpha);
}

/// Exact two-qubit mixed-state Renyi-alpha entanglement f_alpha(C^2).
inline double e_alpha_two_qubit(const DensityMatrix& rho, AlphaOrder alpha) {
    const double c = concurrence_wootters(rho);
    return f_alpha(c * c, alpha);
}

namespace detail {

inline std::size_t side_dimension(const std::vector<std::size_t>& dims,
                                  const std::vector<std::size_t>& side) {
    std::size_t d = 1;
    for (std::size_t k : side) d *= dims[k];
    return d;
}

// Top eigenvector of a rank-1 density matrix, as a pure state on its dims.
inline std::optional<PureState> as_pure(const DensityMatrix& rho, double tol = 1e-10) {
    const EigResult eig = eig_hermitian(rho.matrix());
    if (eig.values.size() > 1 && eig.values[1] > tol) return std::nullopt;
    std::vector<cplx> amp(rho.dimension());
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = eig.vectors(i, 0);
    return PureState::unchecked(rho.dims(), std::move(amp));
}

} // namespace detail

/// Exact 2xd Renyi-alpha entanglement for orders in the concavity window.
/// Rank-1 input derives its squared concurrence from the purification; mixed
/// input needs the caller to supply it (analytic value or a roof-optimizer
/// estimate) since no closed form exists.
inline double e_alpha_2xd(const DensityMatrix& rho, const Cut& cut, AlphaOrder alpha,
                          std::optional<double> c_squared = std::nullopt) {
    if (!alpha.in_concave_window())
        throw window_error("order outside the 2xd exact-formula window");
    if (detail::side_dimension(rho.dims(), cut.side_a) != 2)
        throw std::invalid_argument("cut side a must be a qubit");
    if (c_squared) return f_alpha(*c_squared, alpha);
    if (auto psi = detail::as_pure(rho)) {
        const double c = concurrence_pure(*psi, cut);
        return f_alpha(c * c, alpha);
    }
    throw missing_concurrence_error("squared concurrence unavailable");
}

/// Same formula used as a lower bound above the concavity window.
inline double e_alpha_lower_bound(double c_squared, AlphaOrder alpha) {
    if (alpha.alpha <= kAlphaConcaveMax)
        throw window_error("order within the exact-formula window; use the exact expression");
    return f_alpha(c_squared, alpha);
}

} // namespace srae
