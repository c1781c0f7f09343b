#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "srae/complex_matrix.hpp"
#include "srae/errors.hpp"

namespace srae {

struct EigResult {
    std::vector<double> values; // sorted descending
    ComplexMatrix vectors;      // column k is the eigenvector of values[k]
};

namespace detail {

// Off-diagonal Frobenius norm of a square matrix.
inline double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Each rotation diagonalizes one 2x2 principal subproblem exactly; sweeps
/// repeat until the off-diagonal Frobenius norm drops below 1e-13 (or 100
/// sweeps). Eigenvalues come back sorted descending with matching columns.
inline EigResult eig_hermitian(const ComplexMatrix& m, double hermitian_tol = 1e-10) {
    if (!m.square()) throw std::invalid_argument("eigendecomposition needs a square matrix");
    if (m.hermiticity_error() > hermitian_tol) throw error("matrix not Hermitian");

    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    // Symmetrize exactly so roundoff in the input cannot drift the iteration.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx{a(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    constexpr double kOffdiagThreshold = 1e-13;
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps && n > 1; ++sweep) {
        if (detail::offdiag_norm(a) <= kOffdiagThreshold) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx b = a(p, q);
                const double babs = std::abs(b);
                if (babs < 1e-300) continue;

                // Unitary 2x2 rotation J with J(p,p)=c, J(p,q)=s*phase,
                // J(q,p)=-s*conj(phase), J(q,q)=c zeroing a(p,q).
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * babs);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx phase = b / babs;
                const cplx sp = s * phase;          // J(p,q)
                const cplx spc = -s * std::conj(phase); // J(q,p)

                // A <- A J (update columns p and q).
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp + spc * akq;
                    a(k, q) = sp * akp + c * akq;
                }
                // A <- J^dagger A (update rows p and q).
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(spc) * aqk;
                    a(q, k) = std::conj(sp) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx{a(p, p).real(), 0.0};
                a(q, q) = cplx{a(q, q).real(), 0.0};

                // V <- V J accumulates the eigenvector columns.
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp + spc * vkq;
                    v(k, q) = sp * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigResult out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Hermitian PSD square root via eigendecomposition. Eigenvalues in
/// [-1e-10, 0) are treated as roundoff and clipped to zero; anything more
/// negative rejects the input.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    EigResult eig = eig_hermitian(m);
    const std::size_t n = m.rows();
    std::vector<double> roots(n);
    for (std::size_t k = 0; k < n; ++k) {
        double lambda = eig.values[k];
        if (lambda < -1e-10) throw error("matrix not PSD");
        roots[k] = std::sqrt(std::max(lambda, 0.0));
    }
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx sum{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k)
                sum += eig.vectors(i, k) * roots[k] * std::conj(eig.vectors(j, k));
            out(i, j) = sum;
        }
    return out;
}

} // namespace srae
