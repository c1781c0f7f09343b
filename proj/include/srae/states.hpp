#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "srae/complex_matrix.hpp"
#include "srae/errors.hpp"
#include "srae/hermitian_eig.hpp"

namespace srae {

inline std::size_t total_dimension(const std::vector<std::size_t>& dims) {
    std::size_t d = 1;
    for (std::size_t k : dims) {
        if (k == 0) throw std::invalid_argument("subsystem dimension must be positive");
        d *= k;
    }
    return d;
}

// stride[k] = product of dims right of k; subsystem 0 is the leftmost factor.
inline std::vector<std::size_t> subsystem_strides(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
    return s;
}

namespace detail {

// Offsets of every basis assignment of `subset`, row-major in subset order.
inline std::vector<std::size_t> basis_offsets(const std::vector<std::size_t>& dims,
                                              const std::vector<std::size_t>& subset) {
    const std::vector<std::size_t> strides = subsystem_strides(dims);
    std::vector<std::size_t> offs{0};
    for (std::size_t k : subset) {
        std::vector<std::size_t> next;
        next.reserve(offs.size() * dims[k]);
        for (std::size_t base : offs)
            for (std::size_t i = 0; i < dims[k]; ++i) next.push_back(base + i * strides[k]);
        offs = std::move(next);
    }
    return offs;
}

inline std::vector<std::size_t> checked_subset(std::size_t n_subsystems,
                                               std::vector<std::size_t> subset,
                                               const char* empty_message) {
    if (subset.empty()) throw std::invalid_argument(empty_message);
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
        throw std::invalid_argument("duplicate subsystem index");
    if (subset.back() >= n_subsystems) throw std::invalid_argument("subsystem index out of range");
    return subset;
}

inline std::vector<std::size_t> complement_of(const std::vector<std::size_t>& subset,
                                              std::size_t n) {
    std::vector<std::size_t> rest;
    rest.reserve(n - subset.size());
    std::size_t j = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (j < subset.size() && subset[j] == k)
            ++j;
        else
            rest.push_back(k);
    }
    return rest;
}

} // namespace detail

/// Normalized state vector over a tensor product of subsystem dimensions.
class PureState {
  public:
    PureState(std::vector<std::size_t> dims, std::vector<cplx> amplitudes)
        : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != total_dimension(dims_))
            throw state_error("amplitude count does not match subsystem dimensions");
        double norm2 = 0.0;
        for (const auto& a : amplitudes_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw state_error("amplitudes must be finite");
            norm2 += std::norm(a);
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10)
            throw state_error("state vector not normalized");
    }

    // For internal callers whose construction guarantees normalization.
    static PureState unchecked(std::vector<std::size_t> dims, std::vector<cplx> amplitudes) {
        PureState s;
        s.dims_ = std::move(dims);
        s.amplitudes_ = std::move(amplitudes);
        return s;
    }

    const std::vector<std::size_t>& dims() const { return dims_; }
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    std::size_t subsystems() const { return dims_.size(); }

  private:
    PureState() = default;
    std::vector<std::size_t> dims_;
    std::vector<cplx> amplitudes_;
};

/// Hermitian, PSD, unit-trace operator with its subsystem dimension list.
/// The constructor enforces the cheap invariants (shape, Hermiticity, trace);
/// positivity needs a spectrum and is checked by validate_psd(), which state
/// ingestion always calls.
class DensityMatrix {
  public:
    DensityMatrix(std::vector<std::size_t> dims, ComplexMatrix matrix)
        : dims_(std::move(dims)), matrix_(std::move(matrix)) {
        const std::size_t d = total_dimension(dims_);
        if (matrix_.rows() != d || matrix_.cols() != d)
            throw state_error("matrix size does not match subsystem dimensions");
        if (matrix_.hermiticity_error() > 1e-10) throw state_error("matrix not Hermitian");
        if (std::abs(matrix_.trace().real() - 1.0) > 1e-10 || std::abs(matrix_.trace().imag()) > 1e-10)
            throw state_error("trace deviates from 1");
    }

    const std::vector<std::size_t>& dims() const { return dims_; }
    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t dimension() const { return matrix_.rows(); }
    std::size_t subsystems() const { return dims_.size(); }

    double purity() const {
        double s = 0.0;
        for (const auto& v : matrix_.entries()) s += std::norm(v);
        return s;
    }

    std::vector<double> spectrum() const { return eig_hermitian(matrix_).values; }

    void validate_psd(double tol = 1e-10) const {
        const std::vector<double> lambda = spectrum();
        if (!lambda.empty() && lambda.back() < -tol) throw state_error("matrix not PSD");
    }

  private:
    std::vector<std::size_t> dims_;
    ComplexMatrix matrix_;
};

inline DensityMatrix density_of(const PureState& psi) {
    const std::size_t d = psi.dimension();
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m(i, j) = psi.amplitudes()[i] * std::conj(psi.amplitudes()[j]);
    return DensityMatrix(psi.dims(), std::move(m));
}

/// Reduced state on the kept subsystems (kept indices retain their original
/// left-to-right order).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
    keep = detail::checked_subset(rho.subsystems(), std::move(keep), "must keep at least one subsystem");
    const std::vector<std::size_t> traced = detail::complement_of(keep, rho.subsystems());

    std::vector<std::size_t> kept_dims;
    kept_dims.reserve(keep.size());
    for (std::size_t k : keep) kept_dims.push_back(rho.dims()[k]);

    const std::vector<std::size_t> kept_offs = detail::basis_offsets(rho.dims(), keep);
    const std::vector<std::size_t> traced_offs = detail::basis_offsets(rho.dims(), traced);
    const std::size_t kd = kept_offs.size();
    const std::size_t full = rho.dimension();
    const auto& a = rho.matrix().entries();

    ComplexMatrix out(kd, kd);
    for (std::size_t i = 0; i < kd; ++i)
        for (std::size_t j = 0; j < kd; ++j) {
            cplx sum{0.0, 0.0};
            for (std::size_t t : traced_offs)
                sum += a[(kept_offs[i] + t) * full + (kept_offs[j] + t)];
            out(i, j) = sum;
        }
    return DensityMatrix(std::move(kept_dims), std::move(out));
}

/// Marginal of a pure state without materializing the full projector.
inline DensityMatrix marginal_of_pure(const PureState& psi, std::vector<std::size_t> keep) {
    keep = detail::checked_subset(psi.subsystems(), std::move(keep), "must keep at least one subsystem");
    const std::vector<std::size_t> traced = detail::complement_of(keep, psi.subsystems());

    std::vector<std::size_t> kept_dims;
    kept_dims.reserve(keep.size());
    for (std::size_t k : keep) kept_dims.push_back(psi.dims()[k]);

    const std::vector<std::size_t> kept_offs = detail::basis_offsets(psi.dims(), keep);
    const std::vector<std::size_t> traced_offs = detail::basis_offsets(psi.dims(), traced);
    const std::size_t kd = kept_offs.size();
    const auto& amp = psi.amplitudes();

    ComplexMatrix out(kd, kd);
    for (std::size_t i = 0; i < kd; ++i)
        for (std::size_t j = i; j < kd; ++j) {
            cplx sum{0.0, 0.0};
            for (std::size_t t : traced_offs)
                sum += amp[kept_offs[i] + t] * std::conj(amp[kept_offs[j] + t]);
            out(i, j) = sum;
            if (j != i) out(j, i) = std::conj(sum);
        }
    return DensityMatrix(std::move(kept_dims), std::move(out));
}

struct EnsembleMember {
    double weight;
    PureState state;
};

/// Weighted pure-state decomposition of a mixed state.
class Ensemble {
  public:
    explicit Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
        if (members_.empty()) throw state_error("ensemble must have at least one member");
        double total = 0.0;
        for (const auto& m : members_) {
            if (m.weight < -1e-12) throw state_error("ensemble weights must be nonnegative");
            if (m.state.dims() != members_.front().state.dims())
                throw state_error("ensemble members must share subsystem dimensions");
            total += m.weight;
        }
        if (std::abs(total - 1.0) > 1e-10) throw state_error("ensemble weights must sum to 1");
    }

    const std::vector<EnsembleMember>& members() const { return members_; }

    DensityMatrix mixture() const {
        const std::size_t d = members_.front().state.dimension();
        ComplexMatrix m(d, d);
        for (const auto& member : members_) {
            if (member.weight <= 0.0) continue;
            const auto& amp = member.state.amplitudes();
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    m(i, j) += member.weight * amp[i] * std::conj(amp[j]);
        }
        return DensityMatrix(members_.front().state.dims(), std::move(m));
    }

    void require_mixes_to(const DensityMatrix& target, double tol = 1e-9) const {
        if (max_abs_diff(mixture().matrix(), target.matrix()) > tol)
            throw state_error("ensemble does not mix to the target state");
    }

  private:
    std::vector<EnsembleMember> members_;
};

} // namespace srae
