#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "srae/errors.hpp"

namespace srae {

using cplx = std::complex<double>;

// Hard cap on the total Hilbert-space dimension produced by tensor products.
inline constexpr std::size_t kDimensionCap = 4096;

/// Dense row-major complex matrix. The workhorse for density operators and
/// small unitaries; all systems in scope fit comfortably in dense storage.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, cplx{0.0, 0.0}) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_)
            throw std::invalid_argument("entry count does not match rows x cols");
        check_finite();
    }

    // Row-major nested initializer, e.g. {{1,0},{0,-1}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        entries_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_)
                throw std::invalid_argument("ragged initializer rows");
            for (const auto& v : row) entries_.push_back(v);
        }
        check_finite();
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<double>& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<cplx>& entries() const { return entries_; }
    std::vector<cplx>& entries() { return entries_; }

    cplx trace() const {
        cplx t{0.0, 0.0};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : entries_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : entries_) s += std::norm(v);
        return std::sqrt(s);
    }

    // Largest |a_ij - conj(a_ji)| over the matrix; 0 for exactly Hermitian input.
    double hermiticity_error() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    ComplexMatrix conjugated() const {
        ComplexMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = std::conj(entries_[i]);
        return out;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
        require_same_shape(rhs);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
        require_same_shape(rhs);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
        return *this;
    }

    ComplexMatrix& operator*=(cplx s) {
        for (auto& v : entries_) v *= s;
        return *this;
    }

  private:
    void require_same_shape(const ComplexMatrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    void check_finite() const {
        for (const auto& v : entries_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("matrix entries must be finite");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> entries_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
inline ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

/// Kronecker product with the leftmost factor owning the most significant
/// index block (subsystem 0 is the leftmost tensor factor).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                          std::size_t dimension_cap = kDimensionCap) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (rows > dimension_cap || cols > dimension_cap)
        throw error("dimension cap exceeded");
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

// Common single-qubit operators.
inline const ComplexMatrix& pauli_x() {
    static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
    return m;
}
inline const ComplexMatrix& pauli_y() {
    static const ComplexMatrix m{{cplx{0, 0}, cplx{0, -1}}, {cplx{0, 1}, cplx{0, 0}}};
    return m;
}
inline const ComplexMatrix& pauli_z() {
    static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
    return m;
}

} // namespace srae
