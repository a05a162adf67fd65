#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qwalk {

using cplx = std::complex<double>;

/// Minimal dense complex matrix, row-major. Sized for the lattices this
/// simulator handles (a few hundred modes), not for general linear algebra.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const { return n_; }

    cplx& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

    ComplexMatrix operator*(const ComplexMatrix& rhs) const {
        if (n_ != rhs.n_) throw std::invalid_argument("matrix size mismatch");
        ComplexMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < n_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < n_; ++j) out(i, j) += aik * rhs(k, j);
            }
        }
        return out;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        if (v.size() != n_) throw std::invalid_argument("vector size mismatch");
        std::vector<cplx> out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
            out[i] = s;
        }
        return out;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    /// max |(U†U - I)_{ij}|
    double unitarity_defect() const {
        ComplexMatrix p = adjoint() * (*this);
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                const cplx expect = (i == j) ? cplx{1.0} : cplx{};
                worst = std::max(worst, std::abs(p(i, j) - expect));
            }
        return worst;
    }

private:
    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

}  // namespace qwalk
