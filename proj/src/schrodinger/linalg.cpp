#include "linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace nwlab::schrodinger::detail {

namespace {
inline double mag(double x) { return std::abs(x); }
inline double mag(const complexd& x) { return std::abs(x.real()) + std::abs(x.imag()); }
}  // namespace

template <typename T>
DenseLu<T>::DenseLu(std::vector<T> a, std::size_t n) : n_(n), lu_(std::move(a)), piv_(n) {
    auto L = [&](std::size_t i, std::size_t j) -> T& { return lu_[i * n_ + j]; };
    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t pivot = col;
        double best = mag(L(col, col));
        for (std::size_t r = col + 1; r < n_; ++r) {
            const double m = mag(L(r, col));
            if (m > best) {
                best = m;
                pivot = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("DenseLu: singular matrix");
        piv_[col] = pivot;
        if (pivot != col)
            for (std::size_t j = 0; j < n_; ++j) std::swap(L(col, j), L(pivot, j));
        const T inv = T(1.0) / L(col, col);
        for (std::size_t r = col + 1; r < n_; ++r) {
            const T f = L(r, col) * inv;
            L(r, col) = f;
            if (f != T(0.0)) {
                const T* src = lu_.data() + col * n_;
                T* dst = lu_.data() + r * n_;
                for (std::size_t j = col + 1; j < n_; ++j) dst[j] -= f * src[j];
            }
        }
    }
}

template <typename T>
void DenseLu<T>::solve(T* b) const {
    for (std::size_t i = 0; i < n_; ++i)
        if (piv_[i] != i) std::swap(b[i], b[piv_[i]]);
    for (std::size_t i = 1; i < n_; ++i) {
        const T* row = lu_.data() + i * n_;
        T acc = b[i];
        for (std::size_t j = 0; j < i; ++j) acc -= row[j] * b[j];
        b[i] = acc;
    }
    for (std::size_t i = n_; i-- > 0;) {
        const T* row = lu_.data() + i * n_;
        T acc = b[i];
        for (std::size_t j = i + 1; j < n_; ++j) acc -= row[j] * b[j];
        b[i] = acc / row[i];
    }
}

template <typename T>
void tridiag_solve(const std::vector<T>& lower, const std::vector<T>& diag,
                   const std::vector<T>& upper, T* b, std::size_t n) {
    std::vector<T> c(n);
    T beta = diag[0];
    if (mag(beta) == 0.0) throw std::runtime_error("tridiag_solve: zero pivot at row 0");
    b[0] = b[0] / beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i];
        if (mag(beta) == 0.0) throw std::runtime_error("tridiag_solve: zero pivot");
        b[i] = (b[i] - lower[i] * b[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) b[i] -= c[i + 1] * b[i + 1];
}

template class DenseLu<double>;
template class DenseLu<complexd>;
template void tridiag_solve<double>(const std::vector<double>&, const std::vector<double>&,
                                    const std::vector<double>&, double*, std::size_t);
template void tridiag_solve<complexd>(const std::vector<complexd>&,
                                      const std::vector<complexd>&,
                                      const std::vector<complexd>&, complexd*, std::size_t);

}  // namespace nwlab::schrodinger::detail
