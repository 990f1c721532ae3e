#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cosfft {

namespace detail {

inline bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace detail

// Iterative radix-2 complex FFT on power-of-two sizes,
//   X_t = sum_u x_u e^{-2 pi i u t / n}.
// Twiddles are tabulated once per size so repeated executions stay cheap and
// bit-identical.
class Fft {
public:
    explicit Fft(size_t n) : n_(n) {
        if (!detail::is_pow2(n) || n < 1)
            throw std::invalid_argument("fft size must be a power of two");
        tw_.resize(n_ / 2);
        for (size_t i = 0; i < n_ / 2; ++i) {
            const double ang = -2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n_);
            tw_[i] = {std::cos(ang), std::sin(ang)};
        }
        rev_.resize(n_);
        size_t lg = 0;
        while ((size_t{1} << lg) < n_) ++lg;
        for (size_t i = 0; i < n_; ++i) {
            size_t r = 0;
            for (size_t b = 0; b < lg; ++b)
                if (i & (size_t{1} << b)) r |= size_t{1} << (lg - 1 - b);
            rev_[i] = r;
        }
    }

    size_t size() const { return n_; }

    void forward(std::vector<std::complex<double>>& a) const {
        if (a.size() != n_) throw std::invalid_argument("fft: size mismatch");
        for (size_t i = 0; i < n_; ++i)
            if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
        for (size_t len = 2; len <= n_; len <<= 1) {
            const size_t half = len >> 1;
            const size_t stride = n_ / len;
            for (size_t blk = 0; blk < n_; blk += len) {
                for (size_t j = 0; j < half; ++j) {
                    const std::complex<double> w = tw_[j * stride];
                    const std::complex<double> u = a[blk + j];
                    const std::complex<double> v = a[blk + j + half] * w;
                    a[blk + j] = u + v;
                    a[blk + j + half] = u - v;
                }
            }
        }
    }

private:
    size_t n_;
    std::vector<std::complex<double>> tw_;
    std::vector<size_t> rev_;
};

// Move a centered spectrum (k = -N/2 first) onto a natural-layout FFT grid of
// size n >= N: index k lands at (k mod n), everything else zero.
inline std::vector<std::complex<double>> centered_to_natural(
    const std::vector<std::complex<double>>& f, size_t n) {
    const size_t N = f.size();
    if (n < N) throw std::invalid_argument("grid smaller than spectrum");
    std::vector<std::complex<double>> out(n, {0.0, 0.0});
    const size_t half = N / 2;
    for (size_t i = 0; i < N; ++i) {
        const long long k = static_cast<long long>(i) - static_cast<long long>(half);
        out[k >= 0 ? static_cast<size_t>(k) : n - static_cast<size_t>(-k)] = f[i];
    }
    return out;
}

// Inverse of centered_to_natural (used by tests).
inline std::vector<std::complex<double>> natural_to_centered(
    const std::vector<std::complex<double>>& g, size_t N) {
    const size_t n = g.size();
    if (n < N) throw std::invalid_argument("grid smaller than spectrum");
    std::vector<std::complex<double>> out(N);
    const size_t half = N / 2;
    for (size_t i = 0; i < N; ++i) {
        const long long k = static_cast<long long>(i) - static_cast<long long>(half);
        out[i] = g[k >= 0 ? static_cast<size_t>(k) : n - static_cast<size_t>(-k)];
    }
    return out;
}

}  // namespace cosfft
