#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"
#include "phase.hpp"

namespace cosfft {

// Equidistant frequency coefficients f_k, k = -N/2 .. N/2-1, stored with
// k = -N/2 first.
struct Spectrum {
    std::vector<std::complex<double>> coefficients;
};

namespace detail {

// Gauss-Legendre nodes/weights on [0,1]; q=24 integrates the kernel's Fourier
// coefficients to machine precision (integrand has at most ~2 oscillations).
inline void gauss_legendre_01(int q, std::vector<double>& xs, std::vector<double>& ws) {
    xs.resize(q);
    ws.resize(q);
    for (int i = 0; i < q; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= q; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        xs[i] = 0.5 * (x + 1.0);
        ws[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

// Exponential-of-semicircle window, exp(beta(sqrt(1-t^2)-1)) on |t| <= 1.
inline double es_kernel(double t, double beta) {
    const double u = 1.0 - t * t;
    return std::exp(beta * (std::sqrt(u > 0.0 ? u : 0.0) - 1.0));
}

}  // namespace detail

// Reusable geometry for a type-2 transform: tolerance-derived kernel, the
// oversampled-grid FFT, deconvolution factors, and per-point spreading
// weights. Immutable after construction; safe to share across threads.
struct NufftPlan {
    int N = 0;                    // spectrum size (even)
    size_t J = 0;                 // sample count
    std::vector<double> points;   // x_j in [-1/2, 1/2)
    double tolerance = 1e-9;
    double oversampling = 2.0;
    int m = 0;                    // kernel half-width in grid units
    int w = 0;                    // taps per point (= 2m)
    double beta = 0.0;            // kernel shape
    size_t n = 0;                 // oversampled grid size (power of two)
    size_t direct_crossover = 0;  // J*N below this: execute falls back to direct
    std::vector<double> deconv;   // 1/Psi_hat(|k|), k = 0..N/2
    std::vector<int64_t> first_tap;  // leftmost tap index per point (unwrapped)
    std::vector<double> weights;     // J*w spreading weights
    std::shared_ptr<const Fft> fft;
};

inline NufftPlan plan(const std::vector<double>& points, int N, double tolerance,
                      double oversampling = 2.0, size_t direct_crossover = size_t{1} << 14) {
    if (N < 2 || N % 2 != 0)
        throw ParameterError("N", "must be even and at least 2");
    if (!(tolerance >= 1e-16 && tolerance <= 1e-4))
        throw ParameterError("tolerance", "must be in [1e-16, 1e-4]");
    if (!(oversampling >= 2.0))
        throw ParameterError("oversampling", "must be at least 2");
    for (size_t j = 0; j < points.size(); ++j)
        if (!(points[j] >= -0.5 && points[j] < 0.5))
            throw std::out_of_range("points[" + std::to_string(j) + "] = " +
                                    std::to_string(points[j]) + " outside [-0.5, 0.5)");

    NufftPlan p;
    p.N = N;
    p.J = points.size();
    p.points = points;
    p.tolerance = tolerance;
    p.oversampling = oversampling;
    p.direct_crossover = direct_crossover;

    // Tap count for a certified error comfortably below the target: one digit
    // of headroom over the ~10^{1-w} resolution of the ES window at
    // oversampling 2, rounded up to an even width.
    int w = static_cast<int>(std::ceil(std::log10(1.0 / tolerance))) + 2;
    w += w % 2;
    w = std::clamp(w, 4, 16);
    p.w = w;
    p.m = w / 2;
    p.beta = (w == 4 ? 2.38 : 2.30) * w;

    p.n = detail::next_pow2(static_cast<size_t>(std::ceil(oversampling * N)));
    p.fft = std::make_shared<const Fft>(p.n);

    // Fourier coefficients of the periodized kernel: Psi_hat(k) =
    // 2m * int_0^1 psi(t) cos(2 pi k m t / n) dt.
    std::vector<double> qx, qw;
    detail::gauss_legendre_01(24, qx, qw);
    p.deconv.resize(static_cast<size_t>(N / 2) + 1);
    for (int k = 0; k <= N / 2; ++k) {
        double s = 0.0;
        for (size_t i = 0; i < qx.size(); ++i)
            s += qw[i] * detail::es_kernel(qx[i], p.beta) *
                 std::cos(2.0 * M_PI * k * p.m * qx[i] / static_cast<double>(p.n));
        p.deconv[k] = 1.0 / (2.0 * p.m * s);
    }

    p.first_tap.resize(p.J);
    p.weights.resize(p.J * static_cast<size_t>(w));
    for (size_t j = 0; j < p.J; ++j) {
        const double xi = static_cast<double>(p.n) * points[j];
        const int64_t l0 = static_cast<int64_t>(std::floor(xi)) - p.m + 1;
        p.first_tap[j] = l0;
        for (int i = 0; i < w; ++i) {
            const double t = (static_cast<double>(l0 + i) - xi) / p.m;
            p.weights[j * w + i] = detail::es_kernel(t, p.beta);
        }
    }
    return p;
}

// Exact O(N*J) evaluation of f_hat_j = sum_{k=-N/2}^{N/2-1} f_k e^{-2 pi i k x_j};
// the accuracy oracle for execute_type2 and the small-problem fallback.
inline std::vector<std::complex<double>> nudft_direct(const std::vector<double>& points,
                                                      const Spectrum& f) {
    const size_t N = f.coefficients.size();
    if (N < 2 || N % 2 != 0)
        throw std::invalid_argument("spectrum: length must be even and at least 2");
    std::vector<std::complex<double>> out(points.size());
    for (size_t j = 0; j < points.size(); ++j) {
        // shift to t = k + N/2: f_hat = e^{+2 pi i (N/2) x} sum_t f[t] e^{-2 pi i t x}
        PhaseIterator ph(points[j], -1);
        KahanSum sr, si;
        for (size_t t = 0; t < N; ++t) {
            const std::complex<double> e = ph.value();
            const std::complex<double>& c = f.coefficients[t];
            sr.add(c.real() * e.real() - c.imag() * e.imag());
            si.add(c.real() * e.imag() + c.imag() * e.real());
            ph.advance();
        }
        const std::complex<double> rot =
            PhaseIterator(points[j], +1).at(static_cast<long long>(N / 2));
        out[j] = std::complex<double>(sr.get(), si.get()) * rot;
    }
    return out;
}

// Type-2 transform: deconvolve, zero-pad onto the oversampled grid, forward
// FFT, then local kernel interpolation at each sample point.
inline std::vector<std::complex<double>> execute_type2(const NufftPlan& p, const Spectrum& f) {
    if (f.coefficients.size() != static_cast<size_t>(p.N))
        throw std::invalid_argument("spectrum: length must equal plan N");
    if (p.J * static_cast<size_t>(p.N) < p.direct_crossover)
        return nudft_direct(p.points, f);

    const size_t n = p.n;
    std::vector<std::complex<double>> grid(n, {0.0, 0.0});
    const int half = p.N / 2;
    for (int i = 0; i < p.N; ++i) {
        const int k = i - half;
        const size_t idx = k >= 0 ? static_cast<size_t>(k) : n - static_cast<size_t>(-k);
        grid[idx] = f.coefficients[static_cast<size_t>(i)] * p.deconv[static_cast<size_t>(std::abs(k))];
    }
    p.fft->forward(grid);

    std::vector<std::complex<double>> out(p.J);
    const int64_t nn = static_cast<int64_t>(n);
    for (size_t j = 0; j < p.J; ++j) {
        std::complex<double> acc{0.0, 0.0};
        const int64_t l0 = p.first_tap[j];
        const double* wj = &p.weights[j * static_cast<size_t>(p.w)];
        for (int i = 0; i < p.w; ++i) {
            const int64_t l = ((l0 + i) % nn + nn) % nn;
            acc += grid[static_cast<size_t>(l)] * wj[i];
        }
        out[j] = acc;
    }
    return out;
}

}  // namespace cosfft
