#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "models.hpp"
#include "nufft.hpp"
#include "phase.hpp"
#include "truncation.hpp"

namespace cosfft {

struct DensityResult {
    std::vector<double> points;
    std::vector<double> values;  // NaN where invalid
    std::vector<char> valid;     // x inside (a, b)
};

namespace detail {

// Cosine-series weights for the density: w_k = (2/(b-a)) Re(phi_k e^{-i eta_k a}),
// with the k=0 term pre-halved.
inline std::vector<double> density_weights(const ModelParams& model, const MarketInputs& market,
                                           const TruncationRange& range) {
    validate(market);
    const int M = range.M;
    std::vector<double> etas(M);
    for (int k = 0; k < M; ++k) etas[k] = range.eta(k);
    const std::vector<cplx> phi = charfn_eval_batch(model, market.maturity, etas);
    const std::vector<double> coef = density_coefficients(range);

    std::vector<double> w(M);
    PhaseIterator ph(range.a / (2.0 * (range.b - range.a)), -1);
    for (int k = 0; k < M; ++k) {
        w[k] = coef[static_cast<size_t>(k)] * (phi[k] * ph.value()).real();
        ph.advance();
    }
    w[0] *= 0.5;
    return w;
}

}  // namespace detail

// f(x) ~= sum'_k (2/(b-a)) Re(phi_k e^{-i eta_k a}) cos(eta_k (x-a)), summed
// term by term per point.
inline DensityResult density_direct(const ModelParams& model, const MarketInputs& market,
                                    const TruncationRange& range, const std::vector<double>& xs) {
    const std::vector<double> w = detail::density_weights(model, market, range);
    DensityResult out;
    out.points = xs;
    out.values.assign(xs.size(), std::numeric_limits<double>::quiet_NaN());
    out.valid.assign(xs.size(), 0);
    const double wid = range.b - range.a;
    for (size_t j = 0; j < xs.size(); ++j) {
        if (!(xs[j] > range.a && xs[j] < range.b)) continue;
        out.valid[j] = 1;
        PhaseIterator ph((xs[j] - range.a) / (2.0 * wid), -1);
        KahanSum sum;
        for (size_t k = 0; k < w.size(); ++k) {
            sum.add(w[k] * ph.value().real());
            ph.advance();
        }
        out.values[j] = sum.get();
    }
    return out;
}

// Same series through the type-2 NUFFT: cos(eta_k (x-a)) = Re e^{-2 pi i k xt}
// with xt = (x-a)/(2(b-a)), so the weights drop into the k >= 0 half of a
// centered spectrum.
inline DensityResult density_nufft(const ModelParams& model, const MarketInputs& market,
                                   const TruncationRange& range, const std::vector<double>& xs,
                                   double tolerance = 1e-9) {
    const std::vector<double> w = detail::density_weights(model, market, range);
    const int M = range.M;
    Spectrum f;
    f.coefficients.assign(2 * static_cast<size_t>(M), {0.0, 0.0});
    for (int k = 0; k < M; ++k)
        f.coefficients[static_cast<size_t>(M + k)] = {w[static_cast<size_t>(k)], 0.0};

    DensityResult out;
    out.points = xs;
    out.values.assign(xs.size(), std::numeric_limits<double>::quiet_NaN());
    out.valid.assign(xs.size(), 0);
    const double wid = range.b - range.a;
    std::vector<double> pts;
    pts.reserve(xs.size());
    for (size_t j = 0; j < xs.size(); ++j) {
        if (!(xs[j] > range.a && xs[j] < range.b)) continue;
        out.valid[j] = 1;
        pts.push_back((xs[j] - range.a) / (2.0 * wid));
    }
    const NufftPlan pl = plan(pts, 2 * M, tolerance);
    const std::vector<std::complex<double>> fh = execute_type2(pl, f);
    size_t v = 0;
    for (size_t j = 0; j < xs.size(); ++j)
        if (out.valid[j]) out.values[j] = fh[v++].real();
    return out;
}

}  // namespace cosfft
