#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "classic.hpp"
#include "models.hpp"
#include "nufft.hpp"
#include "phase.hpp"
#include "truncation.hpp"

namespace cosfft {

enum class NufftMapping { Classic, Alt };

// Strike-independent spectral data for one (model, market, range, M); build
// once, reuse across strike batches of the same maturity.
struct SpectralCoefficients {
    Spectrum spectrum;  // length N = 2M, k = -M first
    std::complex<double> residual_constant{0.0, 0.0};
    NufftMapping mapping = NufftMapping::Classic;
    double a = 0.0, b = 0.0;
    double phi0 = 1.0;  // phi(0), real for a normalized characteristic function
};

// f_k = phi(eta_k) e^{-i eta_k a} U_k for k = 1..M-1, f_0 = phi(0) U_0 / 2,
// f_k = 0 for k < 0.
inline SpectralCoefficients assemble_classic(const ModelParams& model, const MarketInputs& market,
                                             const TruncationRange& range, int M) {
    validate(market);
    if (M < 1) throw ParameterError("M", "must be positive");
    const double w = range.b - range.a;

    std::vector<double> etas(M);
    for (int k = 0; k < M; ++k) etas[k] = k * M_PI / w;
    const std::vector<cplx> phi = charfn_eval_batch(model, market.maturity, etas);

    TruncationRange r = range;
    r.M = M;
    const PayoffCoefficients U = put_coefficients(r);

    SpectralCoefficients sc;
    sc.mapping = NufftMapping::Classic;
    sc.a = range.a;
    sc.b = range.b;
    sc.phi0 = phi[0].real();
    sc.spectrum.coefficients.assign(2 * static_cast<size_t>(M), {0.0, 0.0});
    PhaseIterator ph(range.a / (2.0 * w), -1);
    for (int k = 0; k < M; ++k) {
        cplx f = phi[k] * ph.value() * U.values[k];
        if (k == 0) f *= 0.5;
        sc.spectrum.coefficients[static_cast<size_t>(M + k)] = f;
        ph.advance();
    }
    return sc;
}

// Both signs of k populated from p_k = phi(eta_k) e^{-i eta_k a} and the
// payoff split A_k = (-1 - i eta_k)/((b-a)(1+eta_k^2)) + i/((b-a) eta_k):
// f_k = p_k A_k, f_{-k} = p_k conj(A_k) for k = 1..M-1; f_0 = f_{-M} = 0.
// The strike-independent remainder is collected in residual_constant.
inline SpectralCoefficients assemble_alt(const ModelParams& model, const MarketInputs& market,
                                         const TruncationRange& range, int M) {
    validate(market);
    if (M < 1) throw ParameterError("M", "must be positive");
    const double w = range.b - range.a;
    const double ea = std::exp(range.a);

    std::vector<double> etas(M);
    for (int k = 0; k < M; ++k) etas[k] = k * M_PI / w;
    const std::vector<cplx> phi = charfn_eval_batch(model, market.maturity, etas);

    SpectralCoefficients sc;
    sc.mapping = NufftMapping::Alt;
    sc.a = range.a;
    sc.b = range.b;
    sc.phi0 = phi[0].real();
    sc.spectrum.coefficients.assign(2 * static_cast<size_t>(M), {0.0, 0.0});

    KahanSum rr, ri;
    rr.add(ea / w * sc.phi0);
    PhaseIterator ph(range.a / (2.0 * w), -1);
    ph.advance();
    for (int k = 1; k < M; ++k) {
        const double eta = etas[k];
        const cplx pk = phi[k] * ph.value();
        const cplx A = cplx(-1.0, -eta) / (w * (1.0 + eta * eta)) + cplx(0.0, 1.0) / (w * eta);
        sc.spectrum.coefficients[static_cast<size_t>(M + k)] = pk * A;
        sc.spectrum.coefficients[static_cast<size_t>(M - k)] = pk * std::conj(A);
        const cplx res = pk * (2.0 * ea / (w * (1.0 + eta * eta)));
        rr.add(res.real());
        ri.add(res.imag());
        ph.advance();
    }
    sc.residual_constant = market.forward * cplx(rr.get(), ri.get());
    return sc;
}

// Transform sample points for the valid strikes of a batch, in batch order:
// Classic x_j/(2(b-a)); Alt (x_j - a)/(2(b-a)).
inline std::vector<double> nufft_points(const SpectralCoefficients& sc, const StrikeBatch& batch) {
    const double w2 = 2.0 * (sc.b - sc.a);
    std::vector<double> pts;
    pts.reserve(batch.strikes.size());
    for (size_t j = 0; j < batch.strikes.size(); ++j) {
        if (!batch.valid[j]) continue;
        const double x = batch.log_moneyness[j];
        pts.push_back(sc.mapping == NufftMapping::Classic ? x / w2 : (x - sc.a) / w2);
    }
    return pts;
}

// Price against a prebuilt plan (hot path: the plan depends only on the
// strike grid and tolerance, so repeated pricing reuses it).
inline PriceBatch price_puts_nufft_planned(const SpectralCoefficients& sc,
                                           const MarketInputs& market, const StrikeBatch& batch,
                                           const NufftPlan& pl) {
    validate(market);
    if (pl.N != static_cast<int>(sc.spectrum.coefficients.size()))
        throw std::invalid_argument("plan: size does not match spectrum");

    const std::vector<std::complex<double>> fh = execute_type2(pl, sc.spectrum);

    const size_t J = batch.strikes.size();
    PriceBatch out;
    out.puts.assign(J, std::numeric_limits<double>::quiet_NaN());
    out.valid = batch.valid;
    out.backend = sc.mapping == NufftMapping::Classic ? Backend::Nufft : Backend::NufftAlt;
    const double w = sc.b - sc.a;
    const double B = market.discount;
    size_t v = 0;
    for (size_t j = 0; j < J; ++j) {
        if (!batch.valid[j]) continue;
        if (v >= fh.size()) throw std::invalid_argument("plan: fewer points than valid strikes");
        const double K = batch.strikes[j];
        if (sc.mapping == NufftMapping::Classic) {
            out.puts[j] = B * K * fh[v].real();
        } else {
            const double xt = (batch.log_moneyness[j] - sc.a) / (2.0 * w);
            out.puts[j] = B * (K * sc.phi0 * (2.0 * xt - 1.0 / w) + K * fh[v].real() +
                               sc.residual_constant.real());
        }
        ++v;
    }
    if (v != fh.size()) throw std::invalid_argument("plan: more points than valid strikes");
    return out;
}

inline PriceBatch price_puts_nufft(const SpectralCoefficients& sc, const MarketInputs& market,
                                   const StrikeBatch& batch, double tolerance = 1e-9) {
    const NufftPlan pl = plan(nufft_points(sc, batch),
                              static_cast<int>(sc.spectrum.coefficients.size()), tolerance);
    return price_puts_nufft_planned(sc, market, batch, pl);
}

}  // namespace cosfft
