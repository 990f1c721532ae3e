#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "models.hpp"
#include "phase.hpp"
#include "truncation.hpp"

namespace cosfft {

enum class Backend { Classic, ClassicAlt, Nufft, NufftAlt };

struct StrikeBatch {
    std::vector<double> strikes;
    std::vector<double> log_moneyness;  // x_j = ln(K_j / F)
    std::vector<char> valid;            // x_j in (a, b)
};

struct PriceBatch {
    std::vector<double> puts;
    std::vector<double> calls;
    std::vector<char> valid;
    Backend backend = Backend::Classic;
};

inline StrikeBatch make_strike_batch(const std::vector<double>& strikes,
                                     const MarketInputs& market,
                                     const TruncationRange& range) {
    validate(market);
    StrikeBatch out;
    out.strikes = strikes;
    out.log_moneyness.resize(strikes.size());
    out.valid.resize(strikes.size());
    for (size_t j = 0; j < strikes.size(); ++j) {
        if (!(strikes[j] > 0.0))
            throw ParameterError("strikes", "must be positive");
        const double x = std::log(strikes[j] / market.forward);
        out.log_moneyness[j] = x;
        out.valid[j] = (x > range.a && x < range.b) ? 1 : 0;
    }
    return out;
}

// Strike-independent pieces of Eq. 4, computed once per (model, range) and
// reused across strikes: g_k = phi(eta_k) U_k e^{-i eta_k a}, g_0 halved.
struct ClassicCoefficients {
    std::vector<double> re;  // Re g_k
    std::vector<double> im;  // Im g_k
    double a = 0.0, b = 0.0;
};

inline ClassicCoefficients classic_coefficients(const ModelParams& model,
                                                const MarketInputs& market,
                                                const TruncationRange& range) {
    validate(market);
    const int M = range.M;
    std::vector<double> etas(M);
    for (int k = 0; k < M; ++k) etas[k] = range.eta(k);
    const std::vector<cplx> phi = charfn_eval_batch(model, market.maturity, etas);
    const PayoffCoefficients U = put_coefficients(range);

    ClassicCoefficients out;
    out.re.resize(M);
    out.im.resize(M);
    out.a = range.a;
    out.b = range.b;
    // e^{-i eta_k a} = e^{-2 pi i k c}, c = a / (2(b-a))
    PhaseIterator ph(range.a / (2.0 * (range.b - range.a)), -1);
    for (int k = 0; k < M; ++k) {
        cplx g = phi[k] * ph.value() * U.values[k];
        if (k == 0) g *= 0.5;
        out.re[k] = g.real();
        out.im[k] = g.imag();
        ph.advance();
    }
    return out;
}

// Eq. 4: P = B K sum'_k Re[g_k e^{-i eta_k x}], with the k=0 term pre-halved.
inline PriceBatch price_puts_classic_cached(const ClassicCoefficients& g,
                                            const MarketInputs& market,
                                            const StrikeBatch& batch) {
    const size_t J = batch.strikes.size();
    const int M = static_cast<int>(g.re.size());
    PriceBatch out;
    out.puts.assign(J, std::numeric_limits<double>::quiet_NaN());
    out.valid = batch.valid;
    out.backend = Backend::Classic;
    const double w2 = 2.0 * (g.b - g.a);
    for (size_t j = 0; j < J; ++j) {
        if (!batch.valid[j]) continue;
        PhaseIterator ph(batch.log_moneyness[j] / w2, -1);
        KahanSum sum;
        for (int k = 0; k < M; ++k) {
            const cplx e = ph.value();
            sum.add(g.re[k] * e.real() - g.im[k] * e.imag());
            ph.advance();
        }
        out.puts[j] = market.discount * batch.strikes[j] * sum.get();
    }
    return out;
}

inline PriceBatch price_puts_classic(const ModelParams& model, const MarketInputs& market,
                                     const TruncationRange& range, const StrikeBatch& batch) {
    return price_puts_classic_cached(classic_coefficients(model, market, range), market, batch);
}

// Strike-independent pieces of the alternative formula (Eq. 8): the density
// cosine weights w_k = Re[phi(eta_k) e^{-i eta_k a}], w_0 halved.
struct ClassicAltCoefficients {
    std::vector<double> w;
    double a = 0.0, b = 0.0;
    double phi0 = 1.0;  // Re phi(0), kept explicit to mirror the formula
};

inline ClassicAltCoefficients classic_alt_coefficients(const ModelParams& model,
                                                       const MarketInputs& market,
                                                       const TruncationRange& range) {
    validate(market);
    const int M = range.M;
    std::vector<double> etas(M);
    for (int k = 0; k < M; ++k) etas[k] = range.eta(k);
    const std::vector<cplx> phi = charfn_eval_batch(model, market.maturity, etas);

    ClassicAltCoefficients out;
    out.w.resize(M);
    out.a = range.a;
    out.b = range.b;
    out.phi0 = phi[0].real();
    PhaseIterator ph(range.a / (2.0 * (range.b - range.a)), -1);
    for (int k = 0; k < M; ++k) {
        out.w[k] = (phi[k] * ph.value()).real();
        ph.advance();
    }
    out.w[0] *= 0.5;
    return out;
}

// Eqs. 8-10: P = B sum'_k w_k V_k(x) with the strike embedded in V_k.
// V_0 = 2F(e^a - e^x + e^x (x-a))/(b-a);
// V_k = 2F/((b-a)(1+eta^2)) (e^a - cos(th) e^x - eta sin(th) e^x)
//     + 2F/((b-a)eta) sin(th) e^x,  th = eta_k (x-a).
inline PriceBatch price_puts_classic_alt_cached(const ClassicAltCoefficients& cc,
                                                const MarketInputs& market,
                                                const StrikeBatch& batch) {
    const size_t J = batch.strikes.size();
    const int M = static_cast<int>(cc.w.size());
    PriceBatch out;
    out.puts.assign(J, std::numeric_limits<double>::quiet_NaN());
    out.valid = batch.valid;
    out.backend = Backend::ClassicAlt;
    const double a = cc.a, wid = cc.b - cc.a;
    const double F = market.forward;
    const double ea = std::exp(a);
    for (size_t j = 0; j < J; ++j) {
        if (!batch.valid[j]) continue;
        const double x = batch.log_moneyness[j];
        const double ex = std::exp(x);
        KahanSum sum;
        sum.add(cc.w[0] * 2.0 * F * (ea - ex + ex * (x - a)) / wid);
        // cos/sin(eta_k (x-a)) via e^{-2 pi i k c}, c = (x-a)/(2(b-a))
        PhaseIterator ph((x - a) / (2.0 * wid), -1);
        ph.advance();
        for (int k = 1; k < M; ++k) {
            const double e = k * M_PI / wid;
            const cplx z = ph.value();
            const double ct = z.real(), st = -z.imag();
            const double Vk = 2.0 * F / (wid * (1.0 + e * e)) * (ea - ct * ex - e * st * ex)
                            + 2.0 * F / (wid * e) * st * ex;
            sum.add(cc.w[k] * Vk);
            ph.advance();
        }
        out.puts[j] = market.discount * sum.get();
    }
    return out;
}

inline PriceBatch price_puts_classic_alt(const ModelParams& model, const MarketInputs& market,
                                         const TruncationRange& range, const StrikeBatch& batch) {
    return price_puts_classic_alt_cached(classic_alt_coefficients(model, market, range), market, batch);
}

// C_j = P_j + B (F - K_j)
inline PriceBatch parity_calls(const PriceBatch& puts, const MarketInputs& market,
                               const StrikeBatch& batch) {
    PriceBatch out = puts;
    out.calls.assign(batch.strikes.size(), std::numeric_limits<double>::quiet_NaN());
    for (size_t j = 0; j < batch.strikes.size(); ++j) {
        if (!out.valid[j]) continue;
        out.calls[j] = out.puts[j] + market.discount * (market.forward - batch.strikes[j]);
    }
    return out;
}

}  // namespace cosfft
