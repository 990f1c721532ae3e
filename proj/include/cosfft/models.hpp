#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace cosfft {

using cplx = std::complex<double>;

struct BlackScholesParams {
    double sigma;  // volatility, per sqrt(year)
};

struct VarianceGammaParams {
    double theta;  // drift of the Brownian motion, per year
    double nu;     // variance rate of the gamma clock, years
    double sigma;  // volatility of the Brownian motion, per sqrt(year)
};

struct HestonParams {
    double kappa;  // mean-reversion speed, per year
    double theta;  // long-run variance
    double sigma;  // vol-of-vol, per sqrt(year)
    double v0;     // initial variance
    double rho;    // correlation, in (-1, 1)
};

using ModelParams = std::variant<BlackScholesParams, VarianceGammaParams, HestonParams>;

struct MarketInputs {
    double forward;   // F(0,T)
    double discount;  // B(T), in (0, 1]
    double maturity;  // T, years
};

struct Cumulants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c4 = 0.0;
};

inline void validate(const BlackScholesParams& p) {
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw ParameterError("sigma", "must be positive");
}

inline void validate(const VarianceGammaParams& p) {
    if (!(p.nu > 0.0) || !std::isfinite(p.nu))
        throw ParameterError("nu", "must be positive");
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw ParameterError("sigma", "must be positive");
    if (!std::isfinite(p.theta))
        throw ParameterError("theta", "must be finite");
    // argument of the martingale-correction log must stay positive
    if (!(1.0 - p.theta * p.nu - 0.5 * p.sigma * p.sigma * p.nu > 0.0))
        throw ParameterError("theta", "1 - theta*nu - sigma^2*nu/2 must be positive");
}

inline void validate(const HestonParams& p) {
    if (!(p.kappa > 0.0) || !std::isfinite(p.kappa))
        throw ParameterError("kappa", "must be positive");
    if (!(p.theta > 0.0) || !std::isfinite(p.theta))
        throw ParameterError("theta", "must be positive");
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw ParameterError("sigma", "must be positive");
    if (!(p.v0 >= 0.0) || !std::isfinite(p.v0))
        throw ParameterError("v0", "must be non-negative");
    if (!(p.rho > -1.0 && p.rho < 1.0))
        throw ParameterError("rho", "must lie in (-1, 1)");
}

inline void validate(const ModelParams& model) {
    std::visit([](const auto& p) { validate(p); }, model);
}

inline void validate(const MarketInputs& m) {
    if (!(m.forward > 0.0) || !std::isfinite(m.forward))
        throw ParameterError("forward", "must be positive");
    if (!(m.discount > 0.0 && m.discount <= 1.0))
        throw ParameterError("discount", "must lie in (0, 1]");
    if (!(m.maturity > 0.0) || !std::isfinite(m.maturity))
        throw ParameterError("maturity", "must be positive");
}

namespace detail {

inline cplx cf_bs(const BlackScholesParams& p, double T, double z) {
    const cplx iz(0.0, z);
    return std::exp(-0.5 * p.sigma * p.sigma * T * (cplx(z * z, 0.0) + iz));
}

inline cplx cf_vg(const VarianceGammaParams& p, double T, double z) {
    const double s2n = p.sigma * p.sigma * p.nu;
    const cplx c(1.0 + 0.5 * s2n * z * z, -p.theta * p.nu * z);
    const double omega = std::log(1.0 - p.theta * p.nu - 0.5 * s2n) / p.nu;
    return std::exp(-(T / p.nu) * std::log(c) + cplx(0.0, z * omega * T));
}

// G-formulation of the Heston characteristic function: branch-stable with the
// principal complex log and sqrt, no rotation-count correction needed.
inline cplx cf_heston(const HestonParams& p, double T, double z) {
    const cplx i(0.0, 1.0);
    const double s2 = p.sigma * p.sigma;
    const cplx beta = p.kappa - i * (p.rho * p.sigma * z);
    const cplx D = std::sqrt(beta * beta + (cplx(z * z, 0.0) + i * z) * s2);
    const cplx G = (beta - D) / (beta + D);
    const cplx E = std::exp(-D * T);
    const cplx t1 = (p.v0 / s2) * (beta - D) * (1.0 - E) / (1.0 - G * E);
    const cplx t2 = (p.kappa * p.theta / s2) * ((beta - D) * T - 2.0 * std::log((1.0 - G * E) / (1.0 - G)));
    return std::exp(t1 + t2);
}

}  // namespace detail

// phi(z) = E[exp(i z ln(F(T,T)/F(0,T)))], the normalized characteristic
// function of the log forward return.
inline cplx charfn_eval(const ModelParams& model, double maturity, double z) {
    validate(model);
    if (!std::isfinite(z)) throw ParameterError("z", "must be finite");
    return std::visit(
        [&](const auto& p) -> cplx {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, BlackScholesParams>)
                return detail::cf_bs(p, maturity, z);
            else if constexpr (std::is_same_v<P, VarianceGammaParams>)
                return detail::cf_vg(p, maturity, z);
            else
                return detail::cf_heston(p, maturity, z);
        },
        model);
}

inline std::vector<cplx> charfn_eval_batch(const ModelParams& model, double maturity,
                                           const std::vector<double>& zs) {
    validate(model);
    std::vector<cplx> out(zs.size());
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            for (size_t i = 0; i < zs.size(); ++i) {
                if (!std::isfinite(zs[i])) throw ParameterError("z", "must be finite");
                if constexpr (std::is_same_v<P, BlackScholesParams>)
                    out[i] = detail::cf_bs(p, maturity, zs[i]);
                else if constexpr (std::is_same_v<P, VarianceGammaParams>)
                    out[i] = detail::cf_vg(p, maturity, zs[i]);
                else
                    out[i] = detail::cf_heston(p, maturity, zs[i]);
            }
        },
        model);
    return out;
}

// Analytic cumulants of ln(F(T,T)/F(0,T)). BS and Heston use the first two
// cumulants only (c4 = 0); VG has a closed-form fourth cumulant.
inline Cumulants cumulants(const ModelParams& model, double maturity) {
    validate(model);
    const double T = maturity;
    return std::visit(
        [&](const auto& p) -> Cumulants {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, BlackScholesParams>) {
                const double v = p.sigma * p.sigma * T;
                return {-0.5 * v, v, 0.0};
            } else if constexpr (std::is_same_v<P, VarianceGammaParams>) {
                const double th = p.theta, nu = p.nu, s2 = p.sigma * p.sigma;
                const double omega = std::log(1.0 - th * nu - 0.5 * s2 * nu) / nu;
                const double c1 = (omega + th) * T;
                const double c2 = (s2 + nu * th * th) * T;
                const double c4 = 3.0 * (s2 * s2 * nu + 4.0 * s2 * th * th * nu * nu +
                                         2.0 * th * th * th * th * nu * nu * nu) * T;
                return {c1, c2, c4};
            } else {
                // c2 derived symbolically from the series of ln phi at z = 0;
                // note it differs from the often-quoted Fang-Oosterlee form by
                // sigma^2*theta*(1-E)/(4 kappa^3).
                const double k = p.kappa, th = p.theta, s = p.sigma, v0 = p.v0, r = p.rho;
                const double E = std::exp(-k * T);
                const double c1 = -0.5 * (th * T + (v0 - th) * (1.0 - E) / k);
                const double c2 =
                    th * T + (v0 - th) * (1.0 - E) / k
                    + (r * s / k) * T * (E * (v0 - th) - th)
                    + (r * s / (k * k)) * (1.0 - E) * (2.0 * th - v0)
                    + (s * s / (k * k)) * T * (0.25 * th + 0.5 * E * (th - v0))
                    + (s * s / (8.0 * k * k * k)) *
                          (th * E * E - 2.0 * v0 * E * E + 4.0 * th * E - 5.0 * th + 2.0 * v0);
                return {c1, c2, 0.0};
            }
        },
        model);
}

}  // namespace cosfft
