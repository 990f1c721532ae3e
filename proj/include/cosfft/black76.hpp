#pragma once

#include <cmath>

namespace cosfft {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Undiscounted-forward Black (1976) put: B(K Phi(-d2) - F Phi(-d1)).
inline double black76_put(double forward, double discount, double strike, double sigma,
                          double maturity) {
    const double sd = sigma * std::sqrt(maturity);
    if (sd <= 0.0) {
        const double intrinsic = strike - forward;
        return discount * (intrinsic > 0.0 ? intrinsic : 0.0);
    }
    const double d1 = (std::log(forward / strike) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    return discount * (strike * norm_cdf(-d2) - forward * norm_cdf(-d1));
}

}  // namespace cosfft
