#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "models.hpp"

namespace cosfft {

class DegenerateRangeError : public std::domain_error {
public:
    DegenerateRangeError() : std::domain_error("truncation range is degenerate: c2 = c4 = 0") {}
};

struct TruncationRange {
    double a = 0.0;
    double b = 0.0;
    int M = 0;
    double L = 0.0;
    Cumulants cumulants;

    double width() const { return b - a; }
    double eta(int k) const { return k * M_PI / (b - a); }
};

enum class PayoffKind { PutClassic };

struct PayoffCoefficients {
    std::vector<double> values;  // U_k, k = 0..M-1
    PayoffKind kind = PayoffKind::PutClassic;
};

// [a, b] = c1 -+ L*sqrt(|c2| + sqrt(|c4|))
inline TruncationRange truncation_range(const Cumulants& c, double L, int M) {
    if (!(L > 0.0)) throw ParameterError("L", "must be positive");
    if (M < 2) throw ParameterError("M", "must be at least 2");
    const double half = L * std::sqrt(std::fabs(c.c2) + std::sqrt(std::fabs(c.c4)));
    if (!(half > 0.0)) throw DegenerateRangeError();
    return {c.c1 - half, c.c1 + half, M, L, c};
}

// U_k^Put of Eq. 4/5: cosine coefficients of the strike-factored put payoff.
inline PayoffCoefficients put_coefficients(const TruncationRange& r) {
    const double a = r.a, w = r.b - r.a;
    PayoffCoefficients out;
    out.values.resize(r.M);
    const double ea = std::exp(a);
    out.values[0] = (2.0 / w) * (ea - 1.0 - a);
    for (int k = 1; k < r.M; ++k) {
        const double e = k * M_PI / w;
        const double sa = std::sin(e * a), ca = std::cos(e * a);
        out.values[k] = (2.0 / w) * ((ea + e * sa - ca) / (1.0 + e * e) - sa / e);
    }
    return out;
}

struct VkSplitTerms {
    // factors[k] = (-1 - i eta_k)/((b-a)(1+eta_k^2)) + i/((b-a) eta_k), k >= 1
    // (factors[0] unused and set to 0, matching f_0 = 0 in the alt spectrum)
    std::vector<cplx> factors;
    // residual[0] = e^a/(b-a); residual[k] = 2 e^a/((b-a)(1+eta_k^2)) for k >= 1
    std::vector<double> residual;
};

inline VkSplitTerms vk_split_terms(const TruncationRange& r) {
    const double a = r.a, w = r.b - r.a;
    const double ea = std::exp(a);
    VkSplitTerms out;
    out.factors.assign(r.M, cplx(0.0, 0.0));
    out.residual.resize(r.M);
    out.residual[0] = ea / w;
    for (int k = 1; k < r.M; ++k) {
        const double e = k * M_PI / w;
        const double d = w * (1.0 + e * e);
        out.factors[k] = cplx(-1.0 / d, -e / d) + cplx(0.0, 1.0 / (w * e));
        out.residual[k] = 2.0 * ea / d;
    }
    return out;
}

// Density reconstruction weights: the plain Fourier-cosine factor 2/(b-a).
inline std::vector<double> density_coefficients(const TruncationRange& r) {
    return std::vector<double>(r.M, 2.0 / (r.b - r.a));
}

}  // namespace cosfft
