#pragma once

#include <cmath>
#include <complex>

namespace cosfft {

// Compensated (Kahan) accumulator; keeps long pricing sums accurate to a few
// ulps independent of term count.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double get() const { return s; }
};

namespace detail {

// Veltkamp split: c = hi + lo with hi carrying the top 26 mantissa bits, so
// that k*hi is exact for integer k up to 2^26.
inline void veltkamp_split(double c, double& hi, double& lo) {
    const double f = 134217729.0;  // 2^27 + 1
    const double t = f * c;
    hi = t - (t - c);
    lo = c - hi;
}

inline double round_nearest(double x) { return std::nearbyint(x); }

}  // namespace detail

// Generates e^{s*2*pi*i*k*c} for k = 0, 1, 2, ... (s = +1 or -1) by a complex
// step recurrence that is re-anchored every `anchor` steps from an exactly
// range-reduced angle, so the phase stays accurate to a few ulps for k up to
// ~2^26 instead of drifting linearly with k.
class PhaseIterator {
public:
    PhaseIterator(double cycles_per_step, int sign, int anchor = 32)
        : sign_(sign > 0 ? 1.0 : -1.0), anchor_(anchor) {
        // pre-wrap: only frac(c) matters for integer k
        c_ = cycles_per_step - detail::round_nearest(cycles_per_step);
        detail::veltkamp_split(c_, chi_, clo_);
        const double ang = sign_ * 2.0 * M_PI * c_;
        step_ = std::complex<double>(std::cos(ang), std::sin(ang));
        k_ = 0;
        cur_ = {1.0, 0.0};
    }

    std::complex<double> value() const { return cur_; }

    void advance() {
        ++k_;
        if (k_ % anchor_ == 0)
            cur_ = at(k_);
        else
            cur_ *= step_;
    }

    // exact-split evaluation of e^{s*2*pi*i*k*c}
    std::complex<double> at(long long k) const {
        const double kd = static_cast<double>(k);
        const double p1 = kd * chi_;  // exact for |k| < 2^26
        double f = p1 - detail::round_nearest(p1);
        f += kd * clo_;
        f -= detail::round_nearest(f);
        const double ang = sign_ * 2.0 * M_PI * f;
        return {std::cos(ang), std::sin(ang)};
    }

private:
    double c_, chi_, clo_, sign_;
    std::complex<double> step_, cur_;
    int anchor_;
    long long k_;
};

}  // namespace cosfft
