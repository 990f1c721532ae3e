// Minimal end-to-end walkthrough: one variance-gamma maturity, a strike grid,
// all four pricing backends, and a density slice. Build target: cosfft_demo.
#include <cosfft/cosfft.hpp>

#include <cstdio>

int main() {
    using namespace cosfft;

    const ModelParams model = VarianceGammaParams{-0.1436, 0.3, 0.12136};
    const double spot = 100.0, rate = 0.1, maturity = 1.0;
    const MarketInputs market{spot * std::exp(rate * maturity), std::exp(-rate * maturity),
                              maturity};

    const Cumulants cum = cumulants(model, market.maturity);
    const TruncationRange range = truncation_range(cum, 10.0, 128);
    std::printf("truncation range: [%.6f, %.6f], M=%d\n", range.a, range.b, range.M);

    std::vector<double> strikes;
    for (int i = 0; i < 9; ++i) strikes.push_back(60.0 + 10.0 * i);
    const StrikeBatch batch = make_strike_batch(strikes, market, range);

    const PriceBatch classic = parity_calls(price_puts_classic(model, market, range, batch),
                                            market, batch);
    const PriceBatch alt = price_puts_classic_alt(model, market, range, batch);
    const PriceBatch nufft =
        price_puts_nufft(assemble_classic(model, market, range, range.M), market, batch, 1e-12);
    const PriceBatch nufft_alt =
        price_puts_nufft(assemble_alt(model, market, range, range.M), market, batch, 1e-12);

    std::printf("\n%8s %14s %14s %14s %14s %14s\n", "strike", "put(classic)", "call(classic)",
                "put(alt)", "put(nufft)", "put(nufft-alt)");
    for (size_t j = 0; j < strikes.size(); ++j)
        std::printf("%8.2f %14.9f %14.9f %14.9f %14.9f %14.9f\n", strikes[j], classic.puts[j],
                    classic.calls[j], alt.puts[j], nufft.puts[j], nufft_alt.puts[j]);

    std::vector<double> xs;
    for (int i = -4; i <= 4; ++i) xs.push_back(cum.c1 + 0.1 * i);
    const DensityResult den = density_nufft(model, market, range, xs, 1e-12);
    std::printf("\nlog-return density around c1=%.6f:\n", cum.c1);
    for (size_t j = 0; j < xs.size(); ++j)
        std::printf("  f(%9.6f) = %.9f\n", xs[j], den.values[j]);
    return 0;
}
