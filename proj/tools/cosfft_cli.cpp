// Command-line frontend: price option batches from a JSON config, reconstruct
// log-return densities, and run the benchmark suite.
#include <cosfft/cosfft.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;
using namespace cosfft;

constexpr int kSchemaVersion = 1;

struct RunConfig {
    ModelParams model = BlackScholesParams{0.2};
    std::string model_name = "bs";
    bool market_is_spot = false;
    double spot = 0.0, rate = 0.0, dividend = 0.0;
    MarketInputs market{100.0, 1.0, 1.0};
    double L = 8.0;
    int M = 256;
    std::string formula = "classic";  // classic | alt
    std::string backend = "direct";   // direct | nufft
    double tolerance = 1e-9;
    std::vector<double> strikes;
    ordered_json strikes_spec;  // as loaded, for the effective-config dump
    std::vector<double> density_points;
    ordered_json density_spec;
};

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string locate(const std::string& path, const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return path + ":" + std::to_string(line) + ":" + std::to_string(col);
}

const ordered_json& require(const ordered_json& j, const std::string& key,
                            const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where + "." + key + ": required field is missing");
    return *it;
}

double num(const ordered_json& j, const std::string& key, const std::string& where) {
    const ordered_json& v = require(j, key, where);
    if (!v.is_number()) fail(where + "." + key + ": must be a number");
    return v.get<double>();
}

double num_or(const ordered_json& j, const std::string& key, double dflt,
              const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_number()) fail(where + "." + key + ": must be a number");
    return it->get<double>();
}

std::vector<double> grid_from_json(const ordered_json& spec, const std::string& where) {
    std::vector<double> out;
    if (spec.is_array()) {
        for (const auto& v : spec) {
            if (!v.is_number()) fail(where + ": list entries must be numbers");
            out.push_back(v.get<double>());
        }
        return out;
    }
    if (!spec.is_object()) fail(where + ": must be a list of numbers or {min,max,count[,spacing]}");
    const double lo = num(spec, "min", where);
    const double hi = num(spec, "max", where);
    const double cd = num(spec, "count", where);
    const int count = static_cast<int>(cd);
    if (count < 1 || count != cd) fail(where + ".count: must be a positive integer");
    std::string spacing = "linear";
    if (auto it = spec.find("spacing"); it != spec.end()) spacing = it->get<std::string>();
    if (spacing != "linear" && spacing != "log")
        fail(where + ".spacing: must be 'linear' or 'log'");
    if (count == 1) {
        out.push_back(0.5 * (lo + hi));
        return out;
    }
    if (spacing == "log") {
        if (!(lo > 0.0)) fail(where + ".min: must be positive for log spacing");
        const double l0 = std::log(lo), l1 = std::log(hi);
        for (int i = 0; i < count; ++i) out.push_back(std::exp(l0 + (l1 - l0) * i / (count - 1)));
    } else {
        for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
    }
    return out;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail("cannot read config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    const std::string text = ss.str();

    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(locate(path, text, e.byte) + ": " + e.what());
    }

    RunConfig cfg;
    const double version = num(j, "schema_version", "config");
    if (version != kSchemaVersion)
        fail("config.schema_version: expected " + std::to_string(kSchemaVersion));

    const ordered_json& jm = require(j, "model", "config");
    cfg.model_name = require(jm, "name", "model").get<std::string>();
    if (cfg.model_name == "bs") {
        cfg.model = BlackScholesParams{num(jm, "sigma", "model")};
    } else if (cfg.model_name == "vg") {
        cfg.model = VarianceGammaParams{num(jm, "theta", "model"), num(jm, "nu", "model"),
                                        num(jm, "sigma", "model")};
    } else if (cfg.model_name == "heston") {
        cfg.model = HestonParams{num(jm, "kappa", "model"), num(jm, "theta", "model"),
                                 num(jm, "sigma", "model"), num(jm, "v0", "model"),
                                 num(jm, "rho", "model")};
    } else {
        fail("model.name: unknown model '" + cfg.model_name + "' (expected bs, vg or heston)");
    }

    const double T = num(j, "maturity", "config");
    const ordered_json& jk = require(j, "market", "config");
    const bool has_fwd = jk.contains("forward") || jk.contains("discount");
    const bool has_spot = jk.contains("spot") || jk.contains("rate") || jk.contains("dividend");
    if (has_fwd == has_spot)
        fail("market: provide exactly one of {forward, discount} or {spot, rate, dividend}");
    if (has_fwd) {
        cfg.market = MarketInputs{num(jk, "forward", "market"), num(jk, "discount", "market"), T};
    } else {
        cfg.market_is_spot = true;
        cfg.spot = num(jk, "spot", "market");
        cfg.rate = num_or(jk, "rate", 0.0, "market");
        cfg.dividend = num_or(jk, "dividend", 0.0, "market");
        cfg.market = MarketInputs{cfg.spot * std::exp((cfg.rate - cfg.dividend) * T),
                                  std::exp(-cfg.rate * T), T};
    }

    const ordered_json& jc = require(j, "cos", "config");
    cfg.L = num(jc, "L", "cos");
    const double md = num(jc, "M", "cos");
    cfg.M = static_cast<int>(md);
    if (cfg.M != md) fail("cos.M: must be an integer");
    if (auto it = jc.find("formula"); it != jc.end()) cfg.formula = it->get<std::string>();
    if (auto it = jc.find("backend"); it != jc.end()) cfg.backend = it->get<std::string>();
    cfg.tolerance = num_or(jc, "tolerance", 1e-9, "cos");
    if (cfg.formula != "classic" && cfg.formula != "alt")
        fail("cos.formula: must be 'classic' or 'alt'");
    if (cfg.backend != "direct" && cfg.backend != "nufft")
        fail("cos.backend: must be 'direct' or 'nufft'");

    if (auto it = j.find("strikes"); it != j.end()) {
        cfg.strikes_spec = *it;
        cfg.strikes = grid_from_json(*it, "strikes");
    }
    if (auto it = j.find("density_points"); it != j.end()) {
        cfg.density_spec = *it;
        cfg.density_points = grid_from_json(*it, "density_points");
    }
    return cfg;
}

ordered_json effective_config(const RunConfig& cfg) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    ordered_json jm;
    jm["name"] = cfg.model_name;
    if (const auto* bs = std::get_if<BlackScholesParams>(&cfg.model)) {
        jm["sigma"] = bs->sigma;
    } else if (const auto* vg = std::get_if<VarianceGammaParams>(&cfg.model)) {
        jm["theta"] = vg->theta;
        jm["nu"] = vg->nu;
        jm["sigma"] = vg->sigma;
    } else if (const auto* h = std::get_if<HestonParams>(&cfg.model)) {
        jm["kappa"] = h->kappa;
        jm["theta"] = h->theta;
        jm["sigma"] = h->sigma;
        jm["v0"] = h->v0;
        jm["rho"] = h->rho;
    }
    j["model"] = jm;
    ordered_json jk;
    if (cfg.market_is_spot) {
        jk["spot"] = cfg.spot;
        jk["rate"] = cfg.rate;
        jk["dividend"] = cfg.dividend;
    } else {
        jk["forward"] = cfg.market.forward;
        jk["discount"] = cfg.market.discount;
    }
    j["market"] = jk;
    j["maturity"] = cfg.market.maturity;
    ordered_json jc;
    jc["L"] = cfg.L;
    jc["M"] = cfg.M;
    jc["formula"] = cfg.formula;
    jc["backend"] = cfg.backend;
    jc["tolerance"] = cfg.tolerance;
    j["cos"] = jc;
    if (!cfg.strikes_spec.is_null()) j["strikes"] = cfg.strikes_spec;
    if (!cfg.density_spec.is_null()) j["density_points"] = cfg.density_spec;
    return j;
}

std::string default_out(const std::string& flag_value, const std::string& filename) {
    if (!flag_value.empty()) return flag_value;
    const char* dir = std::getenv("COSFFT_OUT_DIR");
    return std::string(dir && *dir ? dir : ".") + "/" + filename;
}

void dump_config_if_requested(const RunConfig& cfg, const std::string& dump_path) {
    if (dump_path.empty()) return;
    std::ofstream os(dump_path);
    if (!os) fail("cannot write " + dump_path);
    os << effective_config(cfg).dump(2) << '\n';
}

PriceBatch price_with(const RunConfig& cfg, const TruncationRange& range,
                      const StrikeBatch& batch) {
    if (cfg.backend == "direct") {
        return cfg.formula == "classic"
                   ? price_puts_classic(cfg.model, cfg.market, range, batch)
                   : price_puts_classic_alt(cfg.model, cfg.market, range, batch);
    }
    const SpectralCoefficients sc = cfg.formula == "classic"
                                        ? assemble_classic(cfg.model, cfg.market, range, range.M)
                                        : assemble_alt(cfg.model, cfg.market, range, range.M);
    return price_puts_nufft(sc, cfg.market, batch, cfg.tolerance);
}

int cmd_price(const RunConfig& cfg, const std::string& out_path) {
    validate(cfg.model);
    validate(cfg.market);
    if (cfg.strikes.empty()) fail("strikes: no strikes configured");
    const Cumulants cum = cumulants(cfg.model, cfg.market.maturity);
    const TruncationRange range = truncation_range(cum, cfg.L, cfg.M);
    const StrikeBatch batch = make_strike_batch(cfg.strikes, cfg.market, range);
    bool any_valid = false;
    for (char v : batch.valid) any_valid |= (v != 0);
    if (!any_valid)
        fail("strikes: every strike falls outside the truncation range (" +
             format_g17(range.a) + ", " + format_g17(range.b) + ")");

    const PriceBatch puts = price_with(cfg, range, batch);
    const PriceBatch priced = parity_calls(puts, cfg.market, batch);

    std::ofstream os(out_path);
    if (!os) fail("cannot write " + out_path);
    os << "strike,put,call,valid,backend\n";
    for (size_t jx = 0; jx < cfg.strikes.size(); ++jx)
        os << format_g17(cfg.strikes[jx]) << ',' << format_g17(priced.puts[jx]) << ','
           << format_g17(priced.calls[jx]) << ',' << int(priced.valid[jx]) << ','
           << backend_name(priced.backend) << '\n';
    if (!os) fail("write failed: " + out_path);
    return 0;
}

int cmd_density(const RunConfig& cfg, const std::string& out_path) {
    validate(cfg.model);
    validate(cfg.market);
    std::ofstream os(out_path);
    if (!os) fail("cannot write " + out_path);
    os << "x,density,valid\n";
    if (!cfg.density_points.empty()) {
        const Cumulants cum = cumulants(cfg.model, cfg.market.maturity);
        const TruncationRange range = truncation_range(cum, cfg.L, cfg.M);
        const DensityResult den =
            cfg.backend == "nufft"
                ? density_nufft(cfg.model, cfg.market, range, cfg.density_points, cfg.tolerance)
                : density_direct(cfg.model, cfg.market, range, cfg.density_points);
        for (size_t jx = 0; jx < den.points.size(); ++jx)
            os << format_g17(den.points[jx]) << ',' << format_g17(den.values[jx]) << ','
               << int(den.valid[jx]) << '\n';
    }
    if (!os) fail("write failed: " + out_path);
    return 0;
}

int cmd_bench(const std::vector<std::string>& case_names, const std::string& suite,
              const std::vector<int>& strike_filter, const std::string& out_dir,
              const std::string& format, int warmups, int reps, unsigned seed,
              bool randomize_strikes, std::optional<double> tolerance_override,
              bool list_only) {
    std::vector<BenchCase> registry = bench_registry();
    if (list_only) {
        for (const auto& c : registry)
            std::printf("%-12s M=%-6d L=%-4g maturity=%g\n", c.name.c_str(), c.M, c.L,
                        c.maturity);
        return 0;
    }
    std::vector<BenchCase> selected;
    if (!case_names.empty()) {
        for (const auto& want : case_names) {
            bool found = false;
            for (const auto& c : registry)
                if (c.name == want) {
                    selected.push_back(c);
                    found = true;
                }
            if (!found) {
                std::string names;
                for (const auto& c : registry) names += (names.empty() ? "" : ", ") + c.name;
                fail("unknown case '" + want + "' (available: " + names + ")");
            }
        }
    } else if (suite == "paper") {
        selected = registry;
    } else {
        fail("unknown suite '" + suite + "' (available: paper)");
    }

    BenchResult all;
    for (BenchCase c : selected) {
        if (tolerance_override) c.tolerance = *tolerance_override;
        if (randomize_strikes) {
            c.randomize = true;
            c.seed = seed;
        }
        ReferenceSpec ref;
        if (std::holds_alternative<BlackScholesParams>(c.model))
            ref.kind = ReferenceSpec::Kind::ClosedForm;
        std::vector<int> counts = strike_filter;
        if (counts.empty()) counts = c.strike_counts;
        std::vector<int> acc_counts{*std::max_element(counts.begin(), counts.end())};
        merge(all, run_accuracy(c, ref, acc_counts));
        merge(all, run_throughput(c, warmups, reps, counts));
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);  // emit reports the failure if any
    emit_report(all, out_dir, format);
    std::printf("wrote %s/report.{csv,json} (%zu accuracy rows, %zu throughput rows)\n",
                out_dir.c_str(), all.accuracy.size(), all.throughput.size());
    if (!all_accuracy_assertions_pass(all)) {
        std::fprintf(stderr, "error: accuracy assertions failed\n");
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch European option pricing with the COS method (classic and NUFFT-"
                 "accelerated backends)"};
    app.require_subcommand(1);

    std::string config_path, out_flag, dump_path;
    std::string backend_flag, formula_flag;
    std::optional<double> tolerance_flag;
    int threads = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_flag, "output file (default: $COSFFT_OUT_DIR or .)");
        sub->add_option("--backend", backend_flag, "override cos.backend (direct|nufft)");
        sub->add_option("--formula", formula_flag, "override cos.formula (classic|alt)");
        sub->add_option("--tolerance", tolerance_flag, "override cos.tolerance");
        sub->add_option("--threads", threads, "worker threads (current backends run one)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--dump-config", dump_path, "write the effective config to this path");
    };

    CLI::App* price = app.add_subcommand("price", "price a strike batch to CSV");
    add_common(price);
    CLI::App* density = app.add_subcommand("density", "reconstruct the log-return density");
    add_common(density);

    CLI::App* bench = app.add_subcommand("bench", "run benchmark cases and emit reports");
    std::vector<std::string> case_names;
    std::string suite = "paper", bench_out, bench_format = "both";
    std::vector<int> strike_filter;
    int warmups = 3, reps = 20;
    unsigned seed = 0;
    bool randomize = false, list_only = false;
    bench->add_option("--cases", case_names, "case names (default: whole suite)");
    bench->add_option("--suite", suite, "suite name (paper)");
    bench->add_option("--strikes", strike_filter, "strike counts to run");
    bench->add_option("--out", bench_out, "output directory");
    bench->add_option("--format", bench_format, "report format: csv|json|both");
    bench->add_option("--warmups", warmups, "warm-up runs per timing (>=3)");
    bench->add_option("--reps", reps, "timed repetitions per timing (>=20)");
    bench->add_option("--seed", seed, "seed for randomized strike grids");
    bench->add_flag("--randomize-strikes", randomize, "draw strike grids at random (seeded)");
    bench->add_option("--tolerance", tolerance_flag, "NUFFT tolerance for nufft backends");
    bench->add_flag("--list", list_only, "print the case registry and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            std::string dir = bench_out;
            if (dir.empty()) {
                const char* env = std::getenv("COSFFT_OUT_DIR");
                dir = env && *env ? env : ".";
            }
            return cmd_bench(case_names, suite, strike_filter, dir, bench_format, warmups, reps,
                             seed, randomize, tolerance_flag, list_only);
        }
        RunConfig cfg = load_config(config_path);
        if (!backend_flag.empty()) {
            if (backend_flag != "direct" && backend_flag != "nufft")
                fail("--backend: must be 'direct' or 'nufft'");
            cfg.backend = backend_flag;
        }
        if (!formula_flag.empty()) {
            if (formula_flag != "classic" && formula_flag != "alt")
                fail("--formula: must be 'classic' or 'alt'");
            cfg.formula = formula_flag;
        }
        if (tolerance_flag) cfg.tolerance = *tolerance_flag;
        (void)threads;  // batches are embarrassingly parallel; backends run single-threaded
        dump_config_if_requested(cfg, dump_path);
        if (price->parsed()) return cmd_price(cfg, default_out(out_flag, "price.csv"));
        return cmd_density(cfg, default_out(out_flag, "density.csv"));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
