#include <catch2/catch_amalgamated.hpp>

#include <cosfft/cosfft.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace cosfft;
using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d("cli_work");
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) return {};
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    REQUIRE(os);
    os << text;
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path outp = work_dir() / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path errp = work_dir() / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(COSFFT_CLI_PATH) + " " + args + " >" + outp.string() +
                            " 2>" + errp.string();
    const int rc = std::system(cmd.c_str());
    CliResult r;
    if (rc != -1 && WIFEXITED(rc)) r.code = WEXITSTATUS(rc);
    r.out = slurp(outp);
    r.err = slurp(errp);
    return r;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p, const std::string& header) {
    const std::string text = slurp(p);
    REQUIRE(text.rfind(header + "\n", 0) == 0);
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);  // header
    while (std::getline(ss, line))
        if (!line.empty()) rows.push_back(split(line, ','));
    return rows;
}

double parse(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

const char* kBsConfig = R"({
  "schema_version": 1,
  "model": {"name": "bs", "sigma": 0.2},
  "market": {"forward": 100.0, "discount": 1.0},
  "maturity": 1.0,
  "cos": {"L": 8.0, "M": 256},
  "strikes": [100.0],
  "density_points": [-0.02]
})";

const char* kVgConfig = R"({
  "schema_version": 1,
  "model": {"name": "vg", "theta": -0.1436, "nu": 0.3, "sigma": 0.12136},
  "market": {"spot": 100.0, "rate": 0.1},
  "maturity": 1.0,
  "cos": {"L": 10.0, "M": 128},
  "strikes": {"min": 60.0, "max": 140.0, "count": 100}
})";

}  // namespace

TEST_CASE("price run writes parity-consistent rows", "[cli]") {
    const fs::path cfg = work_dir() / "bs.json";
    spit(cfg, kBsConfig);
    const fs::path out = work_dir() / "bs_price.csv";
    const CliResult r = run_cli("price --config " + cfg.string() + " --out " + out.string());
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    const auto rows = read_csv(out, "strike,put,call,valid,backend");
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].size() == 5);
    CHECK(parse(rows[0][0]) == 100.0);
    CHECK(rows[0][1] == rows[0][2]);  // K = F: call equals put bit-for-bit
    CHECK(parse(rows[0][1]) == Catch::Approx(7.96557).margin(5e-6));
    CHECK(rows[0][3] == "1");
    CHECK(rows[0][4] == "classic");
}

TEST_CASE("price output round-trips to the in-process library prices", "[cli]") {
    const fs::path cfg = work_dir() / "vg1.json";
    spit(cfg, kVgConfig);
    const fs::path out = work_dir() / "vg1_price.csv";
    const CliResult r = run_cli("price --config " + cfg.string() + " --out " + out.string());
    CAPTURE(r.err);
    REQUIRE(r.code == 0);

    // same market and grid arithmetic as the frontend
    const double T = 1.0;
    const MarketInputs market{100.0 * std::exp((0.1 - 0.0) * T), std::exp(-0.1 * T), T};
    std::vector<double> strikes(100);
    for (int i = 0; i < 100; ++i) strikes[size_t(i)] = 60.0 + (140.0 - 60.0) * i / (100 - 1);
    const ModelParams model = VarianceGammaParams{-0.1436, 0.3, 0.12136};
    const TruncationRange range = truncation_range(cumulants(model, T), 10.0, 128);
    const StrikeBatch batch = make_strike_batch(strikes, market, range);
    const PriceBatch puts = price_puts_classic(model, market, range, batch);
    const PriceBatch priced = parity_calls(puts, market, batch);

    const auto rows = read_csv(out, "strike,put,call,valid,backend");
    REQUIRE(rows.size() == 100);
    for (size_t j = 0; j < rows.size(); ++j) {
        CHECK(parse(rows[j][0]) == strikes[j]);
        CHECK(parse(rows[j][1]) == priced.puts[j]);  // %.17g round-trip is exact
        CHECK(parse(rows[j][2]) == priced.calls[j]);
        CHECK(rows[j][3] == (batch.valid[j] ? "1" : "0"));
        CHECK(rows[j][4] == "classic");
    }
}

TEST_CASE("invalid model parameters surface the offending field", "[cli]") {
    const fs::path cfg = work_dir() / "vg_bad.json";
    std::string text = kVgConfig;
    text.replace(text.find("\"nu\": 0.3"), 9, "\"nu\": -0.3");
    spit(cfg, text);
    const CliResult r = run_cli("price --config " + cfg.string() + " --out " +
                                (work_dir() / "never.csv").string());
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("error: "));
    CHECK_THAT(r.err, ContainsSubstring("nu"));
}

TEST_CASE("malformed JSON is located by line and column", "[cli]") {
    const fs::path cfg = work_dir() / "bad.json";
    spit(cfg, "{\"schema_version\": 1,,}\n");
    const CliResult r = run_cli("price --config " + cfg.string());
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("error: "));
    CHECK_THAT(r.err, ContainsSubstring("bad.json:1:"));
}

TEST_CASE("an all-invalid strike batch is rejected loudly", "[cli]") {
    const fs::path cfg = work_dir() / "bs_far.json";
    std::string text = kBsConfig;
    text.replace(text.find("[100.0]"), 7, "[1000000.0]");
    spit(cfg, text);
    const CliResult r = run_cli("price --config " + cfg.string() + " --out " +
                                (work_dir() / "never2.csv").string());
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("outside the truncation range"));
}

TEST_CASE("density with no points still writes the header", "[cli]") {
    const fs::path cfg = work_dir() / "bs_nopoints.json";
    std::string text = kBsConfig;
    const size_t pos = text.find(",\n  \"density_points\": [-0.02]");
    REQUIRE(pos != std::string::npos);
    text.erase(pos, std::string(",\n  \"density_points\": [-0.02]").size());
    spit(cfg, text);
    const fs::path out = work_dir() / "dens_empty.csv";
    const CliResult r = run_cli("density --config " + cfg.string() + " --out " + out.string());
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    CHECK(slurp(out) == "x,density,valid\n");
}

TEST_CASE("density matches the lognormal closed form at the mean", "[cli]") {
    const fs::path cfg = work_dir() / "bs.json";
    spit(cfg, kBsConfig);
    const double expected = 1.0 / (0.2 * std::sqrt(2.0 * 3.14159265358979323846));
    for (const std::string backend : {"direct", "nufft"}) {
        const fs::path out = work_dir() / ("dens_" + backend + ".csv");
        const CliResult r = run_cli("density --config " + cfg.string() + " --backend " + backend +
                                    " --out " + out.string());
        CAPTURE(backend, r.err);
        REQUIRE(r.code == 0);
        const auto rows = read_csv(out, "x,density,valid");
        REQUIRE(rows.size() == 1);
        CHECK(parse(rows[0][0]) == -0.02);
        CHECK(parse(rows[0][1]) == Catch::Approx(expected).margin(1e-8));
        CHECK(rows[0][2] == "1");
    }
}

TEST_CASE("backend and formula flags override the config", "[cli]") {
    const fs::path cfg = work_dir() / "bs.json";
    spit(cfg, kBsConfig);
    const struct {
        const char* flags;
        const char* label;
    } runs[] = {
        {" --formula alt", "classic-alt"},
        {" --backend nufft", "nufft"},
        {" --backend nufft --formula alt", "nufft-alt"},
    };
    for (const auto& run : runs) {
        const fs::path out = work_dir() / (std::string("price_") + run.label + ".csv");
        const CliResult r =
            run_cli("price --config " + cfg.string() + run.flags + " --out " + out.string());
        CAPTURE(run.flags, r.err);
        REQUIRE(r.code == 0);
        const auto rows = read_csv(out, "strike,put,call,valid,backend");
        REQUIRE(rows.size() == 1);
        CHECK(rows[0][4] == run.label);
        CHECK(parse(rows[0][1]) == Catch::Approx(7.96557).margin(5e-6));
    }
}

TEST_CASE("effective config reproduces the run byte for byte", "[cli]") {
    const fs::path cfg = work_dir() / "vg1.json";
    spit(cfg, kVgConfig);
    const fs::path dump = work_dir() / "effective.json";
    const fs::path out1 = work_dir() / "roundtrip_1.csv";
    const fs::path out2 = work_dir() / "roundtrip_2.csv";
    const CliResult r1 = run_cli("price --config " + cfg.string() + " --dump-config " +
                                 dump.string() + " --out " + out1.string());
    CAPTURE(r1.err);
    REQUIRE(r1.code == 0);
    const CliResult r2 = run_cli("price --config " + dump.string() + " --out " + out2.string());
    CAPTURE(r2.err);
    REQUIRE(r2.code == 0);
    const std::string a = slurp(out1), b = slurp(out2);
    REQUIRE_FALSE(a.empty());
    CHECK(a == b);
}

TEST_CASE("default output honours COSFFT_OUT_DIR", "[cli]") {
    const fs::path cfg = work_dir() / "bs.json";
    spit(cfg, kBsConfig);
    const fs::path dir = work_dir() / "envout";
    fs::create_directories(dir);
    REQUIRE(setenv("COSFFT_OUT_DIR", dir.string().c_str(), 1) == 0);
    const CliResult r = run_cli("price --config " + cfg.string());
    REQUIRE(unsetenv("COSFFT_OUT_DIR") == 0);
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "price.csv"));
    const auto rows = read_csv(dir / "price.csv", "strike,put,call,valid,backend");
    REQUIRE(rows.size() == 1);
}

TEST_CASE("bench --list prints the registry and exits cleanly", "[cli]") {
    const CliResult r = run_cli("bench --list");
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("vg1"));
    CHECK_THAT(r.out, ContainsSubstring("heston1024"));
}

TEST_CASE("bench rejects unknown cases and names the alternatives", "[cli]") {
    const CliResult r = run_cli("bench --cases zzz --out " + work_dir().string());
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("unknown case 'zzz'"));
    CHECK_THAT(r.err, ContainsSubstring("vg4"));
}

TEST_CASE("a small bench run produces the CSV report", "[cli]") {
    // the output directory does not exist yet; bench creates it
    const fs::path dir = work_dir() / "bench_vg1" / "nested";
    const CliResult r =
        run_cli("bench --cases vg1 --strikes 10 --format csv --out " + dir.string());
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("wrote"));
    const auto rows =
        read_csv(dir / "report.csv",
                 "case,backend,variant,opts_per_sec_10,rmse,max_abs_err,mean_abs_err,err_atm");
    CHECK(rows.size() == 8);  // 4 backends x hot/cold
    for (const auto& row : rows) CHECK(row[0] == "vg1");
    CHECK_FALSE(fs::exists(dir / "report.json"));
}

TEST_CASE("bench tolerance and randomize flags are accepted", "[cli]") {
    const fs::path dir = work_dir() / "bench_rand";
    fs::create_directories(dir);
    const CliResult r = run_cli(
        "bench --cases bs --strikes 10 --format json --seed 7 --randomize-strikes "
        "--tolerance 1e-12 --out " +
        dir.string());
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "report.json"));
    CHECK_FALSE(fs::exists(dir / "report.csv"));
}
