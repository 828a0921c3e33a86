#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "giantatom/presets.hpp"

using namespace giantatom;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path fresh_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("giantatom_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // non-numeric cells become NaN
};

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (t.columns.empty()) {
            t.columns = cells;
            continue;
        }
        std::vector<double> vals;
        for (const auto& c : cells) {
            try {
                vals.push_back(std::stod(c));
            } catch (...) {
                vals.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
        t.rows.push_back(vals);
    }
    return t;
}

} // namespace

TEST_CASE("fig2c preset: the shaded t < T region decays at gamma_in + gamma") {
    const RunConfig cfg = validate_config("");
    const auto dir = fresh_dir("fig2c");
    const auto out = run_preset("fig2c", cfg, dir.string());
    const Table t = parse_csv(slurp(out.csv_path));
    REQUIRE(t.columns == std::vector<std::string>{"t_ns", "pe", "solver", "omega_ghz"});

    const CouplingLandscape land = cfg.landscape();
    // group rows by frequency column and check the early exponential
    int checked = 0;
    for (const auto& row : t.rows) {
        const double t_ns = row[0], pe = row[1], f_ghz = row[3];
        if (t_ns >= 125.0 || t_ns <= 0.0) continue;
        const double w = ghz_to_rad(f_ghz);
        const double rate = land.coupling(w) + land.intrinsic(w);
        CHECK(pe == Catch::Approx(std::exp(-rate * ns_to_s(t_ns))).epsilon(1e-10));
        ++checked;
    }
    CHECK(checked > 300);
    CHECK(std::filesystem::exists(out.meta_path));
}

TEST_CASE("fig3b preset: steady column equals the closed form") {
    const RunConfig cfg = validate_config("");
    const auto dir = fresh_dir("fig3b");
    const auto out = run_preset("fig3b", cfg, dir.string());
    const Table t = parse_csv(slurp(out.csv_path));
    REQUIRE(t.columns.size() == 3);
    for (const auto& row : t.rows)
        CHECK(std::abs(row[1] - row[2]) < 1e-8);
}

TEST_CASE("meta sidecar carries hash, seed, SI echo") {
    const RunConfig cfg = validate_config("");
    const auto dir = fresh_dir("meta");
    const auto out = run_preset("fig3b", cfg, dir.string());
    const auto meta = nlohmann::json::parse(slurp(out.meta_path));
    CHECK(meta["preset"] == "fig3b");
    CHECK(meta["seed"] == cfg.seed());
    CHECK(meta["resolved_si"]["landscape.delay_t"] == Catch::Approx(1.25e-7));
    std::ostringstream expect;
    expect << std::hex << std::setw(16) << std::setfill('0') << cfg.hash();
    CHECK(meta["config_hash"] == expect.str());
}

TEST_CASE("presets and sweeps are byte-deterministic across runs and thread counts") {
    const RunConfig cfg = validate_config("");
    for (const std::string name : {"fig2b", "fig4i"}) {
        const auto d1 = fresh_dir(name + "_t1");
        const auto d2 = fresh_dir(name + "_t8");
        const auto o1 = run_preset(name, cfg, d1.string(), 1);
        const auto o2 = run_preset(name, cfg, d2.string(), 8);
        const auto o1b = run_preset(name, cfg, d1.string(), 1);  // rerun in place
        CHECK(slurp(o1.csv_path) == slurp(o2.csv_path));
        CHECK(slurp(o1.csv_path) == slurp(o1b.csv_path));
        CHECK(slurp(o1.meta_path) == slurp(o2.meta_path));
    }
}

TEST_CASE("degenerate one-point gamma_eff sweep equals the direct call") {
    RunConfig cfg = validate_config(
        "sweep.quantity = gamma_eff\n"
        "sweep.axis1.name = omega_q_ghz\n"
        "sweep.axis1.start = 4.9\n"
        "sweep.axis1.stop = 4.9\n"
        "sweep.axis1.count = 1\n");
    const auto dir = fresh_dir("sweep1");
    const auto out = run_sweep(cfg, dir.string());
    const Table t = parse_csv(slurp(out.csv_path));
    REQUIRE(t.rows.size() == 1);
    const CouplingLandscape land = cfg.landscape();
    CHECK(t.rows[0][1] == Catch::Approx(rad_to_mhz(gamma_eff(land, ghz_to_rad(4.9)))).epsilon(1e-15));
}

TEST_CASE("gamma_eff sweep shows the 8 MHz period and four-fold switching") {
    RunConfig cfg = validate_config(
        "sweep.quantity = gamma_eff\n"
        "sweep.axis1.start = 4.87\n"
        "sweep.axis1.stop = 4.91\n"
        "sweep.axis1.count = 1001\n");
    const auto dir = fresh_dir("sweep2");
    const auto out = run_sweep(cfg, dir.string());
    const Table t = parse_csv(slurp(out.csv_path));
    REQUIRE(t.rows.size() == 1001);

    // maxima spacing ~ 8 MHz
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < t.rows.size(); ++i)
        if (t.rows[i][1] > t.rows[i - 1][1] && t.rows[i][1] > t.rows[i + 1][1])
            peaks.push_back(t.rows[i][0]);
    REQUIRE(peaks.size() >= 4);
    for (std::size_t i = 1; i < peaks.size(); ++i)
        CHECK(1e3 * (peaks[i] - peaks[i - 1]) == Catch::Approx(8.0).margin(0.2));

    // four-fold switching across 4 MHz: max/min ratio of adjacent extrema
    double ratio = 0.0;
    for (std::size_t i = 0; i + 100 < t.rows.size(); ++i)
        ratio = std::max(ratio, t.rows[i + 100][1] / t.rows[i][1]);  // 100 rows = 4 MHz
    CHECK(ratio >= 4.0);
}

TEST_CASE("map sweep emits masked cells without aborting") {
    RunConfig cfg = validate_config(
        "sweep.quantity = map\n"
        "sweep.axis1.name = rabi_mhz\n"
        "sweep.axis1.start = 1\n"
        "sweep.axis1.stop = 2000000\n"
        "sweep.axis1.count = 4\n"
        "sweep.axis2.name = delta_mhz\n"
        "sweep.axis2.start = -5\n"
        "sweep.axis2.stop = 5\n"
        "sweep.axis2.count = 3\n");
    const auto dir = fresh_dir("mapmask");
    const auto out = run_sweep(cfg, dir.string());
    const std::string text = slurp(out.csv_path);
    CHECK(text.find("validity band") != std::string::npos);  // mask reasons present
    CHECK(text.find("nan") != std::string::npos);
}

TEST_CASE("hard config errors abort before writing files") {
    CHECK_THROWS_AS(validate_config("sweep.axis1.count = 0\n"), ConfigError);
    RunConfig cfg = validate_config("sweep.quantity = map\n");
    cfg.set("sweep.axis1.name", "omega_q_ghz");  // wrong axis for a map
    const auto dir = fresh_dir("abort");
    CHECK_THROWS_AS(run_sweep(cfg, dir.string()), std::invalid_argument);
    CHECK_FALSE(std::filesystem::exists(dir / "sweep.csv"));
}
