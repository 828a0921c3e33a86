// giantatom — CLI for the two-point giant-atom simulation library
//
// Verbs: landscape, relax, driven, map, fit, preset <name>, validate.
// Global flags: --config <path>, --out <dir>, --seed <u64>, --threads <n>.
// Frequencies are entered and printed as f = omega/2pi (MHz/GHz), times in ns.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "giantatom/config.hpp"
#include "giantatom/csv.hpp"
#include "giantatom/fit.hpp"
#include "giantatom/mode_oracle.hpp"
#include "giantatom/presets.hpp"
#include "giantatom/sweep.hpp"
#include "giantatom/version.hpp"

namespace ga = giantatom;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
};

ga::RunConfig load_config(const GlobalArgs& g) {
    const std::string text = g.config_path.empty() ? std::string{} : read_file(g.config_path);
    ga::RunConfig cfg = ga::validate_config(text);
    if (g.seed_set) cfg.set("solver.seed", std::to_string(g.seed));
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-point giant-atom waveguide simulator"};
    app.set_version_flag("--version", ga::version_string);
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "configuration file (flat dotted keys)");
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option_function<std::uint64_t>(
        "--seed",
        [&g](std::uint64_t v) {
            g.seed = v;
            g.seed_set = true;
        },
        "override solver.seed");
    app.add_option("--threads", g.threads, "worker threads for maps/presets")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // landscape: evaluate the decay-rate model at one frequency or as a sweep
    auto* cmd_land = app.add_subcommand("landscape", "decay-rate landscape gamma_e(omega)");
    cmd_land->fallthrough();
    double land_at_ghz = 0.0;
    auto* land_at = cmd_land->add_option("--at-ghz", land_at_ghz, "evaluate at one frequency");
    cmd_land->callback([&] {
        const ga::RunConfig cfg = load_config(g);
        if (land_at->count() > 0) {
            const ga::CouplingLandscape land = cfg.landscape();
            const double w = ga::ghz_to_rad(land_at_ghz);
            const auto [lo, hi] = ga::envelopes(land, w);
            std::cout << "omega/2pi        " << land_at_ghz << " GHz\n"
                      << "gamma_e/2pi      " << ga::rad_to_mhz(ga::gamma_eff(land, w)) << " MHz\n"
                      << "  gamma_idt/2pi  " << ga::rad_to_mhz(land.coupling(w)) << " MHz\n"
                      << "  gamma_in/2pi   " << ga::rad_to_mhz(land.intrinsic(w)) << " MHz\n"
                      << "  interference   " << land.interference(w) << "\n"
                      << "envelopes/2pi    [" << ga::rad_to_mhz(lo) << ", " << ga::rad_to_mhz(hi)
                      << "] MHz\n"
                      << "phase mod 2pi    " << ga::phase_mod(w, land.delay) / (ga::two_pi / 2.0)
                      << " pi\n";
        } else {
            ga::RunConfig sweep_cfg = cfg;
            sweep_cfg.set("sweep.quantity", "gamma_eff");
            const auto out = ga::run_sweep(sweep_cfg, g.out_dir, g.threads);
            std::cout << "wrote " << out.csv_path << "\n";
        }
    });

    // relax: decay trace with the chosen solver
    auto* cmd_relax = app.add_subcommand("relax", "excited-population decay trace");
    cmd_relax->fallthrough();
    std::string relax_solver;
    double relax_omega_ghz = 0.0, relax_tmax_ns = 0.0;
    auto* ro = cmd_relax->add_option("--omega-q-ghz", relax_omega_ghz, "qubit frequency");
    auto* rs = cmd_relax->add_option("--solver", relax_solver, "series|dde|oracle")
                   ->check(CLI::IsMember({"series", "dde", "oracle"}));
    auto* rt = cmd_relax->add_option("--t-max-ns", relax_tmax_ns, "trace length");
    cmd_relax->callback([&] {
        ga::RunConfig cfg = load_config(g);
        cfg.set("sweep.quantity", "pe_trace");
        if (ro->count()) cfg.set("sweep.omega_q_ghz", ga::fmt17(relax_omega_ghz));
        if (rs->count()) cfg.set("sweep.relax_solver", relax_solver);
        if (rt->count()) cfg.set("sweep.t_max_ns", ga::fmt17(relax_tmax_ns));
        const auto out = ga::run_sweep(cfg, g.out_dir, g.threads);
        std::cout << "wrote " << out.csv_path << "\n";
    });

    // driven: steady state (nullspace) or finite-duration evolution
    auto* cmd_driven = app.add_subcommand("driven", "driven steady state / evolution");
    cmd_driven->fallthrough();
    bool evolve = false;
    double dr_rabi_mhz = 0.0, dr_delta_mhz = 0.0, dr_omega_ghz = 0.0;
    std::uint64_t dr_shots = 0;
    cmd_driven->add_flag("--evolve", evolve, "integrate the finite drive duration instead");
    auto* o1 = cmd_driven->add_option("--rabi-mhz", dr_rabi_mhz, "drive amplitude");
    auto* o2 = cmd_driven->add_option("--delta-mhz", dr_delta_mhz, "drive detuning");
    auto* o3 = cmd_driven->add_option("--omega-q-ghz", dr_omega_ghz, "qubit frequency");
    cmd_driven->add_option("--shots", dr_shots, "also sample tomography with this many shots");
    cmd_driven->callback([&] {
        ga::RunConfig cfg = load_config(g);
        if (o1->count()) cfg.set("sweep.rabi_mhz", ga::fmt17(dr_rabi_mhz));
        if (o2->count()) cfg.set("sweep.delta_mhz", ga::fmt17(dr_delta_mhz));
        if (o3->count()) cfg.set("sweep.omega_q_ghz", ga::fmt17(dr_omega_ghz));
        const ga::CouplingLandscape land = cfg.landscape();
        const ga::DriveSpec drive{ga::mhz_to_rad(cfg.real("sweep.rabi_mhz")),
                                  ga::mhz_to_rad(cfg.real("sweep.delta_mhz")),
                                  cfg.real("sweep.duration_us") * 1e-6,
                                  ga::ghz_to_rad(cfg.real("sweep.omega_q_ghz"))};
        const ga::DressedRates rates = ga::dressed_rates(drive, land);
        const ga::GeneratorOptions gen = cfg.generator_options();
        std::cout << "dressed rates /2pi MHz: Gamma- = " << ga::rad_to_mhz(rates.rate_minus)
                  << ", Gamma+ = " << ga::rad_to_mhz(rates.rate_plus)
                  << ", Gamma_phi = " << ga::rad_to_mhz(rates.rate_phi)
                  << ", theta = " << rates.mixing_theta << " rad\n";
        ga::DensityMatrix2 rho;
        if (evolve) {
            const double dt = ga::default_evolve_dt(drive, rates, gen);
            const auto traj = ga::lindblad_evolve(ga::DensityMatrix2::ground(), drive, rates, dt,
                                                  gen, static_cast<std::size_t>(cfg.integer("sweep.time_samples")));
            rho = traj.states.back();
            std::filesystem::create_directories(g.out_dir);
            ga::CsvWriter w;
            w.header({"t_ns", "sx", "sy", "sz", "pe", "purity"});
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const ga::BlochVector r = ga::bloch_from_rho(traj.states[i]);
                w.row({ga::fmt17(ga::s_to_ns(traj.times[i])), ga::fmt17(r.rx), ga::fmt17(r.ry),
                       ga::fmt17(r.rz), ga::fmt17(traj.states[i].pe()),
                       ga::fmt17(ga::purity(traj.states[i]))});
            }
            const std::string path = g.out_dir + "/evolve.csv";
            w.save(path);
            std::cout << "wrote " << path << "\n";
        } else {
            rho = ga::steady_state(drive, rates, gen);
        }
        const ga::BlochVector r = ga::bloch_from_rho(rho);
        std::cout << (evolve ? "state after drive" : "steady state") << ": pe = " << rho.pe()
                  << ", <sx,sy,sz> = (" << r.rx << ", " << r.ry << ", " << r.rz
                  << "), purity = " << ga::purity(rho) << "\n"
                  << "rho (re,im x4) = " << ga::rho_csv_fields(rho) << "\n";
        if (dr_shots > 0) {
            const auto tomo = ga::sample_tomography(rho, dr_shots, cfg.seed());
            std::cout << "tomography (" << dr_shots << " shots, seed " << cfg.seed()
                      << "): r_hat = (" << tomo.estimate.rx << ", " << tomo.estimate.ry << ", "
                      << tomo.estimate.rz << "), se = (" << tomo.std_error[0] << ", "
                      << tomo.std_error[1] << ", " << tomo.std_error[2] << ")\n";
        }
    });

    // map: coherence/purity map over (Omega, Delta)
    auto* cmd_map = app.add_subcommand("map", "steady-state coherence/purity map");
    cmd_map->fallthrough();
    cmd_map->callback([&] {
        ga::RunConfig cfg = load_config(g);
        cfg.set("sweep.quantity", "map");
        if (cfg.text("sweep.axis1.name") != "rabi_mhz") {
            cfg.set("sweep.axis1.name", "rabi_mhz");
            cfg.set("sweep.axis1.start", "0.5");
            cfg.set("sweep.axis1.stop", "20");
            cfg.set("sweep.axis1.count", "100");
        }
        const auto out = ga::run_sweep(cfg, g.out_dir, g.threads);
        std::cout << "wrote " << out.csv_path << "\n";
    });

    // fit: least-squares landscape fit to (omega_ghz, gamma_e_mhz) samples
    auto* cmd_fit = app.add_subcommand("fit", "fit the landscape to rate samples");
    cmd_fit->fallthrough();
    std::string fit_samples_path;
    cmd_fit->add_option("samples", fit_samples_path, "CSV with omega_ghz,gamma_e_mhz rows")
        ->required();
    cmd_fit->callback([&] {
        const ga::RunConfig cfg = load_config(g);
        std::ifstream in(fit_samples_path);
        if (!in) throw std::runtime_error("cannot read samples: " + fit_samples_path);
        std::vector<ga::LandscapeSample> samples;
        std::string line;
        while (std::getline(in, line)) {
            const std::string s = line;
            if (s.empty() || s[0] == '#' || std::isalpha(static_cast<unsigned char>(s[0]))) continue;
            std::istringstream row(s);
            double f_ghz = 0.0, g_mhz = 0.0;
            char comma = ',';
            if (row >> f_ghz >> comma >> g_mhz)
                samples.push_back({ga::ghz_to_rad(f_ghz), ga::mhz_to_rad(g_mhz)});
        }
        const auto report = ga::fit_landscape(samples, cfg.landscape());
        const auto& fitted = report.landscape;
        std::cout << "converged        " << (report.converged ? "yes" : "no") << " ("
                  << report.iterations << " iterations)\n"
                  << "residual norm    " << ga::rad_to_mhz(report.residual_norm) << " MHz\n"
                  << "gamma_peak/2pi   " << ga::rad_to_mhz(fitted.idt.gamma_peak) << " MHz\n"
                  << "beta             " << fitted.beta
                  << (report.beta_identifiable ? "" : "  [not identifiable]") << "\n"
                  << "delay T          " << ga::s_to_ns(fitted.delay) << " ns"
                  << (report.t_identifiable ? "" : "  [not identifiable: beta ~ 0]") << "\n"
                  << "modulation period " << 1e-6 / fitted.delay << " MHz\n"
                  << "gamma_in c0/2pi  " << ga::rad_to_mhz(fitted.loss.c0) << " MHz\n"
                  << "gamma_in slope   " << fitted.loss.c1 << "\n";
        if (!report.span_covers_period)
            std::cout << "note: samples span less than one modulation period\n";
        std::cout << "config keys:\n"
                  << "  landscape.gamma_peak_mhz = " << ga::fmt17(ga::rad_to_mhz(fitted.idt.gamma_peak)) << "\n"
                  << "  landscape.beta = " << ga::fmt17(fitted.beta) << "\n"
                  << "  landscape.delay_t_ns = " << ga::fmt17(ga::s_to_ns(fitted.delay)) << "\n"
                  << "  landscape.gamma_in_c0_mhz = " << ga::fmt17(ga::rad_to_mhz(fitted.loss.c0)) << "\n"
                  << "  landscape.gamma_in_slope = " << ga::fmt17(fitted.loss.c1) << "\n";
    });

    // preset: canned figure reproductions
    auto* cmd_preset = app.add_subcommand("preset", "run a canned figure preset");
    cmd_preset->fallthrough();
    std::string preset_name;
    cmd_preset->add_option("name", preset_name, "fig2b|fig2c|fig3b|fig3d|fig3f|fig4i");
    cmd_preset->callback([&] {
        ga::RunConfig cfg = load_config(g);
        std::string name = preset_name;
        if (name.empty()) name = cfg.text("sweep.preset");
        if (name.empty())
            throw CLI::ValidationError("preset", "no preset named (argument or sweep.preset)");
        const auto out = ga::run_preset(name, cfg, g.out_dir, g.threads);
        std::cout << "wrote " << out.csv_path << " and " << out.meta_path << "\n";
    });

    // validate: strict config check
    auto* cmd_validate = app.add_subcommand("validate", "parse and validate the config");
    cmd_validate->fallthrough();
    cmd_validate->callback([&] {
        const ga::RunConfig cfg = load_config(g);
        std::cout << "configuration valid; " << cfg.values().size() << " keys, hash "
                  << std::hex << std::setw(16) << std::setfill('0') << cfg.hash() << std::dec
                  << "\n";
        std::cout << cfg.canonical();
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ga::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
