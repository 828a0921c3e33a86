#include <catch_amalgamated.hpp>

#include "giantatom/driven.hpp"
#include "giantatom/sweep.hpp"

using namespace giantatom;

namespace {

CouplingLandscape device_landscape() {
    CouplingLandscape land;
    land.idt = {mhz_to_rad(0.59938527591220492), ghz_to_rad(5.0), 5};
    land.loss = {mhz_to_rad(0.00065960311552487822), 1.4116530310357314e-05, ghz_to_rad(1.0),
                 ghz_to_rad(6.5)};
    land.beta = 0.78;
    land.delay = 125e-9;
    return land;
}

CouplingLandscape flat_landscape(double gamma_e) {
    CouplingLandscape land;
    land.idt = {0.0, ghz_to_rad(5.0), 1};
    land.loss = {gamma_e, 0.0, ghz_to_rad(0.5), ghz_to_rad(10.0)};
    land.beta = 0.0;
    land.delay = 125e-9;
    return land;
}

} // namespace

TEST_CASE("closed-form populations") {
    const double ge = mhz_to_rad(1.0);
    CHECK(steady_pe_resonant(1e6 * ge, ge) == Catch::Approx(0.5).margin(1e-12));
    CHECK(steady_pe_resonant(ge, ge) == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(steady_pe_resonant(0.0, ge) == 0.0);
    CHECK_THROWS_AS(steady_pe_resonant(0.0, 0.0), std::invalid_argument);

    // weak drive: 0.2 MHz drive on a 2 MHz linewidth -> 0.01
    CHECK(weak_drive_pe(mhz_to_rad(0.2), mhz_to_rad(2.0)) == Catch::Approx(0.01).epsilon(1e-14));
    CHECK(weak_drive_pe(0.0, ge) == 0.0);
    CHECK_THROWS_AS(weak_drive_pe(ge, 0.0), std::domain_error);

    // ratio against the full closed form -> 1 as Omega/gamma_e -> 0
    const double r = weak_drive_pe(1e-3 * ge, ge) / steady_pe_resonant(1e-3 * ge, ge);
    CHECK(std::abs(r - 1.0) < 3e-6);
    CHECK(weak_drive_valid(ge / 4.0, ge));
    CHECK_FALSE(weak_drive_valid(ge, ge));
}

TEST_CASE("dressed rates at zero detuning have equal weights") {
    const CouplingLandscape flat = flat_landscape(mhz_to_rad(1.0));
    const DriveSpec drive{mhz_to_rad(2.0), 0.0, 0.0, ghz_to_rad(4.9)};
    const DressedRates r = dressed_rates(drive, flat);
    CHECK(r.mixing_theta == Catch::Approx(two_pi / 4.0));
    // cos^4(pi/4) = sin^4(pi/4) = 1/4 and sin^2/4 = 1/4
    CHECK(r.rate_minus == Catch::Approx(mhz_to_rad(1.0) / 4.0).epsilon(1e-12));
    CHECK(r.rate_plus == Catch::Approx(r.rate_minus).epsilon(1e-12));
    CHECK(r.rate_phi == Catch::Approx(r.rate_minus).epsilon(1e-12));
}

TEST_CASE("dressed rate ratio oscillates with the landscape period") {
    const CouplingLandscape land = device_landscape();
    const double wq = ghz_to_rad(4.891);
    // scan Omega so the sideband spacing 2*Omega_R walks through periods
    std::vector<double> ratio;
    for (int i = 0; i <= 400; ++i) {
        const DriveSpec drive{mhz_to_rad(6.0 + 0.05 * i), 0.0, 0.0, wq};
        const DressedRates r = dressed_rates(drive, land);
        ratio.push_back(r.rate_plus / r.rate_minus);
    }
    // count maxima; expect spacing ~ 8 MHz in Omega (period 2pi/T at Delta=0)
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < ratio.size(); ++i)
        if (ratio[i] > ratio[i - 1] && ratio[i] > ratio[i + 1])
            peaks.push_back(6.0 + 0.05 * static_cast<double>(i));
    REQUIRE(peaks.size() >= 2);
    for (std::size_t i = 1; i < peaks.size(); ++i)
        CHECK(peaks[i] - peaks[i - 1] == Catch::Approx(8.0).margin(0.5));
}

TEST_CASE("sidebands outside the band are refused by name") {
    const CouplingLandscape land = device_landscape();
    const DriveSpec drive{ghz_to_rad(2.0), 0.0, 0.0, ghz_to_rad(4.9)};  // huge Rabi
    CHECK_THROWS_WITH(dressed_rates(drive, land),
                      Catch::Matchers::ContainsSubstring("validity band"));
}

TEST_CASE("Rabi pi-pulse in the unitary limit") {
    const DriveSpec drive{mhz_to_rad(1.0), 0.0, 0.0, ghz_to_rad(4.9)};
    const DressedRates none{0.0, 0.0, 0.0, two_pi / 4.0};
    const double t_pi = two_pi / 2.0 / drive.rabi_omega;
    DriveSpec d = drive;
    d.duration = t_pi;
    const auto traj = lindblad_evolve(DensityMatrix2::ground(), d, none, 0.01 / drive.omega_r());
    const DensityMatrix2& final = traj.states.back();
    CHECK(final.pe() == Catch::Approx(1.0).margin(1e-8));
    CHECK(std::abs(final.trace() - 1.0) < 1e-12);
}

TEST_CASE("steady state equals the resonance-fluorescence closed form on a flat landscape") {
    const double ge = mhz_to_rad(1.0);
    const CouplingLandscape flat = flat_landscape(ge);
    for (double ratio : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        const DriveSpec drive{ratio * ge, 0.0, 0.0, ghz_to_rad(4.9)};
        const DensityMatrix2 rho = steady_state(drive, dressed_rates(drive, flat));
        INFO("Omega/gamma = " << ratio);
        CHECK(std::abs(rho.pe() - steady_pe_resonant(drive.rabi_omega, ge)) < 1e-8);
    }
}

TEST_CASE("steady state agrees with long-time evolution") {
    const CouplingLandscape land = device_landscape();
    const DriveSpec drive0{mhz_to_rad(1.2), mhz_to_rad(-0.5), 0.0, ghz_to_rad(4.891)};
    const DressedRates rates = dressed_rates(drive0, land);
    const DensityMatrix2 target = steady_state(drive0, rates);

    const double min_rate = std::min({rates.rate_minus, rates.rate_plus,
                                      rates.rate_phi > 0 ? rates.rate_phi : rates.rate_minus});
    DriveSpec drive = drive0;
    drive.duration = 50.0 / min_rate;
    const double dt = default_evolve_dt(drive, rates);
    const auto traj = lindblad_evolve(DensityMatrix2::excited(), drive, rates, dt);
    const DensityMatrix2& final = traj.states.back();
    CHECK(std::abs(final.rho00 - target.rho00) < 1e-7);
    CHECK(std::abs(final.rho01 - target.rho01) < 1e-7);
}

TEST_CASE("no drive relaxes to the ground state with purity 1") {
    const CouplingLandscape land = device_landscape();
    for (double delta_mhz : {0.0, 3.0, -4.0}) {
        const DriveSpec drive{0.0, mhz_to_rad(delta_mhz), 0.0, ghz_to_rad(4.89)};
        const DensityMatrix2 rho = steady_state(drive, dressed_rates(drive, land));
        CHECK(rho.pe() == Catch::Approx(0.0).margin(1e-10));
        CHECK(purity(rho) == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("rate-equation imbalance in the well-resolved secular regime") {
    // Gamma_phi = 0 and Omega_R far above the rates: population imbalance
    // (G- - G+)/(G- + G+), coherence ~ 0 in the dressed basis
    const double gm = mhz_to_rad(0.9), gp = mhz_to_rad(0.3);
    const DressedRates rates{gm, gp, 0.0, two_pi / 4.0};
    const DriveSpec drive{mhz_to_rad(400.0), 0.0, 0.0, ghz_to_rad(4.9)};
    const DensityMatrix2 rho = steady_state(drive, rates);
    // dressed populations: p+- = <+-|rho|+->; theta = pi/2 -> |+-> = (|e>+-|g>)/sqrt2
    const double p_plus = 0.5 * (1.0 + 2.0 * rho.rho01.real());
    const double imbalance_expected = (gm - gp) / (gm + gp);
    CHECK(1.0 - 2.0 * p_plus == Catch::Approx(imbalance_expected).margin(5e-3));

    // swapping the sideband rates flips the dressed imbalance sign exactly,
    // and the lab <sigma_x> flips with it
    const DensityMatrix2 swapped = steady_state(drive, DressedRates{gp, gm, 0.0, two_pi / 4.0});
    const double sx = bloch_from_rho(rho).rx;
    const double sx_swapped = bloch_from_rho(swapped).rx;
    CHECK(sx == Catch::Approx(-sx_swapped).epsilon(1e-9));
    CHECK(std::abs(sx) > 0.1);  // bath engineering leaves real lab coherence
}

TEST_CASE("steady state refusals") {
    const DriveSpec drive{mhz_to_rad(1.0), 0.0, 0.0, ghz_to_rad(4.9)};
    CHECK_THROWS_AS(steady_state(drive, DressedRates{0.0, 0.0, 0.0, two_pi / 4.0}),
                    std::invalid_argument);
    // dephasing alone leaves a degenerate steady manifold
    CHECK_THROWS_AS(steady_state(DriveSpec{0.0, 0.0, 0.0, ghz_to_rad(4.9)},
                                 DressedRates{0.0, 0.0, mhz_to_rad(1.0), 0.0}),
                    std::invalid_argument);
}

TEST_CASE("evolution rejects oversized steps with the computed bound") {
    const DriveSpec drive{mhz_to_rad(5.0), 0.0, 1e-6, ghz_to_rad(4.9)};
    const DressedRates rates{mhz_to_rad(0.2), mhz_to_rad(0.2), mhz_to_rad(0.1), two_pi / 4.0};
    CHECK_THROWS_WITH(lindblad_evolve(DensityMatrix2::ground(), drive, rates, 1e-6),
                      Catch::Matchers::ContainsSubstring("0.01/max"));
}

TEST_CASE("trajectories preserve trace, positivity, purity bounds") {
    const CouplingLandscape land = device_landscape();
    SplitMix64 rng(2024);
    for (int k = 0; k < 200; ++k) {
        const DriveSpec drive{mhz_to_rad(0.2 + 8.0 * rng.uniform01()),
                              mhz_to_rad(-8.0 + 16.0 * rng.uniform01()),
                              0.4e-6, ghz_to_rad(4.885 + 0.01 * rng.uniform01())};
        const DressedRates rates = dressed_rates(drive, land);
        BlochVector r0{2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0,
                       2.0 * rng.uniform01() - 1.0};
        const double n = std::sqrt(r0.norm2());
        if (n > 1.0) {
            r0.rx /= n; r0.ry /= n; r0.rz /= n;
        }
        const auto traj = lindblad_evolve(rho_from_bloch(r0), drive, rates,
                                          default_evolve_dt(drive, rates), {}, 33);
        for (const auto& rho : traj.states) {
            CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
            CHECK(rho.eigenvalues()[0] > -1e-10);
            const double pur = purity(rho);
            CHECK(pur > 0.5 - 1e-10);
            CHECK(pur < 1.0 + 1e-10);
        }
    }
}

TEST_CASE("secular and full generators converge at strong drive") {
    const CouplingLandscape land = device_landscape();
    const DriveSpec drive{mhz_to_rad(30.0), mhz_to_rad(-5.0), 0.0, ghz_to_rad(4.891)};
    const DressedRates rates = dressed_rates(drive, land);
    const DensityMatrix2 full = steady_state(drive, rates, {false, 0.0});
    const DensityMatrix2 secular = steady_state(drive, rates, {true, 0.0});
    CHECK(std::abs(full.pe() - secular.pe()) < 5e-3);
    CHECK(std::abs(purity(full) - purity(secular)) < 2e-2);
}

TEST_CASE("strong drive still prepares high purity at the low-coupling frequency") {
    // at 4.640 GHz the sinc^2 envelope is well below its peak, yet the
    // two-point interference still modulates gamma_e enough for dressed-state
    // bath engineering; the device reports ~0.75 there, the surrogate
    // landscape (no transducer ripple) runs deeper and lands higher
    const CouplingLandscape land = device_landscape();
    double best = 0.0;
    for (double om_mhz = 10.0; om_mhz <= 20.0; om_mhz += 0.25) {
        const DriveSpec drive{mhz_to_rad(om_mhz), mhz_to_rad(-5.0), 0.0, ghz_to_rad(4.640)};
        best = std::max(best, purity(steady_state(drive, dressed_rates(drive, land))));
    }
    CHECK(best > 0.7);
    CHECK(best < 1.0);
}

TEST_CASE("extra dephasing drains purity") {
    const CouplingLandscape land = device_landscape();
    const DriveSpec drive{mhz_to_rad(12.0), mhz_to_rad(-5.0), 0.0, ghz_to_rad(4.891)};
    const DressedRates rates = dressed_rates(drive, land);
    const double p0 = purity(steady_state(drive, rates, {false, 0.0}));
    const double p1 = purity(steady_state(drive, rates, {false, mhz_to_rad(2.0)}));
    CHECK(p1 < p0);
}

TEST_CASE("coherence/purity map masks out-of-band cells and is thread-invariant") {
    const CouplingLandscape land = device_landscape();
    // stop high enough that upper sidebands at w_d + Omega_R leave the band
    const Axis rabi{"rabi_mhz", "", 1.0, 2000000.0, 12};
    const Axis delta{"delta_mhz", "", -5.0, 5.0, 3};
    const SweepGrid g1 = map_coherence_purity(rabi, delta, ghz_to_rad(4.891), land, {}, 1);
    const SweepGrid g8 = map_coherence_purity(rabi, delta, ghz_to_rad(4.891), land, {}, 8);
    g1.validate();
    REQUIRE(g1.size() == 36);
    bool any_masked = false, any_valid = false;
    for (std::size_t i = 0; i < g1.size(); ++i) {
        const bool masked = !g1.mask[i].empty();
        any_masked = any_masked || masked;
        any_valid = any_valid || !masked;
        CHECK(g1.mask[i] == g8.mask[i]);
        if (!masked) {
            CHECK(g1.results.at("purity")[i] == g8.results.at("purity")[i]);
            CHECK(g1.results.at("sx")[i] == g8.results.at("sx")[i]);
        }
    }
    CHECK(any_masked);
    CHECK(any_valid);
}

TEST_CASE("weak-drive map cells track the quadratic law") {
    const CouplingLandscape land = device_landscape();
    for (double f_ghz : {4.888, 4.891, 4.894}) {
        const double wq = ghz_to_rad(f_ghz);
        const double ge = gamma_eff(land, wq);
        for (double frac : {0.1, 0.03, 0.01}) {
            const DriveSpec drive{frac * ge, 0.0, 0.0, wq};
            const DensityMatrix2 rho = steady_state(drive, dressed_rates(drive, land));
            const double approx = weak_drive_pe(drive.rabi_omega, ge);
            INFO("f = " << f_ghz << " GHz, Omega/gamma_e = " << frac);
            CHECK(std::abs(rho.pe() - approx) / approx < 0.03);
        }
    }
}
