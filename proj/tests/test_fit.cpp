#include <catch_amalgamated.hpp>

#include "giantatom/fit.hpp"

using namespace giantatom;

namespace {

CouplingLandscape truth_landscape() {
    CouplingLandscape land;
    land.idt = {mhz_to_rad(0.59938527591220492), ghz_to_rad(5.0), 5};
    land.loss = {mhz_to_rad(0.00065960311552487822), 1.4116530310357314e-05, ghz_to_rad(1.0),
                 ghz_to_rad(6.5)};
    land.beta = 0.78;
    land.delay = 125e-9;
    return land;
}

std::vector<LandscapeSample> synthesize(const CouplingLandscape& land, double lo_ghz,
                                        double hi_ghz, int n) {
    std::vector<LandscapeSample> samples;
    samples.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double w = ghz_to_rad(lo_ghz + (hi_ghz - lo_ghz) * i / (n - 1));
        samples.push_back({w, gamma_eff(land, w)});
    }
    return samples;
}

} // namespace

TEST_CASE("fit recovers a known landscape from noiseless samples") {
    const CouplingLandscape truth = truth_landscape();
    const auto samples = synthesize(truth, 4.86, 4.92, 240);  // 7.5 modulation periods

    CouplingLandscape init = truth;
    init.idt.gamma_peak *= 1.05;
    init.beta = 0.70;
    init.delay *= 1.02;
    init.loss.c0 *= 2.0;
    init.loss.c1 *= 0.5;

    const auto report = fit_landscape(samples, init);
    REQUIRE(report.converged);
    CHECK(report.span_covers_period);
    CHECK(report.beta_identifiable);
    CHECK(report.residual_norm < 1e-6 * mhz_to_rad(1.0));
    CHECK(report.landscape.idt.gamma_peak
          == Catch::Approx(truth.idt.gamma_peak).epsilon(1e-6));
    CHECK(report.landscape.beta == Catch::Approx(truth.beta).epsilon(1e-6));
    CHECK(report.landscape.delay == Catch::Approx(truth.delay).epsilon(1e-6));
    CHECK(report.landscape.loss.c0 == Catch::Approx(truth.loss.c0).epsilon(1e-4).margin(1e-3));
    CHECK(report.landscape.loss.c1 == Catch::Approx(truth.loss.c1).epsilon(1e-4));
    // fitted modulation period ~ 8 MHz
    CHECK(1e-6 / report.landscape.delay == Catch::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("fit flags unidentifiable T when beta is zero") {
    CouplingLandscape truth = truth_landscape();
    truth.beta = 0.0;
    const auto samples = synthesize(truth, 4.86, 4.92, 120);

    CouplingLandscape init = truth;
    init.beta = 0.2;  // wrong on purpose
    const auto report = fit_landscape(samples, init);
    CHECK(report.landscape.beta < 1e-5);
    CHECK_FALSE(report.beta_identifiable);
    CHECK_FALSE(report.t_identifiable);
    CHECK(report.residual_norm < 1e-5 * mhz_to_rad(1.0));
}

TEST_CASE("fit errors") {
    const CouplingLandscape truth = truth_landscape();
    auto samples = synthesize(truth, 4.88, 4.90, 5);
    CHECK_THROWS_AS(fit_landscape(samples, truth), std::invalid_argument);
}

TEST_CASE("fit report flags short spans") {
    const CouplingLandscape truth = truth_landscape();
    // 2 MHz window is a quarter of the 8 MHz modulation period
    const auto samples = synthesize(truth, 4.890, 4.892, 24);
    CouplingLandscape init = truth;
    init.beta = 0.75;
    const auto report = fit_landscape(samples, init);
    CHECK_FALSE(report.span_covers_period);
}
