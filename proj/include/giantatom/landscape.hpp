// landscape.hpp — frequency-dependent coupling of the two-point giant atom
//
// The emitter couples to the waveguide through an IDT whose response is
// modeled as gamma_peak * sinc^2(N pi (w - wc)/wc), on top of a linear
// intrinsic loss line gamma_in(w) = c0 + c1 w. Two-point interference
// modulates the total as
//
//     gamma_eff(w) = gamma_in(w) + gamma_idt(w) * [1 + beta cos(w T)].

#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "giantatom/common.hpp"

namespace giantatom {

// w*T reduced into [0, 2pi). The product is formed and reduced in extended
// precision; for w*T ~ 1e6 rad a plain double fmod against the rounded 2pi
// would already have drifted by ~1e-11 rad.
inline double phase_mod(double omega, double delay) {
    if (delay <= 0.0) throw std::domain_error("phase_mod: delay must be positive");
    const long double two_pi_l = 6.283185307179586476925286766559L;
    long double x = static_cast<long double>(omega) * static_cast<long double>(delay);
    long double r = std::fmod(x, two_pi_l);
    if (r < 0.0L) r += two_pi_l;
    double out = static_cast<double>(r);
    if (out >= two_pi) out = 0.0;
    return out;
}

struct IdtModel {
    double gamma_peak = 0.0;    // rad/s, extra decay rate at the response center
    double omega_center = 0.0;  // rad/s
    int n_pairs = 1;            // IDT finger pairs

    void validate() const {
        if (gamma_peak < 0.0) throw std::invalid_argument("IdtModel: gamma_peak < 0");
        if (omega_center <= 0.0) throw std::invalid_argument("IdtModel: omega_center <= 0");
        if (n_pairs < 1) throw std::invalid_argument("IdtModel: n_pairs < 1");
    }
};

inline double gamma_idt(const IdtModel& m, double omega) {
    if (omega <= 0.0) throw std::domain_error("gamma_idt: omega must be positive");
    const double x = m.n_pairs * (two_pi / 2.0) * (omega - m.omega_center) / m.omega_center;
    const double s = sinc(x);
    return m.gamma_peak * s * s;
}

struct IntrinsicLossLine {
    double c0 = 0.0;       // rad/s
    double c1 = 0.0;       // dimensionless slope, gamma_in(w) = c0 + c1 w
    double band_lo = 0.0;  // validity band, rad/s
    double band_hi = 0.0;

    double at(double omega) const { return c0 + c1 * omega; }
    bool in_band(double omega) const { return omega >= band_lo && omega <= band_hi; }

    void validate() const {
        if (!(band_lo > 0.0) || !(band_hi > band_lo))
            throw std::invalid_argument("IntrinsicLossLine: invalid band");
        // linear, so endpoint checks cover the band
        if (at(band_lo) < 0.0 || at(band_hi) < 0.0)
            throw std::invalid_argument("IntrinsicLossLine: gamma_in negative inside band");
    }
};

struct CouplingLandscape {
    IdtModel idt;
    IntrinsicLossLine loss;
    double beta = 0.0;   // amplitude transmittance between the coupling points
    double delay = 0.0;  // propagation time T between the points, s

    void validate() const {
        idt.validate();
        loss.validate();
        if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("CouplingLandscape: beta out of [0,1]");
        if (delay <= 0.0) throw std::invalid_argument("CouplingLandscape: delay <= 0");
    }

    void require_in_band(double omega) const {
        if (!loss.in_band(omega)) {
            std::ostringstream os;
            os << "omega/2pi = " << rad_to_ghz(omega) << " GHz outside validity band ["
               << rad_to_ghz(loss.band_lo) << ", " << rad_to_ghz(loss.band_hi) << "] GHz";
            throw std::domain_error(os.str());
        }
    }

    double intrinsic(double omega) const { return loss.at(omega); }
    double coupling(double omega) const { return gamma_idt(idt, omega); }
    double interference(double omega) const {
        return 1.0 + beta * std::cos(phase_mod(omega, delay));
    }
};

inline double gamma_eff(const CouplingLandscape& land, double omega) {
    land.require_in_band(omega);
    return land.intrinsic(omega) + land.coupling(omega) * land.interference(omega);
}

// (lower, upper) = gamma_in + gamma_idt (1 -+ beta)
inline std::pair<double, double> envelopes(const CouplingLandscape& land, double omega) {
    land.require_in_band(omega);
    const double gin = land.intrinsic(omega);
    const double g = land.coupling(omega);
    return {gin + g * (1.0 - land.beta), gin + g * (1.0 + land.beta)};
}

inline double purcell_factor(const CouplingLandscape& land, double omega_on, double omega_off) {
    const double num = gamma_eff(land, omega_on);
    const double den = gamma_eff(land, omega_off);
    if (den <= 0.0)
        throw std::invalid_argument("purcell_factor: gamma_eff(omega_off) is zero");
    return num / den;
}

} // namespace giantatom
