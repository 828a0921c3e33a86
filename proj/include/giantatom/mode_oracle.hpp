// mode_oracle.hpp — brute-force discretized-continuum check of the decay solvers
//
// Single-excitation Schrodinger evolution of one emitter coupled at x = 0 and
// x = L to right- and left-moving modes with linearized dispersion. In the
// frame rotating at w_q, mode j at detuning D_j carries coupling
//
//     G_{R,j} = g (1 + e^{+i w_j T}),   G_{L,j} = g (1 + e^{-i w_j T}),
//     w_j T = w_q T + D_j T,            g = sqrt(gamma dw / (4 pi)) * f_conv
//
// with f_conv = 1/sqrt(2) under amplitude_half_rates (so the flat-band decay
// reproduces gamma) and 1 under population_rates. Amplitude transmittance
// beta < 1 is uniform propagation loss: every mode is damped at
// eta = -ln(beta)/T, which multiplies exactly the delayed part of the memory
// kernel by beta while perturbing the instantaneous part only at O(eta/BW).
// beta = 0 has no backflow at all and is modeled as a single effective
// coupling point of the same total rate.
//
// Time stepping is integrating-factor (Lawson) RK4: the stiff diagonal
// (mode detunings up to BW/2, plus eta) is advanced exactly by precomputed
// phase factors and classical RK4 handles the slow coupling terms. A plain
// RK4 would need BW*dt < 2.8 for bare stability.

#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "giantatom/relaxation.hpp"

namespace giantatom {

inline RelaxationTrace mode_oracle(const RelaxationParams& p, int n_modes, double bandwidth,
                                   double t_max, double dt,
                                   RateConvention conv = RateConvention::amplitude_half_rates) {
    p.validate();
    if (t_max < 0.0) throw std::domain_error("mode_oracle: t_max < 0");
    if (dt <= 0.0) throw std::invalid_argument("mode_oracle: dt <= 0");
    if (n_modes < 100) throw std::invalid_argument("mode_oracle: n_modes must be >= 100");
    if (bandwidth < 20.0 * (p.gamma + p.gamma_in)) {
        std::ostringstream os;
        os << "mode_oracle: bandwidth " << rad_to_mhz(bandwidth)
           << " MHz (angular/2pi) below 20*(gamma_in+gamma) = "
           << rad_to_mhz(20.0 * (p.gamma + p.gamma_in)) << " MHz";
        throw std::invalid_argument(os.str());
    }
    if (p.beta > 0.0 && p.beta < 1.0 && bandwidth < -20.0 * std::log(p.beta) / p.delay) {
        std::ostringstream os;
        os << "mode_oracle: bandwidth too small for the propagation-loss rate "
           << "-ln(beta)/T = " << rad_to_mhz(-std::log(p.beta) / p.delay)
           << " MHz; the per-mode damping would distort the local density of states";
        throw std::invalid_argument(os.str());
    }
    // the first spurious revival of the frequency comb appears at
    // t_rec - T (advanced image of the delayed kernel), t_rec = 2 pi / dw
    const double t_rec = two_pi * n_modes / bandwidth;
    if (t_rec < t_max + p.delay) {
        std::ostringstream os;
        os << "mode_oracle: recurrence time 2pi*n_modes/bandwidth = " << s_to_ns(t_rec)
           << " ns must exceed t_max + delay = " << s_to_ns(t_max + p.delay)
           << " ns; raise n_modes or lower bandwidth";
        throw std::invalid_argument(os.str());
    }

    const std::size_t n = static_cast<std::size_t>(n_modes);
    const double dw = bandwidth / n_modes;
    const double conv_factor = (conv == RateConvention::amplitude_half_rates) ? 0.5 : 1.0;
    const double g = std::sqrt(p.gamma * dw * conv_factor / (2.0 * two_pi));
    const double k_in = (conv == RateConvention::amplitude_half_rates) ? 0.5 * p.gamma_in : p.gamma_in;
    const double eta = (p.beta > 0.0 && p.beta < 1.0) ? -std::log(p.beta) / p.delay : 0.0;
    const bool no_backflow = p.beta == 0.0;

    const int n_steps = std::max(1, static_cast<int>(std::llround(t_max / dt)));
    const double h = t_max / n_steps;

    const double phase_qT = phase_mod(p.omega_q, p.delay);
    using cd = std::complex<double>;
    std::vector<cd> gR(n), gL(n), eh(n), ef(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double Dj = (static_cast<double>(j) - 0.5 * n_modes + 0.5) * dw;
        if (no_backflow) {
            gR[j] = gL[j] = cd{g * std::sqrt(2.0), 0.0};
        } else {
            const double ph = phase_qT + Dj * p.delay;
            gR[j] = g * (1.0 + std::polar(1.0, ph));
            gL[j] = g * (1.0 + std::polar(1.0, -ph));
        }
        const cd lam{-eta, -Dj};
        eh[j] = std::exp(0.5 * h * lam);
        ef[j] = eh[j] * eh[j];
    }
    const double eha = std::exp(-0.5 * h * k_in);
    const double efa = eha * eha;

    cd a{1.0, 0.0};
    std::vector<cd> cR(n, cd{}), cL(n, cd{});
    // stage work buffers
    std::vector<cd> k1R(n), k1L(n), k2R(n), k2L(n), k3R(n), k3L(n), k4R(n), k4L(n),
        yR(n), yL(n);

    RelaxationTrace trace;
    trace.tag = SolverTag::mode_oracle;
    trace.times.resize(static_cast<std::size_t>(n_steps) + 1);
    trace.pe.resize(static_cast<std::size_t>(n_steps) + 1);
    trace.times[0] = 0.0;
    trace.pe[0] = 1.0;

    auto rhs_qubit = [&](const std::vector<cd>& xR, const std::vector<cd>& xL) {
        cd s{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) s += gR[j] * xR[j] + gL[j] * xL[j];
        return cd{0.0, -1.0} * s;
    };

    for (int step = 0; step < n_steps; ++step) {
        // k1 at the step start (z-picture coincides with the state)
        const cd k1a = rhs_qubit(cR, cL);
        for (std::size_t j = 0; j < n; ++j) {
            k1R[j] = cd{0.0, -1.0} * std::conj(gR[j]) * a;
            k1L[j] = cd{0.0, -1.0} * std::conj(gL[j]) * a;
        }
        // k2 at half step
        cd ya = eha * (a + 0.5 * h * k1a);
        for (std::size_t j = 0; j < n; ++j) {
            yR[j] = eh[j] * (cR[j] + 0.5 * h * k1R[j]);
            yL[j] = eh[j] * (cL[j] + 0.5 * h * k1L[j]);
        }
        cd k2a = rhs_qubit(yR, yL) / eha;
        for (std::size_t j = 0; j < n; ++j) {
            k2R[j] = cd{0.0, -1.0} * std::conj(gR[j]) * ya / eh[j];
            k2L[j] = cd{0.0, -1.0} * std::conj(gL[j]) * ya / eh[j];
        }
        // k3 at half step
        ya = eha * (a + 0.5 * h * k2a);
        for (std::size_t j = 0; j < n; ++j) {
            yR[j] = eh[j] * (cR[j] + 0.5 * h * k2R[j]);
            yL[j] = eh[j] * (cL[j] + 0.5 * h * k2L[j]);
        }
        const cd k3a = rhs_qubit(yR, yL) / eha;
        for (std::size_t j = 0; j < n; ++j) {
            k3R[j] = cd{0.0, -1.0} * std::conj(gR[j]) * ya / eh[j];
            k3L[j] = cd{0.0, -1.0} * std::conj(gL[j]) * ya / eh[j];
        }
        // k4 at full step
        ya = efa * (a + h * k3a);
        for (std::size_t j = 0; j < n; ++j) {
            yR[j] = ef[j] * (cR[j] + h * k3R[j]);
            yL[j] = ef[j] * (cL[j] + h * k3L[j]);
        }
        const cd k4a = rhs_qubit(yR, yL) / efa;
        for (std::size_t j = 0; j < n; ++j) {
            k4R[j] = cd{0.0, -1.0} * std::conj(gR[j]) * ya / ef[j];
            k4L[j] = cd{0.0, -1.0} * std::conj(gL[j]) * ya / ef[j];
        }

        a = efa * (a + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a));
        for (std::size_t j = 0; j < n; ++j) {
            cR[j] = ef[j] * (cR[j] + (h / 6.0) * (k1R[j] + 2.0 * k2R[j] + 2.0 * k3R[j] + k4R[j]));
            cL[j] = ef[j] * (cL[j] + (h / 6.0) * (k1L[j] + 2.0 * k2L[j] + 2.0 * k3L[j] + k4L[j]));
        }

        trace.times[static_cast<std::size_t>(step) + 1] = (step + 1) * h;
        trace.pe[static_cast<std::size_t>(step) + 1] = std::norm(a);
    }
    return trace;
}

} // namespace giantatom
