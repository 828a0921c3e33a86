// relaxation.hpp — undriven giant-atom decay: backflow series, delay-equation
// integrator, effective-rate extraction
//
// Physics: the excited-state amplitude obeys the two-point delay equation
//
//     v'(t) = -(k + k_in) v(t) - k*beta*e^{i w_q T} v(t - T),   v(0) = 1,
//
// written here for the slowly-varying envelope v (the fast e^{-i w_q t}
// carrier factors out; |v| = |a|). Its solution is the backflow series
//
//     v(t) = sum_n  (-k beta (t-nT))^n / n! * e^{i n w_q T} e^{-(k+k_in)(t-nT)}
//
// truncated by the Heaviside at n <= t/T. Rate conventions:
//   amplitude_half_rates (default):  k = gamma/2, k_in = gamma_in/2
//     -> early-time population rate gamma + gamma_in, matching the
//        interference formula for gamma_eff in the Markovian limit.
//   population_rates:                k = gamma,   k_in = gamma_in
//     -> literal printed form of the series; population rates double.

#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "giantatom/common.hpp"
#include "giantatom/landscape.hpp"

namespace giantatom {

enum class RateConvention { amplitude_half_rates, population_rates };

struct RelaxationParams {
    double omega_q = 0.0;   // rad/s
    double gamma = 0.0;     // extra decay from the waveguide coupling, rad/s
    double gamma_in = 0.0;  // intrinsic decay, rad/s
    double beta = 0.0;      // amplitude transmittance
    double delay = 0.0;     // propagation time T, s

    double retardation() const { return gamma * delay; }  // the gamma*T parameter

    void validate() const {
        if (omega_q <= 0.0) throw std::invalid_argument("RelaxationParams: omega_q <= 0");
        if (gamma < 0.0 || gamma_in < 0.0) throw std::invalid_argument("RelaxationParams: negative rate");
        if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("RelaxationParams: beta out of [0,1]");
        if (delay <= 0.0) throw std::invalid_argument("RelaxationParams: delay <= 0");
    }
};

// derive the relaxation inputs at a given qubit frequency
inline RelaxationParams relaxation_params_at(const CouplingLandscape& land, double omega_q) {
    land.require_in_band(omega_q);
    return {omega_q, land.coupling(omega_q), land.intrinsic(omega_q), land.beta, land.delay};
}

enum class SolverTag { series, dde, mode_oracle };

inline const char* solver_name(SolverTag t) {
    switch (t) {
        case SolverTag::series: return "series";
        case SolverTag::dde: return "dde";
        case SolverTag::mode_oracle: return "mode_oracle";
    }
    return "?";
}

struct RelaxationTrace {
    std::vector<double> times;  // s, increasing
    std::vector<double> pe;     // populations
    SolverTag tag = SolverTag::series;

    void validate(double tol = 1e-12) const {
        if (times.size() != pe.size()) throw std::invalid_argument("RelaxationTrace: length mismatch");
        if (!times.empty() && times.front() == 0.0 && std::abs(pe.front() - 1.0) > tol)
            throw std::invalid_argument("RelaxationTrace: pe(0) != 1");
        for (std::size_t i = 0; i < pe.size(); ++i) {
            if (i + 1 < times.size() && !(times[i] < times[i + 1]))
                throw std::invalid_argument("RelaxationTrace: times not increasing");
            if (pe[i] < -tol || pe[i] > 1.0 + tol)
                throw std::invalid_argument("RelaxationTrace: pe out of [0,1]");
        }
    }
};

namespace detail {

struct ConventionRates {
    double k = 0.0;     // amplitude rate from waveguide coupling
    double k_in = 0.0;  // amplitude rate from intrinsic loss
};

inline ConventionRates convention_rates(const RelaxationParams& p, RateConvention conv) {
    if (conv == RateConvention::amplitude_half_rates) return {0.5 * p.gamma, 0.5 * p.gamma_in};
    return {p.gamma, p.gamma_in};
}

} // namespace detail

// Lab-frame amplitude of the backflow series at one time. Terms are
// accumulated in log-magnitude form so n! and (k beta tau)^n never overflow
// on their own (relevant for t >> 100 T).
inline std::complex<double> amplitude_series(const RelaxationParams& p, double t,
                                             RateConvention conv = RateConvention::amplitude_half_rates) {
    p.validate();
    if (t < 0.0) throw std::domain_error("amplitude_series: t < 0");
    const auto [k, k_in] = detail::convention_rates(p, conv);
    const double ktot = k + k_in;
    const double kb = k * p.beta;
    const int n_max = static_cast<int>(std::floor(t / p.delay + 1e-12));
    std::complex<double> sum{0.0, 0.0};
    for (int n = 0; n <= n_max; ++n) {
        const double tau = t - n * p.delay;
        if (tau < 0.0) continue;
        if (n > 0 && kb * tau == 0.0) continue;  // (kb tau)^n vanishes identically
        const double log_mag =
            (n == 0 ? 0.0 : n * std::log(kb * tau) - std::lgamma(n + 1.0)) - ktot * tau;
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        sum += sign * std::exp(log_mag) * std::polar(1.0, -p.omega_q * tau);
    }
    return sum;
}

inline RelaxationTrace pe_series(const RelaxationParams& p, std::span<const double> times,
                                 RateConvention conv = RateConvention::amplitude_half_rates) {
    RelaxationTrace trace;
    trace.tag = SolverTag::series;
    trace.times.assign(times.begin(), times.end());
    trace.pe.reserve(times.size());
    double prev = -1.0;
    for (double t : times) {
        if (t < 0.0 || t <= prev)
            throw std::domain_error("pe_series: times must be nonnegative and increasing");
        prev = t;
        trace.pe.push_back(std::norm(amplitude_series(p, t, conv)));
    }
    return trace;
}

struct DdeResult {
    RelaxationTrace trace;
    double dt_used = 0.0;  // dt after rounding down so that delay/dt is integer
};

// Method-of-steps integration of the envelope delay equation with fixed-step
// RK4. Steps divide the delay exactly, so delayed grid lookups are exact;
// the half-step stage values of the delayed term come from cubic Hermite
// interpolation of the stored segment (endpoint derivatives evaluated in the
// segment's own delay regime, which keeps the t = nT kinks exact).
inline DdeResult dde_integrate(const RelaxationParams& p, double t_max, double dt,
                               RateConvention conv = RateConvention::amplitude_half_rates) {
    p.validate();
    if (t_max < 0.0) throw std::domain_error("dde_integrate: t_max < 0");
    if (dt <= 0.0) throw std::invalid_argument("dde_integrate: dt <= 0");
    if (dt > p.delay) throw std::invalid_argument("dde_integrate: dt > delay");

    const int m = static_cast<int>(std::ceil(p.delay / dt - 1e-9));
    const double h = p.delay / m;
    const auto [k, k_in] = detail::convention_rates(p, conv);
    const double ktot = k + k_in;
    // -k beta e^{i w_q T}; the reduced phase keeps e^{i w_q T} accurate
    const std::complex<double> cdel =
        -k * p.beta * std::polar(1.0, phase_mod(p.omega_q, p.delay));

    const int n_steps = static_cast<int>(std::floor(t_max / h + 1e-9));
    std::vector<std::complex<double>> a(static_cast<std::size_t>(n_steps) + 1);
    a[0] = {1.0, 0.0};

    auto delayed_mid = [&](int j) {
        // value of a at (j + 1/2) h from the stored segment [j, j+1]
        const bool active = j >= m;  // does THAT segment itself feel the delay
        const std::complex<double> y0 = a[static_cast<std::size_t>(j)];
        const std::complex<double> y1 = a[static_cast<std::size_t>(j) + 1];
        const std::complex<double> d0 = -ktot * y0 + (active ? cdel * a[static_cast<std::size_t>(j - m)] : std::complex<double>{});
        const std::complex<double> d1 = -ktot * y1 + (active ? cdel * a[static_cast<std::size_t>(j + 1 - m)] : std::complex<double>{});
        return 0.5 * (y0 + y1) + (h / 8.0) * (d0 - d1);
    };

    for (int s = 0; s < n_steps; ++s) {
        const bool active = s >= m;  // delay term participates in [sh, (s+1)h]
        const std::complex<double> del0 = active ? a[static_cast<std::size_t>(s - m)] : std::complex<double>{};
        const std::complex<double> del_mid = active ? delayed_mid(s - m) : std::complex<double>{};
        const std::complex<double> del1 = active ? a[static_cast<std::size_t>(s - m) + 1] : std::complex<double>{};

        const std::complex<double> y = a[static_cast<std::size_t>(s)];
        const std::complex<double> k1 = -ktot * y + cdel * del0;
        const std::complex<double> k2 = -ktot * (y + 0.5 * h * k1) + cdel * del_mid;
        const std::complex<double> k3 = -ktot * (y + 0.5 * h * k2) + cdel * del_mid;
        const std::complex<double> k4 = -ktot * (y + h * k3) + cdel * del1;
        a[static_cast<std::size_t>(s) + 1] = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    DdeResult out;
    out.dt_used = h;
    out.trace.tag = SolverTag::dde;
    out.trace.times.resize(a.size());
    out.trace.pe.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.trace.times[i] = static_cast<double>(i) * h;
        out.trace.pe[i] = std::norm(a[i]);
    }
    return out;
}

struct EffectiveRate {
    double rate = 0.0;         // rad/s, negated slope of ln pe
    std::size_t n_samples = 0;
    bool early_window = false;  // t_lo < 3T where T was supplied
};

inline EffectiveRate effective_rate(const RelaxationTrace& trace, double t_lo, double t_hi,
                                    double delay_for_flag = 0.0) {
    if (!(t_lo < t_hi)) throw std::invalid_argument("effective_rate: empty window");
    std::vector<double> ts, ln_pe;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const double t = trace.times[i];
        if (t < t_lo || t > t_hi) continue;
        if (trace.pe[i] <= 1e-14) {
            std::ostringstream os;
            os << "effective_rate: pe underflow (" << trace.pe[i] << ") at t = " << s_to_ns(t) << " ns";
            throw std::domain_error(os.str());
        }
        ts.push_back(t);
        ln_pe.push_back(std::log(trace.pe[i]));
    }
    if (ts.size() < 5) throw std::invalid_argument("effective_rate: window too short (< 5 samples)");
    EffectiveRate out;
    out.rate = -fit_line(ts, ln_pe).slope;
    out.n_samples = ts.size();
    out.early_window = delay_for_flag > 0.0 && t_lo < 3.0 * delay_for_flag;
    return out;
}

} // namespace giantatom
