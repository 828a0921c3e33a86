// driven.hpp — driven giant atom under frequency-dependent dissipation
//
// Rotating frame at the drive: H = (Delta/2) sigma_z + (Omega/2) sigma_x,
// Delta = w_d - w_q (basis and signs per stateops.hpp). Dressed states |+->
// split by Omega_R = sqrt(Omega^2 + Delta^2); the lowering operator
// decomposes as
//
//   sigma_- = cos^2(t/2) S_-  -  sin^2(t/2) S_+  +  (sin t / 2) Sz_d
//
// with mixing angle t (cos t = Delta/Omega_R). Each piece samples the decay
// landscape at its emission frequency: w_d - Omega_R, w_d + Omega_R, w_d.
// The default (full) generator uses the single Lindblad operator
//
//   L = sqrt(G-) S-  -  sqrt(G+) S+  +  sqrt(Gphi) Sz_d,
//
// the completely positive completion of the three channels that collapses to
// D[sqrt(gamma_e) sigma_-] exactly when the landscape is flat. The secular
// option splits the three channels into independent dissipators instead;
// that is only meaningful for Omega_R well above every rate.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "giantatom/landscape.hpp"
#include "giantatom/stateops.hpp"

namespace giantatom {

struct DriveSpec {
    double rabi_omega = 0.0;   // Omega, rad/s
    double detuning = 0.0;     // Delta = w_d - w_q, rad/s
    double duration = 0.0;     // s
    double qubit_omega = 0.0;  // w_q, rad/s

    double omega_r() const { return std::hypot(rabi_omega, detuning); }
    double drive_omega() const { return qubit_omega + detuning; }

    void validate() const {
        if (rabi_omega < 0.0) throw std::invalid_argument("DriveSpec: rabi_omega < 0");
        if (duration < 0.0) throw std::invalid_argument("DriveSpec: duration < 0");
        if (qubit_omega <= 0.0) throw std::invalid_argument("DriveSpec: qubit_omega <= 0");
    }
};

struct DressedRates {
    double rate_minus = 0.0;    // Gamma_-, emission at w_d - Omega_R
    double rate_plus = 0.0;     // Gamma_+, emission at w_d + Omega_R
    double rate_phi = 0.0;      // carrier/dephasing channel at w_d
    double mixing_theta = 0.0;  // in [0, pi]

    double total() const { return rate_minus + rate_plus + rate_phi; }

    void validate() const {
        if (rate_minus < 0.0 || rate_plus < 0.0 || rate_phi < 0.0)
            throw std::invalid_argument("DressedRates: negative rate");
        if (mixing_theta < 0.0 || mixing_theta > two_pi / 2.0)
            throw std::invalid_argument("DressedRates: mixing_theta out of [0, pi]");
    }
};

// Steady-state excited population on resonance, Pe = W^2/(2 W^2 + g^2).
inline double steady_pe_resonant(double omega_rabi, double gamma_e) {
    if (omega_rabi == 0.0 && gamma_e == 0.0)
        throw std::invalid_argument("steady_pe_resonant: Omega and gamma_e both zero");
    const double w2 = omega_rabi * omega_rabi;
    return w2 / (2.0 * w2 + gamma_e * gamma_e);
}

// Weak-drive limit Pe ~ W^2/g^2 (valid for Omega well below gamma_e).
inline double weak_drive_pe(double omega_rabi, double gamma_e) {
    if (gamma_e == 0.0) throw std::domain_error("weak_drive_pe: gamma_e is zero");
    return (omega_rabi * omega_rabi) / (gamma_e * gamma_e);
}

inline bool weak_drive_valid(double omega_rabi, double gamma_e) {
    return omega_rabi <= gamma_e / 3.0;
}

inline DressedRates dressed_rates(const DriveSpec& drive, const CouplingLandscape& land) {
    drive.validate();
    const double wr = drive.omega_r();
    const double wd = drive.drive_omega();
    const double theta = std::atan2(drive.rabi_omega, drive.detuning);
    const double c2 = std::cos(0.5 * theta) * std::cos(0.5 * theta);
    const double s2 = std::sin(0.5 * theta) * std::sin(0.5 * theta);
    const double st = std::sin(theta);
    DressedRates r;
    r.mixing_theta = theta;
    r.rate_minus = gamma_eff(land, wd - wr) * c2 * c2;
    r.rate_plus = gamma_eff(land, wd + wr) * s2 * s2;
    r.rate_phi = gamma_eff(land, wd) * st * st / 4.0;
    return r;
}

struct GeneratorOptions {
    bool secular = false;          // default: full generator
    double extra_dephasing = 0.0;  // extra lab-frame pure-dephasing rate, rad/s
};

namespace detail {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using cd = std::complex<double>;

inline Mat2 sigma_z() { return (Mat2() << 1, 0, 0, -1).finished(); }
inline Mat2 sigma_x() { return (Mat2() << 0, 1, 1, 0).finished(); }

inline Mat2 hamiltonian(const DriveSpec& d) {
    return 0.5 * d.detuning * sigma_z() + 0.5 * d.rabi_omega * sigma_x();
}

struct DressedOps {
    Mat2 lower;  // S- = |-><+|
    Mat2 raise;  // S+
    Mat2 sz;     // |+><+| - |-><-|
};

inline DressedOps dressed_ops(double theta) {
    const double cp = std::cos(0.5 * theta), sp = std::sin(0.5 * theta);
    Eigen::Vector2cd plus, minus;
    plus << cp, sp;
    minus << -sp, cp;
    DressedOps ops;
    ops.lower = minus * plus.adjoint();
    ops.raise = ops.lower.adjoint();
    ops.sz = plus * plus.adjoint() - minus * minus.adjoint();
    return ops;
}

// Lindblad operators of the generator (one combined operator in full mode,
// three in secular mode), plus the optional extra dephasing channel.
inline std::vector<Mat2> lindblad_ops(const DressedRates& rates, const GeneratorOptions& opts) {
    const DressedOps d = dressed_ops(rates.mixing_theta);
    std::vector<Mat2> ops;
    if (opts.secular) {
        ops.push_back(std::sqrt(rates.rate_minus) * d.lower);
        ops.push_back(std::sqrt(rates.rate_plus) * d.raise);
        ops.push_back(std::sqrt(rates.rate_phi) * d.sz);
    } else {
        ops.push_back(std::sqrt(rates.rate_minus) * d.lower
                      - std::sqrt(rates.rate_plus) * d.raise
                      + std::sqrt(rates.rate_phi) * d.sz);
    }
    if (opts.extra_dephasing > 0.0)
        ops.push_back(std::sqrt(0.5 * opts.extra_dephasing) * sigma_z());
    return ops;
}

inline Mat2 apply_generator(const Mat2& rho, const Mat2& H, const std::vector<Mat2>& Ls) {
    const cd i_unit{0.0, 1.0};
    Mat2 out = -i_unit * (H * rho - rho * H);
    for (const Mat2& L : Ls) {
        const Mat2 Ld = L.adjoint();
        const Mat2 LdL = Ld * L;
        out += L * rho * Ld - 0.5 * (LdL * rho + rho * LdL);
    }
    return out;
}

// row-major vectorization: vec(rho)[2*i + j] = rho(i, j)
inline Mat4 superoperator(const Mat2& H, const std::vector<Mat2>& Ls) {
    Mat4 S = Mat4::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Mat2 basis = Mat2::Zero();
            basis(i, j) = 1.0;
            const Mat2 mapped = apply_generator(basis, H, Ls);
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) S(2 * k + l, 2 * i + j) = mapped(k, l);
        }
    return S;
}

inline Mat2 to_matrix(const DensityMatrix2& rho) {
    Mat2 m;
    m << rho.rho00, rho.rho01, rho.rho10, rho.rho11;
    return m;
}

inline DensityMatrix2 from_matrix(const Mat2& m) {
    return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

} // namespace detail

// Null vector of the 4x4 Liouvillian, normalized to unit trace. Refuses when
// the zero eigenvalue is not isolated (e.g. all rates zero: any mixture of
// dressed projectors is stationary).
inline DensityMatrix2 steady_state(const DriveSpec& drive, const DressedRates& rates,
                                   const GeneratorOptions& opts = {}) {
    drive.validate();
    rates.validate();
    if (rates.total() + opts.extra_dephasing <= 0.0)
        throw std::invalid_argument("steady_state: all rates zero, no unique steady state");

    const detail::Mat2 H = detail::hamiltonian(drive);
    const auto Ls = detail::lindblad_ops(rates, opts);
    const detail::Mat4 S = detail::superoperator(H, Ls);

    Eigen::ComplexEigenSolver<detail::Mat4> solver(S);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("steady_state: eigensolver failed");
    const auto& vals = solver.eigenvalues();

    int i_min = 0, i_second = -1;
    for (int i = 1; i < 4; ++i)
        if (std::abs(vals[i]) < std::abs(vals[i_min])) i_min = i;
    for (int i = 0; i < 4; ++i) {
        if (i == i_min) continue;
        if (i_second < 0 || std::abs(vals[i]) < std::abs(vals[i_second])) i_second = i;
    }
    const double norm = S.norm();
    if (std::abs(vals[i_min]) > 1e-9 * norm)
        throw std::runtime_error("steady_state: no eigenvalue near zero");
    if (std::abs(vals[i_second]) < 1e-9 * norm)
        throw std::invalid_argument("steady_state: degenerate steady state (second zero eigenvalue)");

    const Eigen::Vector4cd v = solver.eigenvectors().col(i_min);
    detail::Mat2 rho;
    rho << v[0], v[1], v[2], v[3];
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-300)
        throw std::runtime_error("steady_state: traceless null vector");
    rho /= tr;

    // residual check against the generator itself
    Eigen::Vector4cd vec;
    vec << rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1);
    if ((S * vec).norm() > 1e-9 * std::max(norm, 1.0))
        throw std::runtime_error("steady_state: residual too large");
    return detail::from_matrix(rho);
}

struct LindbladTrajectory {
    std::vector<double> times;
    std::vector<DensityMatrix2> states;
    double dt_used = 0.0;
};

// Fixed-step RK4 master-equation evolution over drive.duration. The
// trajectory is sampled at most `max_samples` times (ends always included).
inline LindbladTrajectory lindblad_evolve(const DensityMatrix2& rho0, const DriveSpec& drive,
                                          const DressedRates& rates, double dt,
                                          const GeneratorOptions& opts = {},
                                          std::size_t max_samples = 257) {
    drive.validate();
    rates.validate();
    rho0.validate();
    const double scale = std::max(drive.omega_r(), rates.total() + opts.extra_dephasing);
    if (scale > 0.0 && dt > 0.01 / scale) {
        std::ostringstream os;
        os << "lindblad_evolve: dt = " << dt << " s too large; need dt <= " << 0.01 / scale
           << " s (= 0.01/max(Omega_R, total rate))";
        throw std::invalid_argument(os.str());
    }
    if (dt <= 0.0) throw std::invalid_argument("lindblad_evolve: dt <= 0");

    const detail::Mat2 H = detail::hamiltonian(drive);
    const auto Ls = detail::lindblad_ops(rates, opts);

    LindbladTrajectory traj;
    if (drive.duration == 0.0) {
        traj.times = {0.0};
        traj.states = {rho0};
        traj.dt_used = dt;
        return traj;
    }
    const long n_steps = std::max(1L, static_cast<long>(std::ceil(drive.duration / dt - 1e-9)));
    const double h = drive.duration / static_cast<double>(n_steps);
    const long stride = std::max(1L, n_steps / static_cast<long>(std::max<std::size_t>(max_samples, 2) - 1));

    detail::Mat2 rho = detail::to_matrix(rho0);
    traj.dt_used = h;
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);
    for (long s = 0; s < n_steps; ++s) {
        const detail::Mat2 k1 = detail::apply_generator(rho, H, Ls);
        const detail::Mat2 k2 = detail::apply_generator(rho + 0.5 * h * k1, H, Ls);
        const detail::Mat2 k3 = detail::apply_generator(rho + 0.5 * h * k2, H, Ls);
        const detail::Mat2 k4 = detail::apply_generator(rho + h * k3, H, Ls);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((s + 1) % stride == 0 || s + 1 == n_steps) {
            traj.times.push_back(static_cast<double>(s + 1) * h);
            traj.states.push_back(detail::from_matrix(rho));
        }
    }
    return traj;
}

// default step from the design rule dt = min(0.005/Omega_R, 0.005/rate_total)
inline double default_evolve_dt(const DriveSpec& drive, const DressedRates& rates,
                                const GeneratorOptions& opts = {}) {
    const double scale = std::max(drive.omega_r(), rates.total() + opts.extra_dephasing);
    if (scale <= 0.0) return drive.duration > 0.0 ? drive.duration / 100.0 : 1e-9;
    return 0.005 / scale;
}

} // namespace giantatom
