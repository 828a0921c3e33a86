// fit.hpp — least-squares fit of the coupling landscape to (omega, gamma_e) samples
//
// Damped Gauss-Newton (Levenberg-style) with analytic Jacobians. Free
// parameters: gamma_peak, beta, T, c0, c1; the IDT center and finger count
// come from the initial guess.
//
// The delay enters as cos(omega T) with omega ~ 1e10 rad/s, so the cost is
// multimodal in T with basins only 2pi/omega ~ 0.2 ps wide: any percent-level
// initial T error lands in a wrong basin. Stage one therefore decouples the
// delay's two roles and fits the phase as T*(omega - omega_mid) + chi, where
// T sets only the pattern frequency (basin width 2pi/band-span, nanoseconds)
// and chi the band-center phase (2pi-periodic). The offset is then folded
// back into the nearest phase-consistent T and stage two polishes with the
// exact cos(omega T) model.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "giantatom/landscape.hpp"

namespace giantatom {

struct LandscapeSample {
    double omega = 0.0;    // rad/s
    double gamma_e = 0.0;  // rad/s
};

struct LandscapeFitReport {
    CouplingLandscape landscape;  // fitted parameters
    double residual_norm = 0.0;   // L2 norm of (model - sample)
    int iterations = 0;
    bool converged = false;
    // beta ~ 0 makes the cos(wT) term vanish, leaving T meaningless
    bool beta_identifiable = true;
    bool t_identifiable = true;
    // samples should span at least one modulation period 2pi/T of the guess
    bool span_covers_period = true;
};

namespace detail {

// parameter vector: (gamma_peak, beta, T, c0, c1 [, chi])
// decoupled mode: phase = T*(w - w_mid) + chi; exact mode: phase = w*T
struct LandscapeModel {
    IdtModel idt_shape;
    bool decoupled = false;
    double w_mid = 0.0;

    int dim() const { return decoupled ? 6 : 5; }

    double sinc2(double w) const {
        IdtModel m = idt_shape;
        m.gamma_peak = 1.0;
        return gamma_idt(m, w);
    }

    double phase(const Eigen::VectorXd& p, double w) const {
        const double T = std::max(p[2], 1e-15);
        return decoupled ? T * (w - w_mid) + p[5] : phase_mod(w, T);
    }

    double value(const Eigen::VectorXd& p, double w) const {
        return p[3] + p[4] * w + p[0] * sinc2(w) * (1.0 + p[1] * std::cos(phase(p, w)));
    }

    Eigen::VectorXd jacobian_row(const Eigen::VectorXd& p, double w) const {
        const double shape = sinc2(w);
        const double ph = phase(p, w);
        const double c = std::cos(ph), s = std::sin(ph);
        Eigen::VectorXd row(dim());
        row[0] = shape * (1.0 + p[1] * c);
        row[1] = p[0] * shape * c;
        row[2] = -p[0] * shape * p[1] * (decoupled ? w - w_mid : w) * s;
        row[3] = 1.0;
        row[4] = w;
        if (decoupled) row[5] = -p[0] * shape * p[1] * s;
        return row;
    }
};

struct LmResult {
    Eigen::VectorXd p;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline LmResult levenberg(const LandscapeModel& model, std::span<const LandscapeSample> samples,
                          Eigen::VectorXd p, const Eigen::VectorXd& ref, int max_iterations) {
    const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
    const int dim = model.dim();

    auto clamp_params = [&](Eigen::VectorXd& q) {
        q[0] = std::max(q[0], 0.0);
        q[1] = std::clamp(q[1], 0.0, 1.0);
        q[2] = std::max(q[2], 1e-15);
    };

    auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r) {
        for (Eigen::Index i = 0; i < n; ++i)
            r[i] = model.value(q, samples[static_cast<std::size_t>(i)].omega)
                   - samples[static_cast<std::size_t>(i)].gamma_e;
    };

    LmResult res;
    Eigen::VectorXd r(n), r_try(n);
    residuals(p, r);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    Eigen::MatrixXd J(n, dim);
    int iter = 0;
    bool converged = false;
    for (; iter < max_iterations && !converged; ++iter) {
        for (Eigen::Index i = 0; i < n; ++i)
            J.row(i) = model.jacobian_row(p, samples[static_cast<std::size_t>(i)].omega);
        // column scaling keeps the damped normal equations near unit diagonal
        Eigen::VectorXd scale(dim);
        for (int k = 0; k < dim; ++k) {
            const double cn = J.col(k).norm();
            scale[k] = cn > 0.0 ? 1.0 / cn : 1.0;
        }
        const Eigen::MatrixXd Js = J * scale.asDiagonal();
        const Eigen::MatrixXd A = Js.transpose() * Js;
        const Eigen::VectorXd g = Js.transpose() * r;

        bool stepped = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::MatrixXd Ad = A;
            for (int k = 0; k < dim; ++k) Ad(k, k) += lambda * A(k, k) + 1e-14;
            const Eigen::VectorXd dx = Ad.ldlt().solve(-g);
            Eigen::VectorXd p_try = p + scale.asDiagonal() * dx;
            clamp_params(p_try);
            residuals(p_try, r_try);
            const double cost_try = r_try.squaredNorm();
            if (cost_try <= cost * (1.0 + 1e-15)) {
                double rel_step = 0.0;
                for (int k = 0; k < std::min(dim, 5); ++k)
                    rel_step = std::max(rel_step, std::abs(p_try[k] - p[k]) / ref[k]);
                p = p_try;
                r = r_try;
                cost = cost_try;
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                if (rel_step < 1e-10) converged = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
        if (!stepped) converged = true;  // damping saturated: stationary point
    }
    res.p = p;
    res.cost = cost;
    res.iterations = iter;
    res.converged = converged;
    return res;
}

} // namespace detail

inline LandscapeFitReport fit_landscape(std::span<const LandscapeSample> samples,
                                        const CouplingLandscape& init,
                                        int max_iterations = 500) {
    if (samples.size() < 6)
        throw std::invalid_argument("fit_landscape: insufficient samples (need >= 6)");
    init.validate();

    double wmin = samples[0].omega, wmax = samples[0].omega, wsum = 0.0, gmax = 0.0;
    for (const auto& s : samples) {
        wmin = std::min(wmin, s.omega);
        wmax = std::max(wmax, s.omega);
        wsum += s.omega;
        gmax = std::max(gmax, std::abs(s.gamma_e));
    }
    const double wmid = wsum / static_cast<double>(samples.size());

    LandscapeFitReport report;
    report.span_covers_period = (wmax - wmin) >= two_pi / init.delay;

    Eigen::VectorXd ref(5);
    ref << std::max(init.idt.gamma_peak, 0.1 * gmax), std::max(init.beta, 0.1), init.delay,
        std::max(std::abs(init.loss.c0), 1e-3 * gmax), std::max(std::abs(init.loss.c1), 1e-3 * gmax / wmax);

    // stage one: decoupled pattern frequency and band-center phase
    detail::LandscapeModel loose{init.idt, true, wmid};
    Eigen::VectorXd p0(6);
    p0 << init.idt.gamma_peak, init.beta, init.delay, init.loss.c0, init.loss.c1,
        phase_mod(wmid, init.delay);
    const auto stage1 = detail::levenberg(loose, samples, p0, ref, max_iterations);

    // fold chi into the nearest delay satisfying w_mid*T = chi (mod 2pi)
    detail::LandscapeModel exact{init.idt, false, wmid};
    Eigen::VectorXd p1 = stage1.p.head(5);
    {
        const double t1 = stage1.p[2];
        double dphi = std::fmod(stage1.p[5] - phase_mod(wmid, t1), two_pi);
        if (dphi > two_pi / 2.0) dphi -= two_pi;
        if (dphi < -two_pi / 2.0) dphi += two_pi;
        p1[2] = std::max(t1 + dphi / wmid, 1e-15);
    }
    const auto stage2 = detail::levenberg(exact, samples, p1, ref, max_iterations);

    CouplingLandscape out = init;
    out.idt.gamma_peak = stage2.p[0];
    out.beta = stage2.p[1];
    out.delay = stage2.p[2];
    out.loss.c0 = stage2.p[3];
    out.loss.c1 = stage2.p[4];

    report.landscape = out;
    report.residual_norm = std::sqrt(stage2.cost);
    report.iterations = stage1.iterations + stage2.iterations;
    report.converged = stage2.converged;
    report.beta_identifiable =
        stage2.p[1] > 1e-6 && stage2.p[1] * stage2.p[0] > 1e-9 * std::max(gmax, 1e-300);
    report.t_identifiable = report.beta_identifiable;
    return report;
}

} // namespace giantatom
