// stateops.hpp — two-level density-matrix algebra and simulated tomography
//
// Conventions (used by every module):
//   basis index 0 = |e> (excited), index 1 = |g> (ground)
//   rx =  2 Re rho01
//   ry = -2 Im rho01
//   rz =  rho00 - rho11        (rz = +1 for the excited state)
// so sigma_- = |g><e| lowers index 0 into index 1.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "giantatom/common.hpp"

namespace giantatom {

struct BlochVector {
    double rx = 0.0;
    double ry = 0.0;
    double rz = 0.0;

    double norm2() const { return rx * rx + ry * ry + rz * rz; }
};

struct DensityMatrix2 {
    std::complex<double> rho00{0.0, 0.0};
    std::complex<double> rho01{0.0, 0.0};
    std::complex<double> rho10{0.0, 0.0};
    std::complex<double> rho11{0.0, 0.0};

    static DensityMatrix2 excited() { return {{1, 0}, {0, 0}, {0, 0}, {0, 0}}; }
    static DensityMatrix2 ground() { return {{0, 0}, {0, 0}, {0, 0}, {1, 0}}; }
    static DensityMatrix2 maximally_mixed() { return {{0.5, 0}, {0, 0}, {0, 0}, {0.5, 0}}; }

    std::complex<double> trace() const { return rho00 + rho11; }
    double pe() const { return rho00.real(); }

    // eigenvalues of the Hermitian part, ascending
    std::array<double, 2> eigenvalues() const {
        const double tr = (rho00 + rho11).real();
        const double d = 0.5 * (rho00 - rho11).real();
        const double off = 0.5 * std::abs(rho01 + std::conj(rho10));
        const double rad = std::sqrt(d * d + off * off);
        return {0.5 * tr - rad, 0.5 * tr + rad};
    }

    void validate(double tol = 1e-9) const {
        if (std::abs(rho10 - std::conj(rho01)) > tol)
            throw std::invalid_argument("DensityMatrix2: not Hermitian");
        if (std::abs(trace() - 1.0) > 1e-12 + tol)
            throw std::invalid_argument("DensityMatrix2: trace != 1");
        if (eigenvalues()[0] < -1e-12 - tol)
            throw std::invalid_argument("DensityMatrix2: negative eigenvalue");
    }
};

inline BlochVector bloch_from_rho(const DensityMatrix2& rho) {
    rho.validate();
    return {2.0 * rho.rho01.real(), -2.0 * rho.rho01.imag(), (rho.rho00 - rho.rho11).real()};
}

inline DensityMatrix2 rho_from_bloch(const BlochVector& r) {
    if (r.norm2() > 1.0 + 1e-12)
        throw std::invalid_argument("rho_from_bloch: |r| > 1");
    DensityMatrix2 rho;
    rho.rho00 = {0.5 * (1.0 + r.rz), 0.0};
    rho.rho11 = {0.5 * (1.0 - r.rz), 0.0};
    rho.rho01 = {0.5 * r.rx, -0.5 * r.ry};
    rho.rho10 = std::conj(rho.rho01);
    return rho;
}

// Tr rho^2 = (1 + |r|^2)/2
inline double purity(const DensityMatrix2& rho) {
    rho.validate();
    const BlochVector r = {2.0 * rho.rho01.real(), -2.0 * rho.rho01.imag(),
                           (rho.rho00 - rho.rho11).real()};
    return 0.5 * (1.0 + r.norm2());
}

struct TomographyResult {
    BlochVector estimate;
    std::array<double, 3> std_error{0.0, 0.0, 0.0};
};

// Projective tomography with finite shots per axis: each axis i draws
// `shots` Bernoulli outcomes with p = (1 + r_i)/2 and returns
// r_hat = 2 p_hat - 1 with the binomial standard error. Deterministic in
// the seed.
inline TomographyResult sample_tomography(const DensityMatrix2& rho, std::uint64_t shots,
                                          std::uint64_t seed) {
    if (shots == 0) throw std::domain_error("sample_tomography: shots must be >= 1");
    const BlochVector r = bloch_from_rho(rho);
    const std::array<double, 3> truth{r.rx, r.ry, r.rz};
    SplitMix64 rng(seed);
    TomographyResult out;
    std::array<double*, 3> dst{&out.estimate.rx, &out.estimate.ry, &out.estimate.rz};
    for (int axis = 0; axis < 3; ++axis) {
        const double p = 0.5 * (1.0 + truth[static_cast<std::size_t>(axis)]);
        std::uint64_t ups = 0;
        for (std::uint64_t s = 0; s < shots; ++s)
            if (rng.uniform01() < p) ++ups;
        const double phat = static_cast<double>(ups) / static_cast<double>(shots);
        *dst[static_cast<std::size_t>(axis)] = 2.0 * phat - 1.0;
        out.std_error[static_cast<std::size_t>(axis)] =
            2.0 * std::sqrt(phat * (1.0 - phat) / static_cast<double>(shots));
    }
    return out;
}

} // namespace giantatom
