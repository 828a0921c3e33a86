// common.hpp — shared constants, unit helpers, RNG, small statistics

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace giantatom {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// All internal quantities are angular (rad/s, s). The CLI and config layer
// speak in f = omega/2pi units (MHz, GHz) and ns; conversions live here so
// the 2pi boundary exists in exactly one place.
constexpr double mhz_to_rad(double f_mhz) { return two_pi * 1e6 * f_mhz; }
constexpr double ghz_to_rad(double f_ghz) { return two_pi * 1e9 * f_ghz; }
constexpr double rad_to_mhz(double w) { return w / (two_pi * 1e6); }
constexpr double rad_to_ghz(double w) { return w / (two_pi * 1e9); }
constexpr double ns_to_s(double t_ns) { return t_ns * 1e-9; }
constexpr double s_to_ns(double t) { return t * 1e9; }

inline double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

// SplitMix64 (Steele/Lea/Flood 2014; constants as published). Used for
// tomography sampling and test-data generation; bit-stable everywhere.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit resolution
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Least-squares slope/intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least 2 matching samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("pearson_correlation: need matching samples");
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) { ma += a[i]; mb += b[i]; }
    ma /= n; mb /= n;
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da; sbb += db * db; sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw std::invalid_argument("pearson_correlation: constant input");
    return sab / std::sqrt(saa * sbb);
}

} // namespace giantatom
