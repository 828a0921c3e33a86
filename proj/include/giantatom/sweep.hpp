// sweep.hpp — grid definitions and the steady-state coherence/purity map

#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "giantatom/driven.hpp"

namespace giantatom {

struct Axis {
    std::string name;  // e.g. "rabi_mhz", "delta_mhz", "omega_q_ghz", "time_ns"
    std::string unit;  // display unit carried in the name suffix
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    double value(int i) const {
        if (count <= 1) return start;
        return start + (stop - start) * static_cast<double>(i) / (count - 1);
    }

    void validate() const {
        if (count < 1) throw std::invalid_argument("Axis '" + name + "': count < 1");
        if (!(start <= stop)) throw std::invalid_argument("Axis '" + name + "': start > stop");
    }
};

struct SweepGrid {
    std::vector<Axis> axes;
    std::map<std::string, std::vector<double>> results;  // row-major over axes
    std::vector<std::string> mask;                       // empty string = valid cell

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
        return n;
    }

    void validate() const {
        for (const auto& a : axes) a.validate();
        for (const auto& [name, vals] : results)
            if (vals.size() != size())
                throw std::invalid_argument("SweepGrid: result '" + name + "' does not match axes");
        if (!mask.empty() && mask.size() != size())
            throw std::invalid_argument("SweepGrid: mask does not match axes");
    }
};

// Steady-state map over (Omega, Delta). Cells whose sidebands leave the
// landscape band are masked with the error text; the map always completes.
// Grid points are independent; `threads` workers fill disjoint index strides
// so the result is identical for any thread count.
inline SweepGrid map_coherence_purity(const Axis& rabi_axis, const Axis& delta_axis,
                                      double qubit_omega, const CouplingLandscape& land,
                                      const GeneratorOptions& opts = {}, int threads = 1) {
    rabi_axis.validate();
    delta_axis.validate();
    land.validate();

    SweepGrid grid;
    grid.axes = {rabi_axis, delta_axis};
    const std::size_t total = grid.size();
    for (const char* q : {"sx", "sy", "sz", "pe", "purity"})
        grid.results[q] = std::vector<double>(total, std::numeric_limits<double>::quiet_NaN());
    grid.mask.assign(total, std::string{});

    auto* sx = &grid.results["sx"];
    auto* sy = &grid.results["sy"];
    auto* sz = &grid.results["sz"];
    auto* pe = &grid.results["pe"];
    auto* pu = &grid.results["purity"];

    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t idx = begin; idx < total; idx += step) {
            const int i = static_cast<int>(idx) / delta_axis.count;
            const int j = static_cast<int>(idx) % delta_axis.count;
            DriveSpec drive{mhz_to_rad(rabi_axis.value(i)), mhz_to_rad(delta_axis.value(j)),
                            0.0, qubit_omega};
            try {
                const DressedRates rates = dressed_rates(drive, land);
                const DensityMatrix2 rho = steady_state(drive, rates, opts);
                const BlochVector r = bloch_from_rho(rho);
                (*sx)[idx] = r.rx;
                (*sy)[idx] = r.ry;
                (*sz)[idx] = r.rz;
                (*pe)[idx] = rho.pe();
                (*pu)[idx] = purity(rho);
            } catch (const std::exception& e) {
                grid.mask[idx] = e.what();
            }
        }
    };

    const int n_workers = std::max(1, threads);
    if (n_workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w)
            pool.emplace_back(work, static_cast<std::size_t>(w), static_cast<std::size_t>(n_workers));
        for (auto& th : pool) th.join();
    }
    return grid;
}

} // namespace giantatom
