// csv.hpp — deterministic CSV formatting (17 significant digits, no locale)

#pragma once

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "giantatom/relaxation.hpp"
#include "giantatom/stateops.hpp"

namespace giantatom {

inline std::string fmt17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

struct CsvWriter {
    std::string body;

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) body += ',';
            body += cols[i];
        }
        body += '\n';
    }

    void comment(const std::string& text) { body += "# " + text + "\n"; }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body += ',';
            body += cells[i];
        }
        body += '\n';
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + path);
        out << body;
        if (!out) throw std::runtime_error("write failed: " + path);
    }
};

inline void write_trace_csv(const std::string& path, const RelaxationTrace& trace) {
    CsvWriter w;
    w.header({"t_ns", "pe", "solver"});
    const std::string tag = solver_name(trace.tag);
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        w.row({fmt17(s_to_ns(trace.times[i])), fmt17(trace.pe[i]), tag});
    w.save(path);
}

// 8 real fields, re/im of each entry in row-major order
inline std::string rho_csv_fields(const DensityMatrix2& rho) {
    std::string s;
    for (const auto& e : {rho.rho00, rho.rho01, rho.rho10, rho.rho11}) {
        if (!s.empty()) s += ',';
        s += fmt17(e.real()) + ',' + fmt17(e.imag());
    }
    return s;
}

} // namespace giantatom
