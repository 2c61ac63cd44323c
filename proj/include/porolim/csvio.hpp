#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "porolim/diagnostics.hpp"
#include "porolim/errors.hpp"
#include "porolim/grid.hpp"
#include "porolim/solver.hpp"
#include "porolim/transforms.hpp"

namespace porolim {

/// 17-significant-digit decimal, enough to round-trip a double.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Compact time label for file names ("0.01", not "1e-02").
inline std::string time_label(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open output file '" + path + "'");
    return out;
}

/// Snapshot CSV: header x,u,p,p_g; pressure columns empty when the state
/// carries no reconstruction.
inline void write_snapshot_csv(const std::string& path, const SimState& s,
                               const Grid& grid) {
    auto out = open_out(path);
    out << "x,u,p,p_g\n";
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        out << fmt17(grid.centers[i]) << "," << fmt17(s.u[i]) << ",";
        if (i < s.p.size()) out << fmt17(s.p[i]);
        out << ",";
        if (i < s.p_g.size()) out << fmt17(s.p_g[i]);
        out << "\n";
    }
}

inline std::string snapshot_path(const std::string& out_dir, const std::string& run_id,
                                 double t) {
    return out_dir + "/" + run_id + "_t" + time_label(t) + ".csv";
}

/// Joint comparison CSV: x,u_mu,u_limit,abs_diff.
inline void write_compare_csv(const std::string& path, const Grid& grid,
                              const std::vector<double>& u_mu,
                              const std::vector<double>& u_limit) {
    auto out = open_out(path);
    out << "x,u_mu,u_limit,abs_diff\n";
    for (std::size_t i = 0; i < u_mu.size(); ++i)
        out << fmt17(grid.centers[i]) << "," << fmt17(u_mu[i]) << "," << fmt17(u_limit[i])
            << "," << fmt17(std::abs(u_mu[i] - u_limit[i])) << "\n";
}

/// Sweep CSV: mu,l2_diff,sup_diff_final,est1,est1_over_mu.
inline void write_sweep_csv(const std::string& path, const SweepResult& r) {
    auto out = open_out(path);
    out << "mu,l2_diff,sup_diff_final,est1,est1_over_mu\n";
    for (std::size_t j = 0; j < r.mus.size(); ++j)
        out << fmt17(r.mus[j]) << "," << fmt17(r.l2_diff[j]) << ","
            << fmt17(r.sup_diff_final[j]) << "," << fmt17(r.est1_vals[j]) << ","
            << fmt17(r.est1_vals[j] / r.mus[j]) << "\n";
}

/// Estimate-report CSV: name,mu,value,normalization.
inline void write_estimates_csv(const std::string& path,
                                const std::vector<EstimateReport>& reports) {
    auto out = open_out(path);
    out << "name,mu,value,normalization\n";
    for (const auto& r : reports) {
        out << r.name << ",";
        if (r.mu) out << fmt17(*r.mu);
        out << "," << fmt17(r.value) << ",\"" << r.normalization << "\"\n";
    }
}

/// Transform table CSV: s,g,zeta,Q,R,psi.
inline void write_table_csv(const std::string& path, const TransformTable& t) {
    auto out = open_out(path);
    out << "s,g,zeta,Q,R,psi\n";
    for (std::size_t i = 0; i < t.s_grid.size(); ++i)
        out << fmt17(t.s_grid[i]) << "," << fmt17(t.g_vals[i]) << ","
            << fmt17(t.zeta_vals[i]) << "," << fmt17(t.Q_vals[i]) << ","
            << fmt17(t.R_vals[i]) << "," << fmt17(t.psi_vals[i]) << "\n";
}

/// gnuplot script rendering saturation (line with crosses) and the air
/// pressure (line with diamonds) from the snapshot CSVs.
inline void write_plot_script(const std::string& path, const std::string& run_id,
                              const std::vector<double>& times) {
    auto out = open_out(path);
    out << "# gnuplot script; CSVs are the normative artifact\n";
    out << "set datafile separator ','\n";
    out << "set key outside\n";
    out << "set xlabel 'x'\n";
    for (double t : times) {
        const std::string label = time_label(t);
        const std::string csv = run_id + "_t" + label + ".csv";
        out << "set title '" << run_id << ", t = " << label << "'\n";
        out << "set ylabel 'u'\n";
        out << "plot '" << csv << "' using 1:2 skip 1 with linespoints pt 2 title 'u'\n";
        out << "pause -1 'press enter'\n";
        out << "set ylabel 'p_g'\n";
        out << "plot '" << csv << "' using 1:4 skip 1 with linespoints pt 12 title 'p_g'\n";
        out << "pause -1 'press enter'\n";
    }
}

} // namespace porolim
