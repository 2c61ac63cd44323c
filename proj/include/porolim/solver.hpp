#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "porolim/errors.hpp"
#include "porolim/grid.hpp"
#include "porolim/model.hpp"
#include "porolim/sources.hpp"
#include "porolim/transforms.hpp"

namespace porolim {

constexpr double kBoundTol = 1e-12;
constexpr double kSatTol = 1e-9; // "u = 1" threshold for chi and the graph H

/// One time level: saturations plus (optionally) reconstructed pressures.
struct SimState {
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> p;   // water pressure, empty until reconstructed
    std::vector<double> p_g; // air/global pressure
};

enum class SchemeKind { TwoPhase, Limit };

struct SchemeSpec {
    SchemeKind kind = SchemeKind::TwoPhase;
    double mu = 1e-8;        // two-phase only
    bool obstacle = false;   // limit only: cap extraction by f_hat in H(u)
    bool symmetrized = false; // arithmetic-mean interface mobility

    std::string describe() const {
        if (kind == SchemeKind::TwoPhase) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "two-phase(mu=%g)", mu);
            return buf;
        }
        return obstacle ? "limit(obstacle)" : "limit(faithful)";
    }
};

/// Extraction multiplier of the limit scheme's obstacle mode; f_hat is
/// nonzero only at cells pinned at full saturation.
struct ObstacleMultiplier {
    std::vector<double> f_hat;
};

struct Trajectory {
    std::vector<SimState> states;
    std::vector<double> dts;
    std::vector<double> flux_min, flux_max; // per-step interface flux extrema
    double K_nominal = 1e-4;
    SchemeSpec scheme;
    bool dense = false;
};

inline SimState initial_state(const std::function<double(double)>& u0, const Grid& grid) {
    SimState s;
    s.u.resize(grid.n_cells);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const double v = u0(grid.centers[i]);
        if (v < 0.0 || v > 1.0)
            throw ConfigError("initial saturation outside [0,1] at x=" +
                              std::to_string(grid.centers[i]));
        s.u[i] = v;
    }
    return s;
}

/// Interface flux of the two-phase scheme, with the mixed-point mobility
/// (k_w at the right cell, k_a at the left cell) written into the scheme.
inline double two_phase_flux(const ConstitutiveModel& m, double mu, double u_left,
                             double u_right, double h) {
    const double kwR = m.k_w(u_right);
    const double kaL = m.k_a(u_left);
    const double den = mu * kwR + kaL;
    if (den < 1e-300) return 0.0; // numerator vanishes too
    return -(m.p_c(u_right) - m.p_c(u_left)) / h * kwR * kaL / den;
}

inline double limit_flux(const ConstitutiveModel& m, double u_left, double u_right,
                         double h) {
    return -(m.p_c(u_right) - m.p_c(u_left)) / h * m.k_w(u_right);
}

namespace detail {

inline double two_phase_lambda(const ConstitutiveModel& m, double mu, double s) {
    const double kw = m.k_w(s), ka = m.k_a(s);
    const double den = mu * kw + ka;
    return den < 1e-300 ? 0.0 : kw * ka / den;
}

/// Interface mobility factor of the active scheme at (u_left, u_right).
inline double interface_lambda(const ConstitutiveModel& m, const SchemeSpec& sch,
                               double uL, double uR) {
    if (sch.kind == SchemeKind::TwoPhase) {
        if (sch.symmetrized)
            return 0.5 * (two_phase_lambda(m, sch.mu, uL) + two_phase_lambda(m, sch.mu, uR));
        const double kwR = m.k_w(uR), kaL = m.k_a(uL);
        const double den = sch.mu * kwR + kaL;
        return den < 1e-300 ? 0.0 : kwR * kaL / den;
    }
    if (sch.symmetrized) return 0.5 * (m.k_w(uL) + m.k_w(uR));
    return m.k_w(uR);
}

inline double interface_flux(const ConstitutiveModel& m, const SchemeSpec& sch,
                             double uL, double uR, double h) {
    return -(m.p_c(uR) - m.p_c(uL)) / h * interface_lambda(m, sch, uL, uR);
}

} // namespace detail

/// Explicit-scheme step bound: dt = sigma h^2 / max local diffusivity, where
/// the divided difference |dp_c|/|du| stands in for |p_c'| at the interface.
inline double stable_dt(const ConstitutiveModel& m, const SchemeSpec& sch,
                        const SimState& state, const Grid& grid, double sigma,
                        double K_nominal, double t_remaining) {
    double amax = 0.0;
    for (std::size_t j = 1; j < grid.n_cells; ++j) {
        const double uL = state.u[j - 1], uR = state.u[j];
        const double lam = detail::interface_lambda(m, sch, uL, uR);
        const double a = lam * std::abs(m.p_c(uR) - m.p_c(uL)) /
                         std::max(std::abs(uR - uL), 1e-14);
        amax = std::max(amax, a);
    }
    const double dt = sigma * grid.h * grid.h / std::max(amax, 1e-300);
    return std::min({dt, K_nominal, t_remaining});
}

inline double chi(double c) { return c >= 1.0 - kSatTol ? 1.0 : 0.0; }

namespace detail {

/// Injected water that would push a full cell past u=1 displaces water into
/// the next cell (deterministic left-to-right carry). Only volume actually
/// delivered by injection this step may displace, so pure flux overshoots
/// still trip the bound check below.
inline void apply_displacement_cap(std::vector<double>& un, std::vector<double>& budget,
                                   double t) {
    double carry = 0.0;
    for (std::size_t i = 0; i < un.size(); ++i) {
        un[i] += carry;
        budget[i] += carry;
        carry = 0.0;
        if (un[i] > 1.0) {
            const double cap = std::min(un[i] - 1.0, budget[i]);
            un[i] -= cap;
            carry = cap;
        }
    }
    if (carry > 1e-12)
        throw StabilityError("displaced injection volume spilled past the last cell",
                             un.size() - 1, carry, t);
}

inline void check_bounds(const std::vector<double>& un, double t) {
    for (std::size_t i = 0; i < un.size(); ++i) {
        if (un[i] < -kBoundTol || un[i] > 1.0 + kBoundTol)
            throw StabilityError(
                "saturation out of bounds (reduce sigma or K_nominal)", i, un[i], t);
    }
}

} // namespace detail

/// One explicit update of the two-phase scheme. `ext` must already include
/// the mean-correction for unbalanced sources (see effective_extraction).
inline SimState step_two_phase(const ConstitutiveModel& m, double mu, const SimState& state,
                               const Grid& grid, const std::vector<double>& inj,
                               const std::vector<double>& ext, double c, double dt,
                               bool symmetrized = false, double* fmin = nullptr,
                               double* fmax = nullptr) {
    const std::size_t n = grid.n_cells;
    SchemeSpec sch{SchemeKind::TwoPhase, mu, false, symmetrized};
    std::vector<double> F(n + 1, 0.0); // Neumann: F[0] = F[n] = 0
    for (std::size_t j = 1; j < n; ++j)
        F[j] = detail::interface_flux(m, sch, state.u[j - 1], state.u[j], grid.h);
    if (fmin || fmax) {
        const auto [lo, hi] = std::minmax_element(F.begin(), F.end());
        if (fmin) *fmin = *lo;
        if (fmax) *fmax = *hi;
    }

    const double fc = frac_flow(m, mu, c);
    SimState out;
    out.t = state.t + dt;
    out.u.resize(n);
    std::vector<double> budget(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double div = F[i + 1] - F[i];
        const double win = fc * inj[i];
        out.u[i] = state.u[i] + dt * (div + win - frac_flow(m, mu, state.u[i]) * ext[i]);
        budget[i] = dt * win;
    }
    detail::apply_displacement_cap(out.u, budget, out.t);
    detail::check_bounds(out.u, out.t);
    return out;
}

/// One explicit update of the limit scheme. Faithful mode is the discrete
/// limit equation as printed (no extraction term); obstacle mode subtracts
/// f_hat * ext with the smallest f_hat in [0,1] keeping u <= 1, zero below
/// full saturation.
inline std::pair<SimState, ObstacleMultiplier>
step_limit(const ConstitutiveModel& m, const SimState& state, const Grid& grid,
           const std::vector<double>& inj, const std::vector<double>& ext, double c,
           double dt, bool obstacle_mode, bool symmetrized = false,
           double* fmin = nullptr, double* fmax = nullptr) {
    const std::size_t n = grid.n_cells;
    SchemeSpec sch{SchemeKind::Limit, 0.0, obstacle_mode, symmetrized};
    std::vector<double> F(n + 1, 0.0);
    for (std::size_t j = 1; j < n; ++j)
        F[j] = detail::interface_flux(m, sch, state.u[j - 1], state.u[j], grid.h);
    if (fmin || fmax) {
        const auto [lo, hi] = std::minmax_element(F.begin(), F.end());
        if (fmin) *fmin = *lo;
        if (fmax) *fmax = *hi;
    }

    const double xc = chi(c);
    SimState out;
    out.t = state.t + dt;
    out.u.resize(n);
    ObstacleMultiplier om;
    om.f_hat.assign(n, 0.0);
    std::vector<double> budget(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double div = F[i + 1] - F[i];
        double v = state.u[i] + dt * (div + xc * inj[i]);
        if (obstacle_mode && ext[i] > 0.0 && state.u[i] >= 1.0 - kSatTol && v > 1.0) {
            om.f_hat[i] = std::min((v - 1.0) / (dt * ext[i]), 1.0);
            v -= dt * om.f_hat[i] * ext[i];
        }
        out.u[i] = v;
        budget[i] = dt * xc * inj[i];
    }
    if (obstacle_mode) detail::apply_displacement_cap(out.u, budget, out.t);
    detail::check_bounds(out.u, out.t);
    return {out, om};
}

/// P_i = -R(u_i) + h * sum_j R(u_j); the discrete mean is zero by
/// construction. Eq-level note: the table is built for the running mu.
inline std::vector<double> reconstruct_pressure(const SimState& state,
                                                const TransformTable& table,
                                                const Grid& grid) {
    std::vector<double> P(state.u.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        P[i] = -table.R(state.u[i]);
        mean += table.R(state.u[i]);
    }
    mean *= grid.h;
    for (double& p : P) p += mean;
    return P;
}

inline std::vector<double> reconstruct_global_pressure(const SimState& state,
                                                       const TransformTable& table,
                                                       const Grid& grid,
                                                       const ConstitutiveModel& m) {
    std::vector<double> Pg = reconstruct_pressure(state, table, grid);
    for (std::size_t i = 0; i < Pg.size(); ++i) Pg[i] += m.p_c(state.u[i]);
    return Pg;
}

/// The mean-correction of the two-phase source: extraction is augmented by
/// the domain-average imbalance so unbalanced user sources stay compatible.
/// Identically zero for balanced (preset) sources.
inline std::vector<double> effective_extraction(const std::vector<double>& inj,
                                                const std::vector<double>& ext,
                                                const Grid& grid) {
    const double corr = source_imbalance(inj, ext, grid);
    std::vector<double> out = ext;
    if (corr != 0.0)
        for (double& e : out) e += corr;
    return out;
}

struct RunSetup {
    ConstitutiveModel model;
    SchemeSpec scheme;
    Grid grid;
    std::vector<double> inj, ext; // discretized fields
    double c = 1.0;
    SimState init;
    double T = 0.0;
    std::vector<double> record_times; // states stored at these times (and t=0)
    double sigma = 0.45;
    double K_nominal = 1e-4;
    bool dense = false;                  // record every accepted step
    const TransformTable* table = nullptr; // pressures attached when non-null
};

/// Advances to T with adaptive dt, truncating steps to land exactly on each
/// record time. Pressures are reconstructed on stored states when a table is
/// supplied.
inline Trajectory run_simulation(const RunSetup& rs) {
    // sigma >= 1 is allowed at this level so deliberately unstable runs can
    // demonstrate the stability guard; the CLI config layer enforces (0,1)
    if (!(rs.sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (rs.T < 0.0) throw ConfigError("horizon T must be nonnegative");

    std::vector<double> rec = rs.record_times;
    std::sort(rec.begin(), rec.end());
    for (double t : rec)
        if (t <= 0.0 || t > rs.T + 1e-15)
            throw ConfigError("record times must lie in (0,T]");

    const std::vector<double> ext_eff =
        rs.scheme.kind == SchemeKind::TwoPhase
            ? effective_extraction(rs.inj, rs.ext, rs.grid)
            : rs.ext;

    Trajectory traj;
    traj.K_nominal = rs.K_nominal;
    traj.scheme = rs.scheme;
    traj.dense = rs.dense;

    auto attach_pressures = [&](SimState& s) {
        if (rs.table) {
            s.p = reconstruct_pressure(s, *rs.table, rs.grid);
            s.p_g = reconstruct_global_pressure(s, *rs.table, rs.grid, rs.model);
        }
    };

    SimState cur = rs.init;
    cur.t = 0.0;
    {
        SimState first = cur;
        attach_pressures(first);
        traj.states.push_back(std::move(first));
    }
    if (rs.T == 0.0) return traj;

    std::size_t ri = 0;
    double t = 0.0;
    while (t < rs.T - 1e-15) {
        const double nxt = ri < rec.size() ? rec[ri] : rs.T;
        double dt = stable_dt(rs.model, rs.scheme, cur, rs.grid, rs.sigma, rs.K_nominal,
                              rs.T - t);
        double tnew;
        if (t + dt >= nxt - 1e-15) {
            dt = nxt - t;
            tnew = nxt;
        } else {
            tnew = t + dt;
        }

        double fmin = 0.0, fmax = 0.0;
        SimState next;
        if (rs.scheme.kind == SchemeKind::TwoPhase) {
            next = step_two_phase(rs.model, rs.scheme.mu, cur, rs.grid, rs.inj, ext_eff,
                                  rs.c, dt, rs.scheme.symmetrized, &fmin, &fmax);
        } else {
            next = step_limit(rs.model, cur, rs.grid, rs.inj, ext_eff, rs.c, dt,
                              rs.scheme.obstacle, rs.scheme.symmetrized, &fmin, &fmax)
                       .first;
        }
        next.t = tnew;
        cur = std::move(next);
        t = tnew;
        traj.dts.push_back(dt);
        traj.flux_min.push_back(fmin);
        traj.flux_max.push_back(fmax);

        const bool at_record = ri < rec.size() && std::abs(t - rec[ri]) < 1e-14;
        if (at_record) ++ri;
        if (rs.dense || at_record || !(t < rs.T - 1e-15)) {
            SimState stored = cur;
            attach_pressures(stored);
            // avoid duplicating the state when a record time coincides with T
            if (std::abs(traj.states.back().t - stored.t) > 1e-15)
                traj.states.push_back(std::move(stored));
        }
    }
    return traj;
}

} // namespace porolim
