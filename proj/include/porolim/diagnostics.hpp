#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "porolim/errors.hpp"
#include "porolim/grid.hpp"
#include "porolim/model.hpp"
#include "porolim/quadrature.hpp"
#include "porolim/solver.hpp"
#include "porolim/transforms.hpp"

namespace porolim {

struct EstimateReport {
    std::string name;
    double value = 0.0;
    std::optional<double> mu;
    std::string normalization;
};

struct SweepResult {
    std::vector<double> mus;
    std::vector<double> l2_diff;
    std::vector<double> sup_diff_final;
    std::vector<double> est1_vals;
};

namespace detail {

inline void require_dense(const Trajectory& traj, const char* who) {
    if (!traj.dense || traj.states.size() != traj.dts.size() + 1)
        throw InsufficientDataError(std::string(who) +
                                    " needs a dense (per-step) recording; rerun with "
                                    "recording = dense");
}

/// Cumulative integral of `integrand` evaluated exactly at every distinct
/// saturation appearing in a trajectory. Avoids the linear-interpolation
/// error of the 1025-point table, which would swamp tight cross-checks.
class NodeExact {
public:
    template <class F>
    NodeExact(const Trajectory& traj, F&& integrand) {
        for (const auto& s : traj.states)
            nodes_.insert(nodes_.end(), s.u.begin(), s.u.end());
        std::sort(nodes_.begin(), nodes_.end());
        nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
        vals_.resize(nodes_.size());
        const Quadrature q{1e-13, 48, 1e-3};
        double acc = nodes_.empty() ? 0.0 : integrate_saturation(integrand, 0.0, nodes_[0], q);
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (i > 0) acc += integrate_saturation(integrand, nodes_[i - 1], nodes_[i], q);
            vals_[i] = acc;
        }
    }

    double operator()(double s) const {
        const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s);
        if (it == nodes_.end() || *it != s)
            throw InsufficientDataError("saturation value not among trajectory nodes");
        return vals_[static_cast<std::size_t>(it - nodes_.begin())];
    }

private:
    std::vector<double> nodes_;
    std::vector<double> vals_;
};

/// Space-time sum of squares of forward differences of v(u), optionally
/// weighted by a left-cell coefficient, with start-of-step dt weighting.
template <class V, class W>
double gradient_energy(const Trajectory& traj, const Grid& grid, V&& v, W&& w) {
    double total = 0.0;
    for (std::size_t k = 0; k < traj.dts.size(); ++k) {
        const auto& u = traj.states[k].u;
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            const double d = (v(u[i + 1]) - v(u[i])) / grid.h;
            sum += grid.h * w(u[i]) * d * d;
        }
        total += traj.dts[k] * sum;
    }
    return total;
}

} // namespace detail

/// Discrete air-phase energy: sum dt h k_a(u_i) [(Pg_{i+1}-Pg_i)/h]^2 with
/// Pg = P + p_c(u). By the transform identity the difference equals the
/// forward difference of Q(u); that form is used for accuracy.
inline EstimateReport est_air_energy(const Trajectory& traj, const Grid& grid,
                                     const ConstitutiveModel& m, double mu) {
    detail::require_dense(traj, "est_air_energy");
    detail::NodeExact Q(traj, [&m, mu](double t) {
        const double tc = std::min(t, 1.0 - 1e-14);
        return frac_flow(m, mu, tc) * m.p_c_prime(tc);
    });
    EstimateReport r;
    r.name = "air_energy";
    r.mu = mu;
    r.normalization = "sum_n sum_i dt h k_a(u_i) [(dQ(u))_i / h]^2";
    r.value = detail::gradient_energy(traj, grid, [&Q](double s) { return Q(s); },
                                      [&m](double s) { return m.k_a(s); });
    return r;
}

/// Same functional evaluated through the P + p_c(u) route (the mean term of
/// P cancels in differences); exists to cross-check the identity-based form.
inline double est_air_energy_via_pressure(const Trajectory& traj, const Grid& grid,
                                          const ConstitutiveModel& m, double mu) {
    detail::require_dense(traj, "est_air_energy_via_pressure");
    detail::NodeExact R(traj, [&m, mu](double t) {
        const double ka = m.k_a(t);
        if (ka <= 0.0) return 0.0;
        const double tc = std::min(t, 1.0 - 1e-14);
        return ka / (ka + mu * m.k_w(t)) * m.p_c_prime(tc);
    });
    return detail::gradient_energy(
        traj, grid, [&R, &m](double s) { return -R(s) + m.p_c(s); },
        [&m](double s) { return m.k_a(s); });
}

/// Discrete water-pressure energy: sum dt h [(P_{i+1}-P_i)/h]^2.
inline EstimateReport est_pressure_energy(const Trajectory& traj, const Grid& grid,
                                          const ConstitutiveModel& m, double mu) {
    detail::require_dense(traj, "est_pressure_energy");
    detail::NodeExact R(traj, [&m, mu](double t) {
        const double ka = m.k_a(t);
        if (ka <= 0.0) return 0.0;
        const double tc = std::min(t, 1.0 - 1e-14);
        return ka / (ka + mu * m.k_w(t)) * m.p_c_prime(tc);
    });
    EstimateReport r;
    r.name = "pressure_energy";
    r.mu = mu;
    r.normalization = "sum_n sum_i dt h [(dP)_i / h]^2";
    r.value = detail::gradient_energy(traj, grid, [&R](double s) { return -R(s); },
                                      [](double) { return 1.0; });
    return r;
}

/// Discrete zeta-gradient energy, plus the companion g-gradient energy.
inline EstimateReport est_zeta_energy(const Trajectory& traj, const Grid& grid,
                                      const ConstitutiveModel& m) {
    detail::require_dense(traj, "est_zeta_energy");
    detail::NodeExact Z(traj, [&m](double t) {
        return std::sqrt(m.k_a(t)) * m.p_c_prime(std::min(t, 1.0 - 1e-14));
    });
    EstimateReport r;
    r.name = "zeta_energy";
    r.normalization = "sum_n sum_i dt h [(dzeta(u))_i / h]^2";
    r.value = detail::gradient_energy(traj, grid, [&Z](double s) { return Z(s); },
                                      [](double) { return 1.0; });
    return r;
}

inline EstimateReport est_g_energy(const Trajectory& traj, const Grid& grid,
                                   const ConstitutiveModel& m) {
    detail::require_dense(traj, "est_g_energy");
    detail::NodeExact G(traj, [&m](double t) {
        return -m.k_a(t) * m.p_c_prime(std::min(t, 1.0 - 1e-14));
    });
    EstimateReport r;
    r.name = "g_energy";
    r.normalization = "sum_n sum_i dt h [(dg(u))_i / h]^2";
    r.value = detail::gradient_energy(traj, grid, [&G](double s) { return G(s); },
                                      [](double) { return 1.0; });
    return r;
}

/// Space-translate functional: sum dt h [g(u_{i+k}) - g(u_i)]^2 over the
/// cells where both samples exist (the discrete domain shrunk by r = k h).
inline EstimateReport space_translate(const Trajectory& traj, const Grid& grid,
                                      const ConstitutiveModel& m, std::size_t k_cells) {
    detail::require_dense(traj, "space_translate");
    EstimateReport r;
    r.name = "space_translate";
    const double xi = static_cast<double>(k_cells) * grid.h;
    r.normalization = "xi = " + std::to_string(xi) + "; reported value / xi^2";
    if (k_cells == 0) {
        r.value = 0.0;
        return r;
    }
    detail::NodeExact G(traj, [&m](double t) {
        return -m.k_a(t) * m.p_c_prime(std::min(t, 1.0 - 1e-14));
    });
    double total = 0.0;
    for (std::size_t n = 0; n < traj.dts.size(); ++n) {
        const auto& u = traj.states[n].u;
        double sum = 0.0;
        for (std::size_t i = 0; i + k_cells < u.size(); ++i) {
            const double d = G(u[i + k_cells]) - G(u[i]);
            sum += grid.h * d * d;
        }
        total += traj.dts[n] * sum;
    }
    r.value = total / (xi * xi);
    return r;
}

/// Time-translate functional over a piecewise-constant resampling of the
/// trajectory onto `intervals` uniform slots: sum dt h [g(u)(t+tau)-g(u)(t)]^2
/// with tau = m_steps * (T / intervals); reported as value / tau.
inline EstimateReport time_translate(const Trajectory& traj, const Grid& grid,
                                     const ConstitutiveModel& m, std::size_t m_steps,
                                     std::size_t intervals = 16) {
    detail::require_dense(traj, "time_translate");
    EstimateReport r;
    r.name = "time_translate";
    if (m_steps == 0 || traj.states.size() < 2) {
        r.normalization = "tau = 0";
        r.value = 0.0;
        return r;
    }
    if (intervals < m_steps + 1)
        throw ConfigError("time_translate: translate exceeds the resampling window");
    const double T = traj.states.back().t;
    const double dtu = T / static_cast<double>(intervals);
    const double tau = static_cast<double>(m_steps) * dtu;
    r.normalization = "tau = " + std::to_string(tau) + "; reported value / tau";

    detail::NodeExact G(traj, [&m](double t) {
        return -m.k_a(t) * m.p_c_prime(std::min(t, 1.0 - 1e-14));
    });

    // index of the last state with time <= each sample instant
    std::vector<std::size_t> idx(intervals + 1);
    std::size_t j = 0;
    for (std::size_t s = 0; s <= intervals; ++s) {
        const double ts = static_cast<double>(s) * dtu;
        while (j + 1 < traj.states.size() && traj.states[j + 1].t <= ts + 1e-15) ++j;
        idx[s] = j;
    }

    double total = 0.0;
    for (std::size_t s = 0; s + m_steps <= intervals; ++s) {
        const auto& u0 = traj.states[idx[s]].u;
        const auto& u1 = traj.states[idx[s + m_steps]].u;
        double sum = 0.0;
        for (std::size_t i = 0; i < u0.size(); ++i) {
            const double d = G(u1[i]) - G(u0[i]);
            sum += grid.h * d * d;
        }
        total += dtu * sum;
    }
    r.value = total / tau;
    return r;
}

/// max - min of the reconstructed air pressure over cells with u <= threshold;
/// zero when no cell qualifies.
inline double air_pressure_flatness(const SimState& state, double threshold_u) {
    if (state.p_g.empty())
        throw InsufficientDataError("air_pressure_flatness needs reconstructed pressures");
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        if (state.u[i] > threshold_u) continue;
        if (!any) {
            lo = hi = state.p_g[i];
            any = true;
        } else {
            lo = std::min(lo, state.p_g[i]);
            hi = std::max(hi, state.p_g[i]);
        }
    }
    return any ? hi - lo : 0.0;
}

namespace detail {

inline const SimState& state_at(const Trajectory& traj, double t) {
    for (const auto& s : traj.states)
        if (std::abs(s.t - t) < 1e-13) return s;
    throw InsufficientDataError("no recorded state at t = " + std::to_string(t));
}

} // namespace detail

/// Runs the two-phase scheme per mu against one limit-scheme run on shared
/// uniform record times and reports L2(Q_T) and final sup gaps plus the
/// air-energy value per mu. `base` supplies everything but the scheme.
inline SweepResult mu_sweep(const RunSetup& base, const std::vector<double>& mus,
                            bool limit_obstacle = true, std::size_t align_times = 32) {
    if (mus.empty()) throw ConfigError("mu sweep needs at least one mu");
    for (std::size_t i = 0; i + 1 < mus.size(); ++i)
        if (!(mus[i] >= mus[i + 1]))
            throw ConfigError("mu list must be nonincreasing");
    for (double mu : mus)
        if (!(mu > 0.0 && mu <= 1.0)) throw ConfigError("mu must lie in (0,1]");

    RunSetup rs = base;
    rs.table = nullptr;
    rs.dense = true;
    rs.record_times.clear();
    for (std::size_t k = 1; k <= align_times; ++k)
        rs.record_times.push_back(rs.T * static_cast<double>(k) /
                                  static_cast<double>(align_times));

    RunSetup lim = rs;
    lim.scheme = SchemeSpec{SchemeKind::Limit, 0.0, limit_obstacle, base.scheme.symmetrized};
    const Trajectory ltraj = run_simulation(lim);

    SweepResult out;
    out.mus = mus;
    for (double mu : mus) {
        RunSetup two = rs;
        two.scheme = SchemeSpec{SchemeKind::TwoPhase, mu, false, base.scheme.symmetrized};
        const Trajectory ttraj = run_simulation(two);

        double l2 = 0.0;
        double tprev = 0.0;
        for (double tt : rs.record_times) {
            const auto& ut = detail::state_at(ttraj, tt).u;
            const auto& ul = detail::state_at(ltraj, tt).u;
            double sum = 0.0;
            for (std::size_t i = 0; i < ut.size(); ++i) {
                const double d = ut[i] - ul[i];
                sum += rs.grid.h * d * d;
            }
            l2 += (tt - tprev) * sum;
            tprev = tt;
        }
        out.l2_diff.push_back(std::sqrt(l2));

        const auto& uf = ttraj.states.back().u;
        const auto& lf = ltraj.states.back().u;
        double sup = 0.0;
        for (std::size_t i = 0; i < uf.size(); ++i)
            sup = std::max(sup, std::abs(uf[i] - lf[i]));
        out.sup_diff_final.push_back(sup);

        out.est1_vals.push_back(est_air_energy(ttraj, rs.grid, rs.model, mu).value);
    }
    return out;
}

} // namespace porolim
