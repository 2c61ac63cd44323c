#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "porolim/errors.hpp"
#include "porolim/model.hpp"
#include "porolim/quadrature.hpp"

namespace porolim {

namespace detail {

// Integrands are evaluated at tau clamped one ulp below 1 so p_c' stays
// finite; the endpoint substitution in integrate_saturation never produces
// arguments closer to 1 than this, so the clamp does not distort the value.
inline double clamp_below_one(double t) {
    constexpr double one_minus_ulp = 1.0 - 1.1102230246251565e-16;
    return std::min(t, one_minus_ulp);
}

} // namespace detail

/// g(s) = -int_0^s k_a p_c'.
inline double eval_g(const ConstitutiveModel& m, double s, const Quadrature& q = {}) {
    return integrate_saturation(
        [&m](double t) { return -m.k_a(t) * m.p_c_prime(detail::clamp_below_one(t)); },
        0.0, s, q);
}

/// zeta(s) = int_0^s sqrt(k_a) p_c'.
inline double eval_zeta(const ConstitutiveModel& m, double s, const Quadrature& q = {}) {
    return integrate_saturation(
        [&m](double t) {
            return std::sqrt(m.k_a(t)) * m.p_c_prime(detail::clamp_below_one(t));
        },
        0.0, s, q);
}

/// Q^mu(s) = int_0^s f^mu p_c'.
inline double eval_Q(const ConstitutiveModel& m, double mu, double s,
                     const Quadrature& q = {}) {
    return integrate_saturation(
        [&m, mu](double t) {
            const double tc = detail::clamp_below_one(t);
            return frac_flow(m, mu, tc) * m.p_c_prime(tc);
        },
        0.0, s, q);
}

/// R^mu(s) = int_0^s [k_a / (k_a + mu k_w)] p_c'. The ratio is taken as 0
/// where k_a vanishes (limit convention at s -> 1).
inline double eval_R(const ConstitutiveModel& m, double mu, double s,
                     const Quadrature& q = {}) {
    return integrate_saturation(
        [&m, mu](double t) {
            const double ka = m.k_a(t);
            if (ka <= 0.0) return 0.0;
            const double tc = detail::clamp_below_one(t);
            return ka / (ka + mu * m.k_w(t)) * m.p_c_prime(tc);
        },
        0.0, s, q);
}

/// psi^mu(s) = -(1/mu) int_0^s [k_a k_w / M^mu] p_c'.
inline double eval_psi(const ConstitutiveModel& m, double mu, double s,
                       const Quadrature& q = {}) {
    return integrate_saturation(
        [&m, mu](double t) {
            const double tc = detail::clamp_below_one(t);
            const double M = total_mobility(m, mu, tc);
            return -(1.0 / mu) * m.k_a(tc) * m.k_w(tc) / M * m.p_c_prime(tc);
        },
        0.0, s, q);
}

/// Tabulated transforms on a fixed saturation grid with linear interpolation
/// for off-grid lookups. Immutable after build.
struct TransformTable {
    std::vector<double> s_grid;
    std::vector<double> g_vals, zeta_vals, Q_vals, R_vals, psi_vals;

    double interp(const std::vector<double>& vals, double s) const {
        if (s <= s_grid.front()) return vals.front();
        if (s >= s_grid.back()) return vals.back();
        const auto it = std::upper_bound(s_grid.begin(), s_grid.end(), s);
        const std::size_t j = static_cast<std::size_t>(it - s_grid.begin());
        const double w = (s - s_grid[j - 1]) / (s_grid[j] - s_grid[j - 1]);
        return vals[j - 1] + w * (vals[j] - vals[j - 1]);
    }

    double g(double s) const { return interp(g_vals, s); }
    double zeta(double s) const { return interp(zeta_vals, s); }
    double Q(double s) const { return interp(Q_vals, s); }
    double R(double s) const { return interp(R_vals, s); }
    double psi(double s) const { return interp(psi_vals, s); }
};

inline std::vector<double> uniform_grid(std::size_t points = 1025) {
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

/// Builds a TransformTable by cumulative segment integration so each column
/// shares a single quadrature budget per segment.
inline TransformTable build_table(const ConstitutiveModel& m, double mu,
                                  std::vector<double> grid, const Quadrature& q = {}) {
    if (grid.empty()) throw ModelError("build_table: empty grid");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw ModelError("build_table: grid must be strictly increasing");
    if (grid.front() < 0.0 || grid.back() > 1.0)
        throw ModelError("build_table: grid must lie in [0,1]");

    TransformTable t;
    t.s_grid = std::move(grid);
    const std::size_t n = t.s_grid.size();
    t.g_vals.resize(n);
    t.zeta_vals.resize(n);
    t.Q_vals.resize(n);
    t.R_vals.resize(n);
    t.psi_vals.resize(n);

    double g = eval_g(m, t.s_grid[0], q);
    double z = eval_zeta(m, t.s_grid[0], q);
    double Q = eval_Q(m, mu, t.s_grid[0], q);
    double R = eval_R(m, mu, t.s_grid[0], q);
    double psi = eval_psi(m, mu, t.s_grid[0], q);
    t.g_vals[0] = g;
    t.zeta_vals[0] = z;
    t.Q_vals[0] = Q;
    t.R_vals[0] = R;
    t.psi_vals[0] = psi;

    auto seg = [&](auto&& f, double a, double b) {
        return integrate_saturation(f, a, b, q);
    };
    for (std::size_t i = 1; i < n; ++i) {
        const double a = t.s_grid[i - 1], b = t.s_grid[i];
        g += seg([&m](double tt) { return -m.k_a(tt) * m.p_c_prime(detail::clamp_below_one(tt)); }, a, b);
        z += seg([&m](double tt) { return std::sqrt(m.k_a(tt)) * m.p_c_prime(detail::clamp_below_one(tt)); }, a, b);
        Q += seg([&m, mu](double tt) {
            const double tc = detail::clamp_below_one(tt);
            return frac_flow(m, mu, tc) * m.p_c_prime(tc);
        }, a, b);
        R += seg([&m, mu](double tt) {
            const double ka = m.k_a(tt);
            if (ka <= 0.0) return 0.0;
            return ka / (ka + mu * m.k_w(tt)) * m.p_c_prime(detail::clamp_below_one(tt));
        }, a, b);
        psi += seg([&m, mu](double tt) {
            const double tc = detail::clamp_below_one(tt);
            const double M = total_mobility(m, mu, tc);
            return -(1.0 / mu) * m.k_a(tc) * m.k_w(tc) / M * m.p_c_prime(tc);
        }, a, b);
        t.g_vals[i] = g;
        t.zeta_vals[i] = z;
        t.Q_vals[i] = Q;
        t.R_vals[i] = R;
        t.psi_vals[i] = psi;
    }

    // monotonicity invariants (tolerance absorbs quadrature noise)
    const double tol = 1e-12;
    for (std::size_t i = 1; i < n; ++i) {
        if (t.g_vals[i] < t.g_vals[i - 1] - tol ||
            t.zeta_vals[i] > t.zeta_vals[i - 1] + tol ||
            t.Q_vals[i] > t.Q_vals[i - 1] + tol ||
            t.R_vals[i] > t.R_vals[i - 1] + tol)
            throw ModelError("build_table: tabulated transform violates monotonicity");
    }
    return t;
}

} // namespace porolim
