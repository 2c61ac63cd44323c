#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "porolim/errors.hpp"

namespace porolim {

using ScalarFn = std::function<double(double)>;

/// Constitutive closures of the two-phase system: relative permeabilities
/// k_w, k_a on [0,1], capillary pressure p_c and its derivative (which may
/// blow up as s -> 1), and the lower saturation bound u_m.
struct ConstitutiveModel {
    ScalarFn k_w;
    ScalarFn k_a;
    ScalarFn p_c;
    ScalarFn p_c_prime;
    double u_m = 0.05;
    std::string name = "custom";
};

/// Air/water viscosity ratio, restricted to (0,1].
struct Viscosity {
    double mu;

    explicit Viscosity(double mu) : mu(mu) {
        if (!(mu > 0.0 && mu <= 1.0))
            throw ModelError("viscosity ratio must lie in (0,1], got " + std::to_string(mu));
    }
};

/// Central-difference derivative for models supplied without an analytic
/// p_c'; switches to a one-sided stencil within 1e-5 of s=1.
inline ScalarFn finite_difference_derivative(ScalarFn f, double step = 1e-6) {
    return [f = std::move(f), step](double s) {
        if (s > 1.0 - 1e-5) {
            return (f(s) - f(s - step)) / step;
        }
        const double lo = std::max(s - step, 0.0);
        const double hi = s + step;
        return (f(hi) - f(lo)) / (hi - lo);
    };
}

/// The closures used in the built-in experiments:
/// k_w = sqrt(s), k_a = (1-s)^2, p_c = 0.1 sqrt(1-s).
inline ConstitutiveModel builtin_test_model() {
    ConstitutiveModel m;
    m.k_w = [](double s) { return std::sqrt(s); };
    m.k_a = [](double s) { return (1.0 - s) * (1.0 - s); };
    m.p_c = [](double s) { return 0.1 * std::sqrt(1.0 - s); };
    m.p_c_prime = [](double s) { return -0.05 / std::sqrt(1.0 - s); };
    m.u_m = 0.05;
    m.name = "paper-test";
    return m;
}

/// Power-law family k_w = s^a, k_a = (1-s)^b, p_c = pi0 (1-s)^gamma.
inline ConstitutiveModel power_law_model(double a, double b, double pi0, double gamma) {
    if (a <= 0.0 || b <= 0.0 || pi0 <= 0.0 || gamma <= 0.0)
        throw ModelError("power-law exponents and pi0 must be positive");
    ConstitutiveModel m;
    m.k_w = [a](double s) { return std::pow(s, a); };
    m.k_a = [b](double s) { return std::pow(1.0 - s, b); };
    m.p_c = [pi0, gamma](double s) { return pi0 * std::pow(1.0 - s, gamma); };
    m.p_c_prime = [pi0, gamma](double s) {
        return -pi0 * gamma * std::pow(1.0 - s, gamma - 1.0);
    };
    m.u_m = 0.05;
    m.name = "power-law";
    return m;
}

/// Fractional flow of the water phase, k_w / (k_w + k_a/mu).
inline double frac_flow(const ConstitutiveModel& m, double mu, double s) {
    const double kw = m.k_w(s);
    const double ka = m.k_a(s);
    if (kw <= 0.0 && ka <= 0.0)
        throw ModelError("both permeabilities vanish at s=" + std::to_string(s));
    if (kw <= 0.0) return 0.0;
    if (ka <= 0.0) return 1.0;
    return kw / (kw + ka / mu);
}

/// Total mobility k_w + k_a/mu.
inline double total_mobility(const ConstitutiveModel& m, double mu, double s) {
    return m.k_w(s) + m.k_a(s) / mu;
}

struct HypothesisCheck {
    std::string name;
    bool pass = true;
    double worst_s = 0.0;
    double worst_value = 0.0;
};

struct ValidationReport {
    std::vector<HypothesisCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Sampling-based check of the structural hypotheses on the closures. The
/// interior grid stops at 1 - eps_end so that the admissible endpoint
/// singularity of p_c' stays out of the sup check.
inline ValidationReport validate_hypotheses(const ConstitutiveModel& m, int samples,
                                            double eps_end = 1e-6) {
    if (samples < 2) throw ModelError("validate_hypotheses needs samples >= 2");
    const double tol = 1e-12;

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(samples) + 1);
    for (int i = 0; i < samples; ++i)
        grid.push_back((1.0 - eps_end) * i / (samples - 1));
    grid.push_back(1.0);

    ValidationReport rep;
    auto check = [&rep](const std::string& name, bool ok, double s, double v) {
        rep.checks.push_back({name, ok, s, v});
    };

    check("k_w(0) = 0", std::abs(m.k_w(0.0)) <= tol, 0.0, m.k_w(0.0));
    check("k_w(1) = 1", std::abs(m.k_w(1.0) - 1.0) <= tol, 1.0, m.k_w(1.0));
    check("k_w(u_m) > 0", m.k_w(m.u_m) > 0.0, m.u_m, m.k_w(m.u_m));
    check("k_a(1) = 0", std::abs(m.k_a(1.0)) <= tol, 1.0, m.k_a(1.0));
    check("k_a(0) = 1", std::abs(m.k_a(0.0) - 1.0) <= tol, 0.0, m.k_a(0.0));
    check("u_m in (0,1)", m.u_m > 0.0 && m.u_m < 1.0, m.u_m, m.u_m);

    HypothesisCheck kw_mono{"k_w nondecreasing", true, 0.0, 0.0};
    HypothesisCheck ka_mono{"k_a nonincreasing", true, 0.0, 0.0};
    HypothesisCheck pc_dec{"p_c strictly decreasing", true, 0.0, 0.0};
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], b = grid[i + 1];
        const double dkw = m.k_w(b) - m.k_w(a);
        if (dkw < -tol && dkw < kw_mono.worst_value) {
            kw_mono.pass = false;
            kw_mono.worst_s = a;
            kw_mono.worst_value = dkw;
        }
        const double dka = m.k_a(b) - m.k_a(a);
        if (dka > tol && dka > ka_mono.worst_value) {
            ka_mono.pass = false;
            ka_mono.worst_s = a;
            ka_mono.worst_value = dka;
        }
        const double dpc = m.p_c(b) - m.p_c(a);
        if (dpc >= 0.0 && dpc > pc_dec.worst_value) {
            pc_dec.pass = false;
            pc_dec.worst_s = a;
            pc_dec.worst_value = dpc;
        }
    }
    rep.checks.push_back(kw_mono);
    rep.checks.push_back(ka_mono);
    rep.checks.push_back(pc_dec);

    HypothesisCheck ka_pos{"k_a > 0 on [0,1)", true, 0.0,
                           std::numeric_limits<double>::infinity()};
    HypothesisCheck sup_fin{"sup of -k_a p_c' finite", true, 0.0, 0.0};
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) { // interior grid only
        const double s = grid[i];
        const double ka = m.k_a(s);
        if (ka <= 0.0 && ka < ka_pos.worst_value) {
            ka_pos.pass = false;
            ka_pos.worst_s = s;
            ka_pos.worst_value = ka;
        }
        const double v = -ka * m.p_c_prime(s);
        if (!std::isfinite(v)) {
            sup_fin.pass = false;
            sup_fin.worst_s = s;
            sup_fin.worst_value = v;
        } else if (v > sup_fin.worst_value) {
            sup_fin.worst_s = s;
            sup_fin.worst_value = v; // records the sampled sup
        }
    }
    rep.checks.push_back(ka_pos);
    rep.checks.push_back(sup_fin);
    return rep;
}

} // namespace porolim
