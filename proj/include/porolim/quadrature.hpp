#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "porolim/errors.hpp"

namespace porolim {

/// Adaptive-Simpson settings. `endpoint_guard` is the distance from s=1 below
/// which the integrand is evaluated through the substitution tau = 1 - sigma^2,
/// which turns an inverse-square-root singularity of p_c' into a bounded
/// integrand.
struct Quadrature {
    double abs_tol = 1e-10;
    int max_depth = 40;
    double endpoint_guard = 1e-3;
};

namespace detail {

struct SimpsonState {
    double worst_error = 0.0;
    double worst_location = 0.0;
    bool failed = false;
};

template <class F>
double simpson(F&& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(F&& f, double a, double fa, double b, double fb, double m, double fm,
             double whole, double tol, double tol_floor, int depth, SimpsonState& st) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth <= 0) {
        if (depth <= 0 && std::abs(err) > tol) {
            st.failed = true;
            if (std::abs(err) > st.worst_error) {
                st.worst_error = std::abs(err);
                st.worst_location = m;
            }
        }
        return left + right + err;
    }
    // halving the child tolerance keeps the leaf errors summable; the floor
    // stops the subdivision from chasing accuracy below the roundoff level
    // of the whole-interval estimate
    const double child_tol = std::max(0.5 * tol, tol_floor);
    return adapt(f, a, fa, m, fm, lm, flm, left, child_tol, tol_floor, depth - 1, st) +
           adapt(f, m, fm, b, fb, rm, frm, right, child_tol, tol_floor, depth - 1, st);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth, SimpsonState& st) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = simpson(f, a, fa, b, fb, m, fm);
    const double tol_floor = 1e-16 * std::abs(whole);
    return adapt(f, a, fa, b, fb, m, fm, whole, tol, tol_floor, max_depth, st);
}

} // namespace detail

/// Integrate f over [a,b] in [0,1]. The slice closer to s=1 than
/// endpoint_guard is handled in substituted variables; the integrand is never
/// evaluated closer to 1 than 1e-14.
template <class F>
inline double integrate_saturation(F&& f, double a, double b, const Quadrature& q = {}) {
    if (a == b) return 0.0;
    detail::SimpsonState st;
    const double split = 1.0 - q.endpoint_guard;
    double result = 0.0;
    if (a < split) {
        result += detail::adaptive_simpson(f, a, std::min(b, split), q.abs_tol * 0.5,
                                           q.max_depth, st);
    }
    if (b > split) {
        const double lo = std::max(a, split);
        // tau = 1 - sigma^2, dtau = -2 sigma dsigma; tau is kept one ulp
        // below 1 so a singular p_c' is never evaluated at 1 itself
        auto g = [&f](double sigma) {
            constexpr double one_minus_ulp = 1.0 - 1.1102230246251565e-16;
            double tau = 1.0 - sigma * sigma;
            if (tau > one_minus_ulp) tau = one_minus_ulp;
            return 2.0 * sigma * f(tau);
        };
        const double sig_hi = std::sqrt(1.0 - lo);
        double sig_lo = b >= 1.0 ? 0.0 : std::sqrt(1.0 - b);
        // below sig_c, the rounding of 1 - sigma^2 makes the recovered
        // distance from 1 too coarse for a singular integrand; extend the
        // integrand constantly over that tail, which is exact for the
        // inverse-square-root singularity this substitution regularizes
        constexpr double sig_c = 1e-5;
        if (sig_lo < sig_c && sig_hi > sig_c) {
            result += (sig_c - sig_lo) * g(sig_c);
            sig_lo = sig_c;
        }
        result += detail::adaptive_simpson(g, sig_lo, sig_hi, q.abs_tol * 0.5,
                                           q.max_depth, st);
    }
    if (st.failed) {
        throw IntegrationError("quadrature did not converge within max_depth",
                               st.worst_error, st.worst_location);
    }
    return result;
}

} // namespace porolim
