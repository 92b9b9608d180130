#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "centfoc/quadrature.hpp"
#include "centfoc/series.hpp"
#include "centfoc/system.hpp"
#include "centfoc/xifunction.hpp"

namespace centfoc {

namespace detail {

// (1 - (1-xi^2)^e) / xi^2 without cancellation: the factored geometric sum
// sum_{j<e} (1-xi^2)^j is used for small xi, the direct form otherwise.
inline double one_minus_pow_over_sq(double xi, int e) {
    const double u = 1.0 - xi * xi;
    if (xi < 0.5) {
        double sum = 0.0, t = 1.0;
        for (int j = 0; j < e; ++j) {
            sum += t;
            t *= u;
        }
        return sum;
    }
    return (1.0 - std::pow(u, e)) / (xi * xi);
}

}  // namespace detail

// P_0(xi) = (1 - (1-xi^2)^{2k}) / xi^2; decreases from 2k at xi=0 to 1 at xi=1.
inline double p0_value(int k, double xi) { return detail::one_minus_pow_over_sq(xi, 2 * k); }

inline XiFunction p0_profile(int k) {
    return XiFunction::build([k](double xi) { return p0_value(k, xi); });
}

// The delta-series of P(xi;delta): coefficient 0 is P_0, coefficient 2p+m is
// F_{2,m} * 2k/(2p+2k+m) * (1-(1-xi^2)^{2k+2p+m})/xi^2, all others zero.
inline XiSeries p_series(const NormalizedSystem& ns, int order) {
    const int k = ns.k, p = ns.p;
    ScalarSeries F2 = ns.F * ns.F;
    std::vector<XiFunction> c;
    c.reserve(order + 1);
    c.push_back(p0_profile(k));
    for (int n = 1; n <= order; ++n) {
        const int m = n - 2 * p;
        if (m < 0 || m > F2.order()) {
            c.push_back(XiFunction::constant(0.0));
            continue;
        }
        const double amp = F2[m] * 2.0 * k / (2.0 * p + 2.0 * k + m);
        const int e = 2 * k + 2 * p + m;
        c.push_back(XiFunction::build(
            [amp, e](double xi) { return amp * detail::one_minus_pow_over_sq(xi, e); }));
    }
    return XiSeries(std::move(c));
}

// P(xi;delta) by direct quadrature of its integral form, with A supplied as
// a callable. Independent of the series route.
template <class AFn>
double p_direct(int k, double xi, double delta, AFn&& a) {
    return 2.0 * k *
           integrate(
               [&](double s) {
                   const double w = 1.0 - xi * xi * s;
                   return std::pow(w, 2 * k - 1) * a(delta * w);
               },
               0.0, 1.0, 1e-13);
}

// Phi_{p,k}(xi) = xi^{-2} int_{1-xi^2}^1 s^{p+k-1} (1-s^{2k})^{1/2} ds.
// The substitution s = 1-t^2 turns the integrand smooth:
//   Phi(xi) = 2 xi int_0^1 u^2 (1-xi^2 u^2)^{p+k-1} P_0(xi u)^{1/2} du.
inline double phi(int p, int k, double xi) {
    if (xi == 0.0) return 0.0;
    return 2.0 * xi *
           integrate(
               [&](double u) {
                   const double t = xi * u;
                   return u * u * std::pow(1.0 - t * t, p + k - 1) * std::sqrt(p0_value(k, t));
               },
               0.0, 1.0, 1e-13);
}

// Closed form at xi = 1 via the beta function: Beta((p+k)/(2k), 3/2) / (2k).
inline double phi_one_closed(int p, int k) {
    const double a = (p + k) / (2.0 * k);
    const double b = 1.5;
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)) / (2.0 * k);
}

// Psi_k(xi), the nested integral of (not the series route). Both layers are
// rewritten with s = 1-t^2 so the square-root endpoint singularity
// disappears:
//   inner I(t)  = int_0^t 2 u^2 (1-u^2)^k P_0(u)^{1/2} du
//   Psi_k(xi)   = (2/xi) int_0^1 (1-xi^2 u^2)^k P_0(xi u)^{-1/2} I(xi u) du.
inline double psi(int k, double xi) {
    if (xi == 0.0) return 0.0;
    auto inner = [k](double t) {
        if (t == 0.0) return 0.0;
        return integrate(
            [&](double u) {
                const double w = t * u;
                return 2.0 * w * w * std::pow(1.0 - w * w, k) * std::sqrt(p0_value(k, w)) * t;
            },
            0.0, 1.0, 1e-13);
    };
    return 2.0 / xi *
           integrate(
               [&](double u) {
                   const double t = xi * u;
                   return std::pow(1.0 - t * t, k) / std::sqrt(p0_value(k, t)) * inner(t);
               },
               0.0, 1.0, 1e-12);
}

// The weighted cumulative transform of the recursion:
//   (W R)(xi) = 2 xi^{-2} int_0^xi t^2 (1-t^2)^{p+k-1} R(t) dt
// evaluated through the rescaled form 2 xi int_0^1 s^2 (1-xi^2 s^2)^{p+k-1}
// R(xi s) ds, which carries no xi^{-2} cancellation and vanishes at xi=0.
inline XiFunction weighted_cumulative(const XiFunction& R, int p, int k) {
    const int e = p + k - 1;
    return XiFunction::build(
        [&R, e](double xi) {
            if (xi == 0.0) return 0.0;
            return 2.0 * xi *
                   integrate(
                       [&](double s) {
                           return s * s * std::pow(1.0 - xi * xi * s * s, e) * R(xi * s);
                       },
                       0.0, 1.0, 1e-13);
        },
        std::max(16, R.degree()));
}

}  // namespace centfoc
