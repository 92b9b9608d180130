#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "centfoc/profile.hpp"
#include "centfoc/quadrature.hpp"
#include "centfoc/series.hpp"
#include "centfoc/system.hpp"

namespace centfoc {

// The delta-series v(xi;delta) = sum_{n>=p} delta^n v_n(xi) solving
//   xi v' + 2v = 2 delta^p xi (1-xi^2)^{p+k-1} (P+v)^{1/2} B(delta(1-xi^2))
// with v(0)=0. Coefficients are kept as full xi-functions: the recursion
// evaluates earlier ones at interior points inside iterated integrals.
struct VSolution {
    NormalizedSystem sys;
    int order = 0;
    std::vector<XiFunction> v;     // v[n], n = 0..order; identically 0 for n < p
    std::vector<double> v_at_one;  // v[n](1)
    XiSeries P = XiSeries::zero(0);

    double eval(double xi, double delta) const {
        double r = 0.0;
        for (int n = order; n >= sys.p; --n) r = r * delta + v[n](xi);
        return r * std::pow(delta, sys.p);
    }

    double eval_at_one(double delta) const {
        double r = 0.0;
        for (int n = order; n >= sys.p; --n) r = r * delta + v_at_one[n];
        return r * std::pow(delta, sys.p);
    }
};

// Solve the recursion: R_m is the delta^m coefficient of
// (P+v)^{1/2} B(delta(1-xi^2)) and v_{m+p} is its weighted cumulative
// integral. The square root is expanded incrementally; by the time w_m is
// needed all v_j entering it (j <= m < n) are final.
inline VSolution solve_v(const NormalizedSystem& ns, int order) {
    if (order < ns.p) throw OrderTooLow("solve_v: order must be at least p");

    VSolution vs;
    vs.sys = ns;
    vs.order = order;
    vs.v.assign(order + 1, XiFunction::constant(0.0));

    vs.P = p_series(ns, order);
    const XiSeries& P = vs.P;
    const XiFunction one_minus_xi2 =
        XiFunction::build([](double xi) { return 1.0 - xi * xi; });
    const XiSeries Bsub = apply_function_series(ns.Bser.truncated(order), one_minus_xi2);

    std::vector<XiFunction> w;  // sqrt(P+v) coefficients, grown as needed
    w.reserve(order + 1);
    w.push_back(P[0].sqrt_checked());
    const XiFunction inv2w0 = w[0].scaled(2.0).recip_checked();

    for (int n = ns.p; n <= order; ++n) {
        const int m = n - ns.p;
        while (static_cast<int>(w.size()) <= m) {
            const int j = static_cast<int>(w.size());
            XiFunction acc = P[j] + vs.v[j];
            for (int i = 1; i < j; ++i) acc = acc - w[i] * w[j - i];
            w.push_back(acc * inv2w0);
        }
        XiFunction R = XiFunction::constant(0.0);
        for (int j = 0; j <= m; ++j) R = R + w[j] * Bsub[m - j];
        vs.v[n] = weighted_cumulative(R, ns.p, ns.k);
    }

    vs.v_at_one.assign(order + 1, 0.0);
    for (int n = ns.p; n <= order; ++n) vs.v_at_one[n] = vs.v[n](1.0);
    return vs;
}

// sup over the delta samples and a xi-grid of |v - J[v]| with J applied by
// direct quadrature (P from its integral form, B and A from the normal-form
// series; no series recursion on this path). O(delta^{order+1}) when the
// recursion is correct.
inline double fixed_point_residual(const VSolution& vs, std::span<const double> deltas,
                                   int xi_grid = 41) {
    const NormalizedSystem& ns = vs.sys;
    const int k = ns.k, p = ns.p;
    auto a_fn = [&ns](double z) { return ns.eval_A(z); };
    double worst = 0.0;
    for (double delta : deltas) {
        if (std::abs(delta) > ns.radius_r)
            throw OutOfRadius("fixed_point_residual: |delta| exceeds validated radius");
        for (int i = 0; i < xi_grid; ++i) {
            const double xi = double(i) / (xi_grid - 1);
            double jv = 0.0;
            if (xi > 0.0) {
                jv = 2.0 * std::pow(delta, p) * xi *
                     integrate(
                         [&](double s) {
                             const double t = xi * s;
                             const double q = 1.0 - t * t;
                             const double bracket =
                                 p_direct(k, t, delta, a_fn) + vs.eval(t, delta);
                             if (bracket < 0.0)
                                 throw NegativeBracket(
                                     "fixed_point_residual: P+v negative inside J");
                             return s * s * std::pow(q, p + k - 1) * std::sqrt(bracket) *
                                    ns.eval_B(delta * q);
                         },
                         0.0, 1.0, 1e-13);
            }
            worst = std::max(worst, std::abs(vs.eval(xi, delta) - jv));
        }
    }
    return worst;
}

// y(x) = (eta-x)^{1/2} eta^{k-1/2} [P(xi;eps*eta) + v(xi;eps*eta)]^{1/2}
// with xi = sqrt(1-x/eta): the quadrant solution through (eta, 0).
inline double eval_phi_solution(const VSolution& vs, double x, double eps, double eta) {
    const NormalizedSystem& ns = vs.sys;
    const double delta = eps * eta;
    if (std::abs(delta) > ns.radius_r)
        throw OutOfRadius("eval_phi_solution: |eps*eta| exceeds validated radius");
    const double xi = std::sqrt(1.0 - x / eta);
    double bracket = vs.eval(xi, delta);
    for (int n = std::min(vs.order, vs.P.order()); n >= 0; --n)
        bracket += vs.P[n](xi) * std::pow(delta, n);
    if (bracket < 0.0)
        throw NegativeBracket("eval_phi_solution: P+v negative; delta outside validity");
    return std::sqrt(eta - x) * std::pow(eta, ns.k - 0.5) * std::sqrt(bracket);
}

}  // namespace centfoc
