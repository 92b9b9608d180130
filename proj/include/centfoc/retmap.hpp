#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "centfoc/profile.hpp"
#include "centfoc/series.hpp"
#include "centfoc/system.hpp"
#include "centfoc/vsolver.hpp"

namespace centfoc {

constexpr double kEtaNeighborhood = 0.5;  // eta stays in (1-eta0, 1+eta0)

// Scalar delta-series of P(1;delta) + v(1;delta).
inline ScalarSeries delta_side_series(const VSolution& vs) {
    ScalarSeries w = ScalarSeries::zero(vs.order);
    for (int n = 0; n <= vs.order; ++n) {
        w[n] = (n <= vs.P.order() ? vs.P[n](1.0) : 0.0);
        if (n >= vs.sys.p) w[n] += vs.v_at_one[n];
    }
    return w;
}

// eps-series of eta(eps)^{2k} [P(1; eps*eta) + v(1; eps*eta)], the quantity
// matched across the y-axis.
inline ScalarSeries side_value_series(const NormalizedSystem& ns, const VSolution& vs,
                                      const ScalarSeries& eta) {
    if (std::abs(eta[0] - 1.0) >= kEtaNeighborhood)
        throw Error("eta_out_of_range", "side_value_series: eta(0) outside (1-eta0, 1+eta0)");
    const int n = eta.order();
    ScalarSeries h = ScalarSeries::zero(n);  // h = eps * eta(eps)
    for (int i = 1; i <= n; ++i) h[i] = eta[i - 1];
    ScalarSeries s = series_substitute(delta_side_series(vs).truncated(n), h);
    for (int i = 0; i < 2 * ns.k; ++i) s = s * eta;
    return s;
}

// Solve side_value(to, eta_out) = side_value(from, eta_in) order by order in
// eps. The unknown coefficient enters its own order linearly with factor
// 2k eta(0)^{2k-1}, so one sweep suffices.
inline ScalarSeries matching_step(const NormalizedSystem& ns_from, const VSolution& vs_from,
                                  const NormalizedSystem& ns_to, const VSolution& vs_to,
                                  const ScalarSeries& eta) {
    const ScalarSeries target = side_value_series(ns_from, vs_from, eta);
    const double jac = 2.0 * ns_to.k * std::pow(eta[0], 2 * ns_to.k - 1);
    if (std::abs(jac) < 1e-8)
        throw DegenerateJacobian("matching_step: derivative 2k eta^{2k-1} below floor");
    ScalarSeries out = eta;
    for (int n = 1; n <= eta.order(); ++n) {
        const ScalarSeries d = side_value_series(ns_to, vs_to, out) - target;
        out[n] -= d[n] / jac;
    }
    return out;
}

struct ReturnMapResult {
    ScalarSeries Z = ScalarSeries::zero(0);
    double Zp1_closed = 0.0;
    double Zp2_closed = 0.0;
    int p = 1;
    NormalizedSystem ns;
    ContractionBounds bounds;
    double matching_residual = 0.0;  // sup |matched difference| over computed orders
};

// Leading return-map coefficients (Z_{p+1}, Z_{p+2}) in closed form, from
// the explicit first terms of the matching map: each of the two matching
// steps contributes n1 eps^p eta^{p+1} + n2 eps^{p+1} eta^{p+2}, and for
// p = 1 the composition adds the 2*n1^2 cross term.
inline std::pair<double, double> closed_form_leading(const NormalizedSystem& ns) {
    const int p = ns.p, k = ns.k;
    const double th = ns.theta_p;
    const double n1 = ns.B0 * phi_one_closed(p, k) * (1.0 + th) / (2.0 * k);
    double n2;
    if (p >= 2) {
        n2 = ns.B1 * phi_one_closed(p + 1, k) * (1.0 - th) / (2.0 * k);
    } else {
        const double f1 = phi_one_closed(1, k);
        n2 = ((1.0 - th) * ns.B1 * phi_one_closed(2, k) +
              (1.0 + th) / k * ns.B0 * ns.B0 * f1 * f1) /
             (2.0 * k);
    }
    const double zp1 = 2.0 * n1;
    const double zp2 = 2.0 * n2 + (p == 1 ? 2.0 * n1 * n1 : 0.0);
    return {zp1, zp2};
}

// Full pipeline: normalize, solve v in the four quadrant systems, match at
// the positive then the negative y-axis starting from eta = 1, and read off
// Z(eps) = eps * eta_out(eps).
inline ReturnMapResult return_map(const SystemSpec& spec, int order, int working_order = 12) {
    NormalizedSystem ns = normalize(spec, std::max(order, working_order));
    if (order < ns.p + 1) throw OrderTooLow("return_map: order must be at least p+1");
    const int n_int = order - 1;

    const NormalizedSystem ns2 = quadrant_transform(ns, Quadrant::J2);
    const NormalizedSystem ns3 = quadrant_transform(ns, Quadrant::J3);
    const NormalizedSystem ns4 = quadrant_transform(ns, Quadrant::J4);
    const VSolution vsF = solve_v(ns, n_int);
    const VSolution vs2 = solve_v(ns2, n_int);
    const VSolution vs3 = solve_v(ns3, n_int);
    const VSolution vs4 = solve_v(ns4, n_int);

    ScalarSeries eta = ScalarSeries::zero(n_int);
    eta[0] = 1.0;
    const ScalarSeries eta1 = matching_step(ns, vsF, ns2, vs2, eta);
    const ScalarSeries eta2 = matching_step(ns3, vs3, ns4, vs4, eta1);

    ReturnMapResult res;
    res.p = ns.p;
    res.bounds = contraction_bounds(ns);
    res.Z = ScalarSeries::zero(order);
    for (int n = 1; n <= order; ++n) res.Z[n] = eta2[n - 1];
    auto cf = closed_form_leading(ns);
    res.Zp1_closed = cf.first;
    res.Zp2_closed = cf.second;

    // leftover matching defect, for the report
    const ScalarSeries d1 =
        side_value_series(ns2, vs2, eta1) - side_value_series(ns, vsF, eta);
    const ScalarSeries d2 =
        side_value_series(ns4, vs4, eta2) - side_value_series(ns3, vs3, eta1);
    double defect = 0.0;
    for (int n = 0; n <= n_int; ++n)
        defect = std::max({defect, std::abs(d1[n]), std::abs(d2[n])});
    res.matching_residual = defect;
    res.ns = std::move(ns);
    return res;
}

struct Classification {
    enum class Kind { Focus, CenterCandidate };
    Kind kind = Kind::CenterCandidate;
    int order = 0;        // first order with |Z_n| > tol (focus only)
    int sign = 0;         // sign of that coefficient (focus only)
    int verified_up_to = 0;

    bool is_focus() const { return kind == Kind::Focus; }
};

// Focus if some |Z_n| exceeds tol; otherwise only a candidate for a center
// (the vanishing of finitely many Z_n is a necessary condition).
inline Classification classify(const ReturnMapResult& res, double tol = 1e-7) {
    Classification c;
    c.verified_up_to = res.Z.order();
    for (int n = 2; n <= res.Z.order(); ++n) {
        if (std::abs(res.Z[n]) > tol) {
            c.kind = Classification::Kind::Focus;
            c.order = n;
            c.sign = res.Z[n] > 0 ? 1 : -1;
            return c;
        }
    }
    return c;
}

}  // namespace centfoc
