#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "centfoc/errors.hpp"
#include "centfoc/series.hpp"

namespace centfoc {

// The input vector field
//   dz/dt = -w f(z) + z^{l+1} g(z),  dw/dt = k z^{2k-1} f(z) + k w z^l g(z)
// given by the Taylor coefficients of the polynomials f, g and the integers
// k, l.
struct SystemSpec {
    std::vector<double> f;
    std::vector<double> g;
    int k = 1;
    int l = 1;
};

inline void validate(const SystemSpec& spec) {
    if (spec.f.empty() || std::abs(spec.f[0]) <= 1e-14)
        throw AssumptionViolation("f0_zero", "f(0) must be nonzero");
    if (spec.k < 1 || spec.k > spec.l + 1)
        throw AssumptionViolation("k_range", "k must satisfy 1 <= k <= l+1");
    if (spec.k == spec.l + 1)
        throw AssumptionViolation("k_equals_l_plus_1", "the case k = l+1 is excluded");
}

inline double poly_eval(const std::vector<double>& c, double z) {
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
    return r;
}

inline std::complex<double> poly_eval(const std::vector<double>& c, std::complex<double> z) {
    std::complex<double> r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
    return r;
}

enum class Quadrant { J2, J3, J4 };

// Normal-form data derived from a SystemSpec: F = g/f, p = l-k+1,
// A = 1 + z^{2p} F^2, the B series with B_m = 2(m+p+2k) F_m, and the sign
// theta_p = (-1)^{p+k-1} steering the quadrant matching.
struct NormalizedSystem {
    ScalarSeries F;
    int p = 1;
    int k = 1;
    int l = 1;
    ScalarSeries A;
    ScalarSeries Bser;
    double B0 = 0.0;
    double B1 = 0.0;
    double theta_p = 1.0;
    double radius_r = 1.0;

    NormalizedSystem()
        : F(ScalarSeries::zero(0)), A(ScalarSeries::zero(0)), Bser(ScalarSeries::zero(0)) {}

    double eval_A(double z) const { return series_eval(A, z); }
    double eval_B(double z) const { return series_eval(Bser, z); }
};

namespace detail {

// 0.8 x empirical root-test radius of the coefficient sequence, floored at
// 10x the largest epsilon in use (0.08) and capped at 1.
inline double validated_radius(const ScalarSeries& F) {
    double rho = 1.25;
    const double scale = std::max(1.0, ring_norm(F[0]));
    bool any = false;
    double min_r = 1e300;
    for (int m = 1; m <= F.order(); ++m) {
        if (std::abs(F[m]) > 1e-13 * scale) {
            any = true;
            min_r = std::min(min_r, std::pow(std::abs(F[m]), -1.0 / m));
        }
    }
    if (any) rho = std::min(rho, min_r);
    return std::max(0.8, std::min(1.0, 0.8 * rho));
}

inline NormalizedSystem from_F(ScalarSeries F, int k, int l) {
    NormalizedSystem ns;
    ns.k = k;
    ns.l = l;
    ns.p = l - k + 1;
    const int W = F.order();
    // A = 1 + z^{2p} F^2
    ScalarSeries F2 = F * F;
    ScalarSeries A = ScalarSeries::zero(W);
    A[0] = 1.0;
    for (int m = 2 * ns.p; m <= W; ++m) A[m] += F2[m - 2 * ns.p];
    // B_m = 2 (m + p + 2k) F_m  (from B = 2 z F' + 2(p+2k) F)
    ScalarSeries B = ScalarSeries::zero(W);
    for (int m = 0; m <= W; ++m) B[m] = 2.0 * (m + ns.p + 2 * k) * F[m];
    ns.B0 = B[0];
    ns.B1 = W >= 1 ? B[1] : 0.0;
    ns.theta_p = ((ns.p + k - 1) % 2 == 0) ? 1.0 : -1.0;
    ns.radius_r = validated_radius(F);
    ns.F = std::move(F);
    ns.A = std::move(A);
    ns.Bser = std::move(B);
    return ns;
}

}  // namespace detail

inline NormalizedSystem normalize(const SystemSpec& spec, int working_order = 12) {
    validate(spec);
    // F = g/f by series division
    ScalarSeries F = ScalarSeries::zero(working_order);
    for (int n = 0; n <= working_order; ++n) {
        double acc = n < static_cast<int>(spec.g.size()) ? spec.g[n] : 0.0;
        for (int i = 1; i <= n && i < static_cast<int>(spec.f.size()); ++i)
            acc -= spec.f[i] * F[n - i];
        F[n] = acc / spec.f[0];
    }
    return detail::from_F(std::move(F), spec.k, spec.l);
}

// Replace F by J_i F:
//   (J2 F)(z) = (-1)^{p+k} F(-z),  (J3 F)(z) = (-1)^{p+k-1} F(-z),
//   (J4 F)(z) = -F(z).
// All derived quantities are recomputed from the new F.
inline NormalizedSystem quadrant_transform(const NormalizedSystem& ns, Quadrant which) {
    ScalarSeries F = ns.F;
    const double sgn_pk = ((ns.p + ns.k) % 2 == 0) ? 1.0 : -1.0;
    for (int m = 0; m <= F.order(); ++m) {
        double s = 0.0;
        const double alt = (m % 2 == 0) ? 1.0 : -1.0;
        switch (which) {
            case Quadrant::J2: s = sgn_pk * alt; break;
            case Quadrant::J3: s = -sgn_pk * alt; break;
            case Quadrant::J4: s = -1.0; break;
        }
        F[m] *= s;
    }
    NormalizedSystem out = detail::from_F(std::move(F), ns.k, ns.l);
    out.radius_r = ns.radius_r;  // |J_i F| has the same coefficient moduli
    return out;
}

// Point on the transversal T: f(z) w = z^{l+1} g(z), in the original
// coordinates. Seeds oracle runs in (z,w) coordinates.
inline double transversal_w(const SystemSpec& spec, double z) {
    NormalizedSystem ns = normalize(spec);
    if (std::abs(z) > ns.radius_r)
        throw OutOfRadius("transversal_w: |z| exceeds validated radius");
    return std::pow(z, spec.l + 1) * poly_eval(spec.g, z) / poly_eval(spec.f, z);
}

// Numeric constants realizing the contraction estimates: c0 bounds |A-1| on
// |z| <= r_eff, M bounds |B|, and delta0 is the largest delta for which the
// fixed-point operator is provably a contraction with ball radius mu.
struct ContractionBounds {
    double r_eff = 0.0;
    double c0 = 0.0;
    double M = 0.0;
    double mu = 0.0;
    double delta0 = 0.0;
};

namespace detail {

inline double sup_on_circle(const ScalarSeries& s, double r, double shift) {
    double m = 0.0;
    const double pi = 3.14159265358979323846;
    for (int j = 0; j < 720; ++j) {
        std::complex<double> z = std::polar(r, 2 * pi * j / 720);
        std::complex<double> v = 0.0;
        for (int i = s.order(); i >= 0; --i) v = v * z + s[i];
        m = std::max(m, std::abs(v - shift));
    }
    return m;
}

}  // namespace detail

inline ContractionBounds contraction_bounds(const NormalizedSystem& ns) {
    ContractionBounds cb;
    const double k = ns.k;
    const double target = 0.5 / (2.0 * k);
    double r = ns.radius_r;
    if (detail::sup_on_circle(ns.A, r, 1.0) > target) {
        double lo = 0.0, hi = r;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            (detail::sup_on_circle(ns.A, mid, 1.0) > target ? hi : lo) = mid;
        }
        r = lo;
    }
    cb.r_eff = r;
    cb.c0 = detail::sup_on_circle(ns.A, r, 1.0);
    cb.M = detail::sup_on_circle(ns.Bser, r, 0.0);
    cb.mu = 0.5 * (1.0 - 2.0 * k * cb.c0);
    if (cb.M <= 1e-300) {
        cb.delta0 = r;
        return cb;
    }
    const double b1 =
        std::pow(3.0 * cb.mu / (2.0 * std::sqrt(2.0 * k * (1.0 + cb.c0) + cb.mu) * cb.M),
                 1.0 / ns.p);
    const double b2 =
        std::pow(3.0 * std::sqrt(1.0 - 2.0 * k * cb.c0 - cb.mu) / cb.M, 1.0 / ns.p);
    cb.delta0 = std::min({r, b1, b2});
    return cb;
}

}  // namespace centfoc
