#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "centfoc/errors.hpp"
#include "centfoc/retmap.hpp"
#include "centfoc/system.hpp"
#include "centfoc/vsolver.hpp"

namespace centfoc {

// One detected return to the transversal, in original coordinates.
struct OrbitCrossing {
    double z_return = 0.0;
    int n_steps = 0;
    double err_estimate = 0.0;
    int half_turns = 0;  // x-axis crossings along the loop; must end at 2
    bool outside_eta_window = false;
};

namespace detail {

struct State {
    double x, y;
};

// Right-hand side of the rescaled system
//   x' = -2y,  y' = 2k x^{2k-1} A(eps x) + eps^p y x^{p+k-1} B(eps x)
// with A, B evaluated exactly from the rational functions of the input
// polynomials.
class RescaledField {
public:
    RescaledField(const SystemSpec& spec, double eps)
        : spec_(spec), eps_(eps), p_(spec.l - spec.k + 1), eps_p_(std::pow(eps, p_)) {}

    State operator()(const State& s) const {
        const int k = spec_.k;
        const double z = eps_ * s.x;
        const double fz = poly_eval(spec_.f, z);
        const double gz = poly_eval(spec_.g, z);
        const double F = gz / fz;
        const double A = 1.0 + std::pow(z, 2 * p_) * F * F;
        double dF = 0.0;  // F' = (g' f - g f') / f^2
        {
            double gp = 0.0, fp = 0.0;
            for (int i = 1; i < static_cast<int>(spec_.g.size()); ++i)
                gp += i * spec_.g[i] * std::pow(z, i - 1);
            for (int i = 1; i < static_cast<int>(spec_.f.size()); ++i)
                fp += i * spec_.f[i] * std::pow(z, i - 1);
            dF = (gp * fz - gz * fp) / (fz * fz);
        }
        const double B = 2.0 * z * dF + 2.0 * (p_ + 2 * k) * F;
        State d;
        d.x = -2.0 * s.y;
        d.y = 2.0 * k * std::pow(s.x, 2 * k - 1) * A +
              eps_p_ * s.y * std::pow(s.x, p_ + k - 1) * B;
        return d;
    }

private:
    const SystemSpec& spec_;
    double eps_;
    int p_;
    double eps_p_;
};

// Classic Dormand-Prince 5(4) step. Returns the 5th-order solution and the
// embedded error estimate; k1 in/out enables FSAL reuse.
template <class RHS>
State dopri5_step(const RHS& f, const State& y0, double h, const State& k1, State& k_last,
                  double& err, double atol, double rtol) {
    auto axpy = [](const State& y, std::initializer_list<std::pair<double, const State*>> terms,
                   double h) {
        State r = y;
        for (auto& [c, k] : terms) {
            r.x += h * c * k->x;
            r.y += h * c * k->y;
        }
        return r;
    };
    const State k2 = f(axpy(y0, {{1.0 / 5, &k1}}, h));
    const State k3 = f(axpy(y0, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}, h));
    const State k4 = f(axpy(y0, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}, h));
    const State k5 = f(axpy(y0,
                            {{19372.0 / 6561, &k1},
                             {-25360.0 / 2187, &k2},
                             {64448.0 / 6561, &k3},
                             {-212.0 / 729, &k4}},
                            h));
    const State k6 = f(axpy(y0,
                            {{9017.0 / 3168, &k1},
                             {-355.0 / 33, &k2},
                             {46732.0 / 5247, &k3},
                             {49.0 / 176, &k4},
                             {-5103.0 / 18656, &k5}},
                            h));
    const State y5 = axpy(y0,
                          {{35.0 / 384, &k1},
                           {500.0 / 1113, &k3},
                           {125.0 / 192, &k4},
                           {-2187.0 / 6784, &k5},
                           {11.0 / 84, &k6}},
                          h);
    const State k7 = f(y5);
    // embedded 4th-order difference
    const double ex = h * ((35.0 / 384 - 5179.0 / 57600) * k1.x +
                           (500.0 / 1113 - 7571.0 / 16695) * k3.x +
                           (125.0 / 192 - 393.0 / 640) * k4.x +
                           (-2187.0 / 6784 + 92097.0 / 339200) * k5.x +
                           (11.0 / 84 - 187.0 / 2100) * k6.x - (1.0 / 40) * k7.x);
    const double ey = h * ((35.0 / 384 - 5179.0 / 57600) * k1.y +
                           (500.0 / 1113 - 7571.0 / 16695) * k3.y +
                           (125.0 / 192 - 393.0 / 640) * k4.y +
                           (-2187.0 / 6784 + 92097.0 / 339200) * k5.y +
                           (11.0 / 84 - 187.0 / 2100) * k6.y - (1.0 / 40) * k7.y);
    const double sx = atol + rtol * std::max(std::abs(y0.x), std::abs(y5.x));
    const double sy = atol + rtol * std::max(std::abs(y0.y), std::abs(y5.y));
    err = std::sqrt(0.5 * ((ex / sx) * (ex / sx) + (ey / sy) * (ey / sy)));
    k_last = k7;
    return y5;
}

}  // namespace detail

// Integrate the rescaled system from (x,y) = (1,0) and detect the first
// crossing of y = 0 with x > 0 and y' > 0 (the straightened transversal).
// Crossings with x < 0 are counted as half turns but not accepted. The event
// time is refined by safeguarded Newton on re-stepped sub-steps.
inline OrbitCrossing numeric_return(const SystemSpec& spec, double eps, double tol = 1e-12) {
    validate(spec);
    if (tol < 1e-13 || tol > 1e-6)
        throw Error("bad_tolerance", "numeric_return: tol must be in [1e-13, 1e-6]");
    const NormalizedSystem ns = normalize(spec);
    const double eps_max = 0.5 * ns.radius_r;
    if (!(eps > 0.0) || eps > eps_max)
        throw Error("eps_out_of_range", "numeric_return: need 0 < eps <= 0.5*radius_r");

    const detail::RescaledField f(spec, eps);
    const double atol = tol / 10.0, rtol = tol / 10.0;

    detail::State y{1.0, 0.0};
    detail::State k1 = f(y);
    double h = 1e-3;
    OrbitCrossing oc;
    const int max_steps = 2'000'000;

    for (int step = 0; step < max_steps; ++step) {
        if (std::abs(y.x) > 2.0 || std::abs(y.y) > 2.0)
            throw NoReturnDetected("orbit left the validated box; eps too large");
        double err = 0.0;
        detail::State k_last{0.0, 0.0};
        detail::State y_new = detail::dopri5_step(f, y, h, k1, k_last, err, atol, rtol);
        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.25));
            continue;
        }
        ++oc.n_steps;
        oc.err_estimate += err * atol;

        // sign change of y across the accepted step
        if (y.y < 0.0 && y_new.y >= 0.0) {
            // refine tau in [0,h] with y(tau) = 0 by Newton + bisection on
            // single sub-steps from the step start (accuracy of a shorter step)
            double lo = 0.0, hi = h, tau = h * y.y / (y.y - y_new.y);
            detail::State ev = y_new;
            for (int it = 0; it < 100; ++it) {
                if (!(tau > lo && tau < hi)) tau = 0.5 * (lo + hi);
                double e2 = 0.0;
                detail::State kl{0.0, 0.0};
                ev = detail::dopri5_step(f, y, tau, k1, kl, e2, atol, rtol);
                if (std::abs(ev.y) <= tol || hi - lo < 1e-15) break;
                (ev.y < 0.0 ? lo : hi) = tau;
                const double dy = f(ev).y;
                tau = (dy != 0.0) ? tau - ev.y / dy : 0.5 * (lo + hi);
            }
            ++oc.half_turns;
            if (ev.x > 0.0 && f(ev).y > 0.0) {
                oc.z_return = eps * ev.x;
                oc.err_estimate = std::max(oc.err_estimate, tol);
                if (std::abs(ev.x - 1.0) >= kEtaNeighborhood) oc.outside_eta_window = true;
                return oc;
            }
        } else if (y.y >= 0.0 && y_new.y < 0.0) {
            ++oc.half_turns;  // top-to-bottom crossing happens at x < 0
        }

        y = y_new;
        k1 = k_last;  // FSAL
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    }
    throw NoReturnDetected("step budget exceeded before the first return");
}

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Least-squares line on (log eps, log |residual|); the slope estimates the
// remainder order of a truncated series.
inline FitResult order_fit(const std::vector<std::pair<double, double>>& samples,
                           double noise_floor) {
    if (samples.size() < 3)
        throw Error("too_few_samples", "order_fit: need at least 3 samples");
    for (auto& [e, r] : samples)
        if (std::abs(r) <= noise_floor)
            throw ResidualBelowNoiseFloor("order_fit: residual within noise floor");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(samples.size());
    for (auto& [e, r] : samples) {
        const double x = std::log(e), y = std::log(std::abs(r));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    FitResult fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    const double den = (n * sxx - sx * sx) * (n * syy - sy * sy);
    fit.r_squared = den > 0 ? (n * sxy - sx * sy) * (n * sxy - sx * sy) / den : 1.0;
    return fit;
}

// Everything verify() measures for one input system.
struct VerificationReport {
    int order = 0;
    ScalarSeries Z = ScalarSeries::zero(0);
    double Zp1_closed = 0.0, Zp2_closed = 0.0;
    double closed_form_error = 0.0;
    double fixed_point_res = 0.0;
    ContractionBounds bounds;
    std::vector<double> eps_used;
    std::vector<double> z_numeric;
    std::vector<double> residuals;
    std::vector<double> eps_skipped;
    FitResult fit;
    bool fit_valid = false;
    bool noise_floor = false;
    double oracle_tol = 1e-12;
    struct Item {
        std::string stage, code, message;
    };
    std::vector<Item> errors;

    bool passes(double closed_tol = 1e-8, double fp_tol = 1e-8, double slope_margin = 0.2,
                double abs_floor = 1e-9) const {
        if (!errors.empty()) return false;
        if (closed_form_error > closed_tol) return false;
        if (fixed_point_res > fp_tol) return false;
        if (fit_valid) return fit.slope >= order + 1 - slope_margin;
        double worst = 0.0;
        for (double r : residuals) worst = std::max(worst, std::abs(r));
        return worst <= abs_floor;
    }
};

// Run the series pipeline and the ODE oracle side by side and report
// residuals, the fitted remainder order, the fixed-point defect, and the
// closed-form cross-check.
inline VerificationReport verify(const SystemSpec& spec, int order,
                                 const std::vector<double>& eps_list, double tol = 1e-12) {
    VerificationReport rep;
    rep.order = order;
    rep.oracle_tol = tol;

    ReturnMapResult rm;
    try {
        rm = return_map(spec, order);
    } catch (const Error& e) {
        rep.errors.push_back({"return_map", e.code(), e.what()});
        return rep;
    }
    rep.Z = rm.Z;
    rep.Zp1_closed = rm.Zp1_closed;
    rep.Zp2_closed = rm.Zp2_closed;
    rep.bounds = rm.bounds;
    const int p = rm.p;
    rep.closed_form_error =
        std::max(p + 1 <= order ? std::abs(rm.Z[p + 1] - rm.Zp1_closed) : 0.0,
                 p + 2 <= order ? std::abs(rm.Z[p + 2] - rm.Zp2_closed) : 0.0);

    try {
        VSolution vs = solve_v(rm.ns, std::max(6, rm.p));
        std::vector<double> deltas;
        for (double d : {0.04, 0.08})
            if (d <= rm.bounds.delta0) deltas.insert(deltas.end(), {d, -d});
        if (deltas.empty()) deltas = {0.5 * rm.bounds.delta0, -0.5 * rm.bounds.delta0};
        rep.fixed_point_res = fixed_point_residual(vs, deltas);
        if (rep.fixed_point_res > 1e-8) {
            // the order-6 truncation tail can dominate at the larger delta;
            // re-measure with the next orders included before judging the solver
            VSolution deeper = solve_v(rm.ns, std::max(9, rm.p));
            rep.fixed_point_res = fixed_point_residual(deeper, deltas);
        }
    } catch (const Error& e) {
        rep.errors.push_back({"fixed_point", e.code(), e.what()});
    }

    const double eps_max_gate =
        p + 1 <= order && std::abs(rm.Z[p + 1]) > 0.0
            ? std::pow(0.2 / std::abs(rm.Z[p + 1]), 1.0 / p)
            : 1e300;
    for (double eps : eps_list) {
        if (eps > eps_max_gate || eps > 0.5 * rm.ns.radius_r) {
            rep.eps_skipped.push_back(eps);
            continue;
        }
        try {
            OrbitCrossing oc = numeric_return(spec, eps, tol);
            rep.eps_used.push_back(eps);
            rep.z_numeric.push_back(oc.z_return);
            rep.residuals.push_back(oc.z_return - series_eval(rm.Z, eps));
        } catch (const Error& e) {
            rep.errors.push_back({"numeric_return", e.code(), e.what()});
        }
    }

    // slope fit on samples clear of the integrator noise floor
    const double floor = 10.0 * tol;
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < rep.eps_used.size(); ++i)
        if (std::abs(rep.residuals[i]) > floor)
            pts.emplace_back(rep.eps_used[i], std::abs(rep.residuals[i]));
    if (pts.size() >= 3) {
        rep.fit = order_fit(pts, floor);
        rep.fit_valid = true;
    } else {
        rep.noise_floor = true;
    }
    return rep;
}

}  // namespace centfoc
