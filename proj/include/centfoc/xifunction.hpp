#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "centfoc/errors.hpp"

namespace centfoc {

// A smooth function of xi in [0,1], stored as a Chebyshev-Lobatto
// interpolant (barycentric evaluation). The degree adapts until the
// interpolant reproduces the sampled function at off-node points.
class XiFunction {
public:
    static constexpr double kDefaultTol = 1e-12;
    static constexpr int kMaxDegree = 512;

    XiFunction() : vals_{0.0, 0.0} {}

    static XiFunction constant(double v) {
        XiFunction f;
        f.vals_ = {v, v};
        return f;
    }

    template <class F>
    static XiFunction build(F&& fn, int initial_degree = 16, double tol = kDefaultTol) {
        int n = std::max(8, initial_degree);
        // round up to a power of two so grids nest
        int n2 = 8;
        while (n2 < n) n2 *= 2;
        n = n2;
        while (true) {
            const int m = 2 * n;
            if (m > kMaxDegree)
                throw InterpolationFailure("interpolation degree cap exceeded");
            std::vector<double> fine(m + 1);
            double scale = 1.0;
            for (int j = 0; j <= m; ++j) {
                fine[j] = fn(node(j, m));
                if (!std::isfinite(fine[j]))
                    throw InterpolationFailure("non-finite sample while interpolating");
                scale = std::max(scale, std::abs(fine[j]));
            }
            XiFunction coarse;
            coarse.vals_.resize(n + 1);
            for (int j = 0; j <= n; ++j) coarse.vals_[j] = fine[2 * j];
            double err = 0.0;
            for (int j = 1; j < m; j += 2)
                err = std::max(err, std::abs(coarse(node(j, m)) - fine[j]));
            if (err <= tol * scale) {
                coarse.trim(tol * scale);
                return coarse;
            }
            n = m;
        }
    }

    int degree() const { return static_cast<int>(vals_.size()) - 1; }

    double operator()(double xi) const {
        const int n = degree();
        // barycentric formula; exact hit on a node short-circuits
        double num = 0.0, den = 0.0;
        for (int j = 0; j <= n; ++j) {
            double d = xi - node(j, n);
            if (std::abs(d) < 1e-15) return vals_[j];
            double w = (j % 2 == 0) ? 1.0 : -1.0;
            if (j == 0 || j == n) w *= 0.5;
            double t = w / d;
            num += t * vals_[j];
            den += t;
        }
        return num / den;
    }

    friend XiFunction operator+(const XiFunction& a, const XiFunction& b) {
        return combine(a, b, [](double x, double y) { return x + y; });
    }
    friend XiFunction operator-(const XiFunction& a, const XiFunction& b) {
        return combine(a, b, [](double x, double y) { return x - y; });
    }
    friend XiFunction operator*(const XiFunction& a, const XiFunction& b) {
        return build([&](double x) { return a(x) * b(x); },
                     std::min(kMaxDegree / 2, a.degree() + b.degree()));
    }

    XiFunction scaled(double s) const {
        XiFunction out = *this;
        for (double& v : out.vals_) v *= s;
        return out;
    }

    XiFunction pow_int(int m) const {
        if (m == 0) return constant(1.0);
        return build([this, m](double x) { return std::pow((*this)(x), m); },
                     std::min(kMaxDegree / 2, m * degree()));
    }

    // Pointwise square root; requires the sampled minimum to clear `floor`.
    XiFunction sqrt_checked(double floor = 1e-6) const {
        if (min_value() <= floor)
            throw NonInvertibleLeadingCoefficient(
                "pointwise sqrt: function minimum at or below floor");
        return build([this](double x) { return std::sqrt((*this)(x)); }, degree());
    }

    XiFunction recip_checked(double floor = 1e-6) const {
        if (min_abs() <= floor)
            throw NonInvertibleLeadingCoefficient(
                "pointwise reciprocal: |function| minimum at or below floor");
        return build([this](double x) { return 1.0 / (*this)(x); }, degree());
    }

    double sup_norm() const {
        double m = 0.0;
        for (double v : vals_) m = std::max(m, std::abs(v));
        return m;
    }

    double min_value() const {
        double m = std::numeric_limits<double>::infinity();
        for (double v : vals_) m = std::min(m, v);
        for (int i = 0; i <= 256; ++i) m = std::min(m, (*this)(i / 256.0));
        return m;
    }

private:
    // Drop to the nested half grid while it still reproduces the stored
    // node values; keeps degrees from ratcheting up across operations.
    void trim(double abs_tol) {
        while (degree() >= 16 && degree() % 2 == 0) {
            const int n = degree();
            XiFunction half;
            half.vals_.resize(n / 2 + 1);
            for (int j = 0; j <= n / 2; ++j) half.vals_[j] = vals_[2 * j];
            double err = 0.0;
            for (int j = 1; j < n; j += 2)
                err = std::max(err, std::abs(half(node(j, n)) - vals_[j]));
            if (err > abs_tol) break;
            vals_ = std::move(half.vals_);
        }
    }

    static double node(int j, int n) {
        const double pi = 3.14159265358979323846;
        return 0.5 * (1.0 - std::cos(j * pi / n));
    }

    template <class Op>
    static XiFunction combine(const XiFunction& a, const XiFunction& b, Op op) {
        return build([&](double x) { return op(a(x), b(x)); },
                     std::max(a.degree(), b.degree()));
    }

    double min_abs() const {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 256; ++i) m = std::min(m, std::abs((*this)(i / 256.0)));
        return m;
    }

    std::vector<double> vals_;  // values at Chebyshev-Lobatto nodes on [0,1]
};

}  // namespace centfoc
