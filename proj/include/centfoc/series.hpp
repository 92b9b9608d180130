#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "centfoc/errors.hpp"
#include "centfoc/xifunction.hpp"

namespace centfoc {

// Ring glue so CoeffSeries works over plain doubles and over xi-functions.
inline double ring_zero(double) { return 0.0; }
inline double ring_scale(double a, double s) { return a * s; }
inline double ring_norm(double a) { return std::abs(a); }
inline double ring_min(double a) { return a; }
inline double ring_sqrt(double a, double floor) {
    if (a <= floor)
        throw NonInvertibleLeadingCoefficient("scalar sqrt: value at or below floor");
    return std::sqrt(a);
}
inline double ring_recip(double a, double floor) {
    if (std::abs(a) <= floor)
        throw NonInvertibleLeadingCoefficient("scalar reciprocal: value at or below floor");
    return 1.0 / a;
}

inline XiFunction ring_zero(const XiFunction&) { return XiFunction::constant(0.0); }
inline XiFunction ring_scale(const XiFunction& a, double s) { return a.scaled(s); }
inline double ring_norm(const XiFunction& a) { return a.sup_norm(); }
inline double ring_min(const XiFunction& a) { return a.min_value(); }
inline XiFunction ring_sqrt(const XiFunction& a, double floor) {
    return a.sqrt_checked(floor);
}
inline XiFunction ring_recip(const XiFunction& a, double floor) {
    return a.recip_checked(floor);
}

// Truncated power series with coefficients in R (doubles, or functions of
// xi). The truncation order is explicit: binary operations return the
// minimum of the operand orders, never silently more.
template <class R>
class CoeffSeries {
public:
    static constexpr double kSqrtFloor = 1e-6;

    explicit CoeffSeries(std::vector<R> coeffs) : c_(std::move(coeffs)) {}

    static CoeffSeries zero(int order, const R& like = R{}) {
        return CoeffSeries(std::vector<R>(order + 1, ring_zero(like)));
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const R& operator[](int n) const { return c_[n]; }
    R& operator[](int n) { return c_[n]; }
    const std::vector<R>& coeffs() const { return c_; }

    CoeffSeries truncated(int order) const {
        std::vector<R> c(c_.begin(), c_.begin() + std::min<int>(order + 1, c_.size()));
        while (static_cast<int>(c.size()) < order + 1) c.push_back(ring_zero(c_[0]));
        return CoeffSeries(std::move(c));
    }

    friend CoeffSeries operator+(const CoeffSeries& a, const CoeffSeries& b) {
        const int n = std::min(a.order(), b.order());
        std::vector<R> c;
        c.reserve(n + 1);
        for (int i = 0; i <= n; ++i) c.push_back(a[i] + b[i]);
        return CoeffSeries(std::move(c));
    }

    friend CoeffSeries operator-(const CoeffSeries& a, const CoeffSeries& b) {
        const int n = std::min(a.order(), b.order());
        std::vector<R> c;
        c.reserve(n + 1);
        for (int i = 0; i <= n; ++i) c.push_back(a[i] - b[i]);
        return CoeffSeries(std::move(c));
    }

    // Cauchy product truncated to the common order.
    friend CoeffSeries operator*(const CoeffSeries& a, const CoeffSeries& b) {
        const int n = std::min(a.order(), b.order());
        std::vector<R> c(n + 1, ring_zero(a[0]));
        for (int i = 0; i <= n; ++i)
            for (int j = 0; i + j <= n && j <= b.order(); ++j)
                c[i + j] = c[i + j] + a[i] * b[j];
        return CoeffSeries(std::move(c));
    }

    CoeffSeries scaled(double s) const {
        std::vector<R> c;
        c.reserve(c_.size());
        for (const R& v : c_) c.push_back(ring_scale(v, s));
        return CoeffSeries(std::move(c));
    }

    // Series square root: s*s == *this to the truncation order. The leading
    // coefficient must stay above the floor pointwise.
    CoeffSeries sqrt(double floor = kSqrtFloor) const {
        const int n = order();
        std::vector<R> s;
        s.reserve(n + 1);
        s.push_back(ring_sqrt(c_[0], floor));
        if (n >= 1) {
            R inv2s0 = ring_recip(ring_scale(s[0], 2.0), floor);
            for (int m = 1; m <= n; ++m) {
                R acc = c_[m];
                for (int i = 1; i < m; ++i) acc = acc - s[i] * s[m - i];
                s.push_back(acc * inv2s0);
            }
        }
        return CoeffSeries(std::move(s));
    }

private:
    std::vector<R> c_;
};

using ScalarSeries = CoeffSeries<double>;
using XiSeries = CoeffSeries<XiFunction>;

// Formal composition a(h(eps)) for scalar series; h must have zero constant
// term. Result is truncated to h's order.
inline ScalarSeries series_substitute(const ScalarSeries& a, const ScalarSeries& h) {
    if (std::abs(h[0]) > 1e-14)
        throw NonzeroConstantTerm("series_substitute: inner series has nonzero constant term");
    const int n = h.order();
    ScalarSeries result = ScalarSeries::zero(n);
    // Horner over the outer coefficients
    for (int i = std::min(a.order(), n); i >= 0; --i) {
        result = result * h;
        result[0] += a[i];
    }
    return result;
}

inline double series_eval(const ScalarSeries& a, double x) {
    double r = 0.0;
    for (int i = a.order(); i >= 0; --i) r = r * x + a[i];
    return r;
}

// Substitute z = delta * w(xi) into a scalar series B(z): the coefficient of
// delta^m is B_m * w(xi)^m.
inline XiSeries apply_function_series(const ScalarSeries& b, const XiFunction& w) {
    std::vector<XiFunction> c;
    c.reserve(b.order() + 1);
    for (int m = 0; m <= b.order(); ++m) c.push_back(w.pow_int(m).scaled(b[m]));
    return XiSeries(std::move(c));
}

}  // namespace centfoc
