#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "centfoc/errors.hpp"

namespace centfoc {

namespace detail {

// Clenshaw-Curtis rule on [-1,1] with n+1 Lobatto nodes x_j = cos(j*pi/n).
// Weights are generated from the cosine-series integrals, so the rule is
// exact on polynomials of degree n and the nested n -> 2n pair gives an
// error estimate for free.
struct CCRule {
    int n;
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit CCRule(int n_) : n(n_), nodes(n_ + 1), weights(n_ + 1, 0.0) {
        const double pi = 3.14159265358979323846;
        for (int j = 0; j <= n; ++j) nodes[j] = std::cos(j * pi / n);
        for (int j = 0; j <= n; ++j) {
            double wj = 0.0;
            for (int m = 0; m <= n; m += 2) {
                double term = 2.0 / (1.0 - double(m) * m) * std::cos(m * j * pi / n);
                if (m == 0 || m == n) term *= 0.5;
                wj += term;
            }
            wj *= 2.0 / n;
            if (j == 0 || j == n) wj *= 0.5;
            weights[j] = wj;
        }
    }
};

inline const CCRule& cc_rule(int n) {
    static const CCRule r16(16);
    static const CCRule r32(32);
    return n == 16 ? r16 : r32;
}

}  // namespace detail

// Adaptive quadrature of a smooth function on [a,b]; panels are accepted on
// agreement of the nested 16/32-point Clenshaw-Curtis pair and bisected
// otherwise. Throws QuadratureFailure when the subdivision depth cap is hit.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12, int max_depth = 30) {
    if (a == b) return 0.0;
    const double total_len = std::abs(b - a);

    struct Panel {
        double a, b;
        int depth;
    };
    std::vector<Panel> stack{{a, b, 0}};
    double sum = 0.0;

    const auto& coarse = detail::cc_rule(16);
    const auto& fine = detail::cc_rule(32);

    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double half = 0.5 * (p.b - p.a);

        // Fine nodes contain the coarse ones at even indices.
        double fvals[33];
        for (int j = 0; j <= 32; ++j) fvals[j] = f(mid + half * fine.nodes[j]);

        double i_fine = 0.0, i_coarse = 0.0;
        for (int j = 0; j <= 32; ++j) i_fine += fine.weights[j] * fvals[j];
        for (int j = 0; j <= 16; ++j) i_coarse += coarse.weights[j] * fvals[2 * j];
        i_fine *= half;
        i_coarse *= half;

        const double err = std::abs(i_fine - i_coarse);
        const double local_tol = abs_tol * std::abs(p.b - p.a) / total_len;
        if (err <= std::max(local_tol, 1e-16 * std::abs(i_fine)) || err <= 1e-300) {
            sum += i_fine;
            continue;
        }
        if (p.depth >= max_depth)
            throw QuadratureFailure("quadrature did not converge within subdivision cap");
        stack.push_back({p.a, mid, p.depth + 1});
        stack.push_back({mid, p.b, p.depth + 1});
    }
    return sum;
}

}  // namespace centfoc
