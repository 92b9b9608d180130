#include <doctest.h>

#include <cmath>

#include "centfoc/profile.hpp"

using namespace centfoc;

namespace {
const double pi = 3.14159265358979323846;
}

TEST_CASE("base profile: closed form for k=1 and endpoint values") {
    for (double xi : {0.0, 0.1, 0.5, 0.9, 1.0})
        CHECK(p0_value(1, xi) == doctest::Approx(2.0 - xi * xi).epsilon(1e-14));
    for (int k = 1; k <= 4; ++k) {
        CHECK(p0_value(k, 0.0) == doctest::Approx(2.0 * k));
        CHECK(p0_value(k, 1.0) == doctest::Approx(1.0));
        // decreasing on [0,1]
        double prev = p0_value(k, 0.0);
        for (int i = 1; i <= 20; ++i) {
            double cur = p0_value(k, i / 20.0);
            CHECK(cur <= prev + 1e-14);
            prev = cur;
        }
    }
    // the small-xi branch agrees with the direct formula where both are stable
    for (double xi : {0.2, 0.35, 0.49}) {
        const double direct = (1.0 - std::pow(1.0 - xi * xi, 4)) / (xi * xi);
        CHECK(p0_value(2, xi) == doctest::Approx(direct).epsilon(1e-13));
    }
}

TEST_CASE("profile series carries the squared-coefficient amplitudes") {
    NormalizedSystem ns = normalize(SystemSpec{{1.0}, {1.0}, 1, 2});  // F = 1, p = 2, k = 1
    XiSeries P = p_series(ns, 6);
    CHECK(P[0](0.3) == doctest::Approx(p0_value(1, 0.3)).epsilon(1e-12));
    for (int n : {1, 2, 3, 5, 6}) CHECK(P[n].sup_norm() < 1e-12);
    // coefficient of delta^4: F^2_0 * 2k/(2p+2k) * (1-(1-xi^2)^6)/xi^2 -> 1/3 at xi=1
    CHECK(P[4](1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(P[4](0.0) == doctest::Approx(2.0).epsilon(1e-10));  // limit 2k/(2p+2k) * 6
}

TEST_CASE("direct quadrature route agrees with the series route") {
    NormalizedSystem ns = normalize(SystemSpec{{1.0}, {1.0, 1.0}, 1, 2});
    XiSeries P = p_series(ns, 8);
    auto a_fn = [&](double z) { return ns.eval_A(z); };
    for (double delta : {0.05, -0.08}) {
        for (double xi : {0.2, 0.6, 1.0}) {
            double series_val = 0.0;
            for (int n = 8; n >= 0; --n) series_val = series_val * delta + P[n](xi);
            CHECK(p_direct(ns.k, xi, delta, a_fn) ==
                  doctest::Approx(series_val).epsilon(1e-10));
        }
    }
}

TEST_CASE("incomplete-beta values of the first special function") {
    CHECK(phi(1, 1, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(phi(2, 1, 1.0) == doctest::Approx(pi / 16.0).epsilon(1e-12));
    CHECK(phi_one_closed(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(phi_one_closed(2, 1) == doctest::Approx(pi / 16.0).epsilon(1e-13));
    CHECK(phi(1, 1, 0.0) == 0.0);
    for (int p = 1; p <= 6; ++p)
        for (int k = 1; k <= 6; ++k)
            CHECK(std::abs(phi(p, k, 1.0) - phi_one_closed(p, k)) < 1e-10);
}

TEST_CASE("second special function: value, endpoints, positivity") {
    CHECK(psi(1, 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-9));
    CHECK(psi(1, 0.0) == 0.0);
    CHECK(psi(2, 0.0) == 0.0);
    for (int k = 1; k <= 3; ++k)
        for (int i = 1; i <= 10; ++i) CHECK(psi(k, i / 10.0) >= 0.0);
}

TEST_CASE("weighted cumulative transform") {
    // zero input stays zero
    XiFunction z = weighted_cumulative(XiFunction::constant(0.0), 2, 1);
    CHECK(z.sup_norm() < 1e-14);
    // unit input with exponent zero: 2 xi^{-2} int_0^xi t^2 dt = 2 xi / 3
    XiFunction lin = weighted_cumulative(XiFunction::constant(1.0), 1, 0);
    for (double xi : {0.0, 0.25, 1.0})
        CHECK(lin(xi) == doctest::Approx(2.0 * xi / 3.0).epsilon(1e-12));
    // R = B0 sqrt(P0) reproduces B0 * phi pointwise
    const int p = 2, k = 1;
    const double B0 = 8.0;
    XiFunction R = XiFunction::build([&](double t) { return B0 * std::sqrt(p0_value(k, t)); });
    XiFunction v = weighted_cumulative(R, p, k);
    for (double xi : {0.1, 0.5, 0.9, 1.0})
        CHECK(std::abs(v(xi) - B0 * phi(p, k, xi)) < 1e-9);
}
