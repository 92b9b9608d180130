#include <doctest.h>

#include <cmath>

#include "centfoc/quadrature.hpp"

using namespace centfoc;

TEST_CASE("polynomials integrate exactly") {
    CHECK(integrate([](double x) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(integrate([](double x) { return x * x * x - 2 * x; }, -1.0, 2.0) ==
          doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("smooth transcendental integrands") {
    const double pi = 3.14159265358979323846;
    CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0.0, pi) - 2.0) < 1e-12);
    CHECK(std::abs(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) -
                   (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("steep but smooth integrand handled by subdivision") {
    // int_0^1 dx/(x^2 + 0.01) = 10 atan(10)
    const double v =
        integrate([](double x) { return 1.0 / (x * x + 0.01); }, 0.0, 1.0, 1e-11);
    CHECK(std::abs(v - 10.0 * std::atan(10.0)) < 1e-10);
}

TEST_CASE("non-integrable spike exhausts the depth budget") {
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / (x * x + 1e-300); }, 0.0, 1.0, 1e-12, 8),
                    QuadratureFailure);
}
