#include <doctest.h>

#include <cmath>
#include <vector>

#include "centfoc/oracle.hpp"

using namespace centfoc;

namespace {
const double pi = 3.14159265358979323846;
}

TEST_CASE("symmetric systems return exactly to the start") {
    // g = 0: closed orbits; the return equals the initial point to integrator precision
    for (int k : {1, 2, 3}) {
        OrbitCrossing oc = numeric_return(SystemSpec{{1.0}, {0.0}, k, k}, 0.1);
        CHECK(std::abs(oc.z_return - 0.1) < 1e-10);
        CHECK(oc.half_turns == 2);
        CHECK(!oc.outside_eta_window);
        CHECK(oc.n_steps > 10);
    }
}

TEST_CASE("first-order drift matches the series prediction within 5%") {
    const double eps = 0.05;
    OrbitCrossing oc = numeric_return(SystemSpec{{1.0}, {1.0}, 1, 2}, eps);
    const double predicted = pi * eps * eps * eps;
    CHECK(std::abs((oc.z_return - eps) - predicted) < 0.05 * predicted);
}

TEST_CASE("odd-symmetric perturbation produces no drift") {
    // k=2, l=3, g=1: every computed coefficient vanishes and the orbit closes
    ReturnMapResult rm = return_map(SystemSpec{{1.0}, {1.0}, 2, 3}, 8);
    for (int n = 2; n <= 8; ++n) CHECK(std::abs(rm.Z[n]) < 1e-12);
    for (double eps : {0.04, 0.08}) {
        OrbitCrossing oc = numeric_return(SystemSpec{{1.0}, {1.0}, 2, 3}, eps);
        CHECK(std::abs(oc.z_return - eps) < 1e-12);
    }
}

TEST_CASE("input gates") {
    CHECK_THROWS_AS((void)numeric_return(SystemSpec{{1.0}, {1.0}, 1, 2}, 0.9), Error);
    CHECK_THROWS_AS((void)numeric_return(SystemSpec{{1.0}, {1.0}, 1, 2}, -0.05), Error);
    CHECK_THROWS_AS((void)numeric_return(SystemSpec{{1.0}, {1.0}, 1, 2}, 0.05, 1e-3), Error);
    CHECK_THROWS_AS((void)numeric_return(SystemSpec{{1.0}, {1.0}, 2, 1}, 0.05),
                    AssumptionViolation);
}

TEST_CASE("determinism: repeated runs are bit-identical") {
    OrbitCrossing a = numeric_return(SystemSpec{{1.0}, {1.0, 1.0}, 1, 2}, 0.06);
    OrbitCrossing b = numeric_return(SystemSpec{{1.0}, {1.0, 1.0}, 1, 2}, 0.06);
    CHECK(a.z_return == b.z_return);
    CHECK(a.n_steps == b.n_steps);
}

TEST_CASE("order fit on synthetic and real residuals") {
    std::vector<std::pair<double, double>> exact;
    for (double e : {0.02, 0.03, 0.05, 0.08}) exact.emplace_back(e, 2.5 * std::pow(e, 4.0));
    FitResult fit = order_fit(exact, 1e-11);
    CHECK(fit.slope == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<std::pair<double, double>> tiny = {{0.02, 1e-13}, {0.04, 1e-13}, {0.08, 1e-13}};
    CHECK_THROWS_AS((void)order_fit(tiny, 1e-11), ResidualBelowNoiseFloor);
    std::vector<std::pair<double, double>> two = {{0.02, 1e-6}, {0.04, 1e-5}};
    CHECK_THROWS_AS((void)order_fit(two, 1e-11), Error);

    // truncating after Z_3 leaves an O(eps^5) remainder here (the eps^4 term vanishes)
    ReturnMapResult rm = return_map(SystemSpec{{1.0}, {1.0}, 1, 2}, 3);
    std::vector<std::pair<double, double>> pts;
    for (double e : {0.02, 0.03, 0.045, 0.0675}) {
        OrbitCrossing oc = numeric_return(SystemSpec{{1.0}, {1.0}, 1, 2}, e);
        pts.emplace_back(e, std::abs(oc.z_return - series_eval(rm.Z, e)));
    }
    CHECK(order_fit(pts, 1e-11).slope >= 3.8);
}

TEST_CASE("verification report aggregates all checks") {
    VerificationReport rep =
        verify(SystemSpec{{1.0}, {1.0}, 1, 2}, 4, {0.02, 0.0317, 0.0504, 0.08});
    CHECK(rep.errors.empty());
    CHECK(rep.Z[3] == doctest::Approx(pi).epsilon(1e-10));
    CHECK(rep.closed_form_error < 1e-10);
    CHECK(rep.fixed_point_res < 1e-8);
    REQUIRE(rep.fit_valid);
    CHECK(rep.fit.slope >= 4.8);
    CHECK(rep.passes());

    VerificationReport sym = verify(SystemSpec{{1.0}, {0.0}, 1, 2}, 6, {0.02, 0.04, 0.08});
    CHECK(sym.errors.empty());
    CHECK(sym.noise_floor);
    CHECK(sym.passes());

    VerificationReport bad = verify(SystemSpec{{1.0}, {1.0}, 2, 1}, 4, {0.02});
    REQUIRE(!bad.errors.empty());
    CHECK(bad.errors[0].stage == "return_map");
    CHECK(!bad.passes());
}
