#include "doctest.h"
#include "oracles.hpp"
#include "wntest/errors.hpp"
#include "wntest/residuals.hpp"
#include "wntest/rng.hpp"

using namespace wntest;

TEST_CASE("AR(1) fit on a short ramp") {
    const Series y({1, 2, 3});
    const auto m = fit_ar1(y);
    CHECK(m.theta == doctest::Approx(1.6));
    const auto u = residuals(y, m);
    REQUIRE(u.size() == 2);
    CHECK(u[0] == doctest::Approx(0.4));
    CHECK(u[1] == doctest::Approx(-0.2));

    REQUIRE(m.recursive.size() == 3);
    CHECK_FALSE(m.recursive[0].has_value());
    CHECK(*m.recursive[1] == 2.0);
    CHECK(*m.recursive[2] == doctest::Approx(1.6));
}

TEST_CASE("unit-root constant data gives zero residuals") {
    const Series y(std::vector<double>(10, 3.0));
    const auto m = fit_ar1(y);
    CHECK(m.theta == 1.0);
    const auto u = residuals(y, m);
    for (double r : u.values()) CHECK(r == 0.0);
}

TEST_CASE("zero regressor is degenerate") {
    CHECK_THROWS_AS(fit_ar1(Series({0, 0, 0, 1})), DegenerateError);
}

TEST_CASE("recursive estimates") {
    const auto v = oracle::gaussian(200, 5);
    const Series y(v);
    const auto rec = fit_ar1_recursive(y);
    CHECK(*rec.back() == fit_ar1(y).theta);
    for (std::size_t k : {2u, 3u, 17u, 50u, 51u, 99u, 120u, 150u, 177u, 200u}) {
        long double th = 0;
        REQUIRE(oracle::theta_prefix(v, k, th));
        CHECK(oracle::rel(*rec[k - 1], th) < 1e-12);
    }

    const Series zero_prefix({0, 0, 0, 1, 2, 3});
    const auto z = fit_ar1_recursive(zero_prefix);
    CHECK_FALSE(z[0].has_value());
    CHECK_FALSE(z[1].has_value());
    CHECK_FALSE(z[3].has_value());
    CHECK(z[4].has_value());
}

TEST_CASE("identity model leaves the data unchanged") {
    const Series y({0.3, -1.2, 2.5});
    const auto u = residuals(y, ResidualModel::identity());
    CHECK(std::equal(u.values().begin(), u.values().end(), y.values().begin()));
}

TEST_CASE("AR(1) estimate is consistent") {
    Engine rng = make_engine(3, 0);
    NormalDist z;
    std::vector<double> y(10000);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = (t ? 0.8 * y[t - 1] : 0.0) + z(rng);
    CHECK(std::fabs(fit_ar1(Series(y)).theta - 0.8) < 0.02);
}
