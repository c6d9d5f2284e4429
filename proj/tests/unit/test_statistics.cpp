#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "wntest/covariance.hpp"
#include "wntest/errors.hpp"
#include "wntest/statistics.hpp"

using namespace wntest;

namespace {

AutocovTable manual_table(std::size_t n, std::vector<double> rhat, std::vector<double> tausq = {}) {
    AutocovTable t;
    t.n = n;
    t.maxlag = rhat.size() - 1;
    t.rhat = std::move(rhat);
    if (!tausq.empty()) {
        t.tausq = std::move(tausq);
        t.tau_degenerate.assign(t.tausq.size(), false);
        for (std::size_t j = 0; j < t.tausq.size(); ++j) t.tau_degenerate[j] = t.tausq[j] <= 0.0;
    }
    return t;
}

}  // namespace

TEST_CASE("box-pierce statistic on a hand table") {
    const auto t = manual_table(10, {1.0, 0.5, 0.2});
    CHECK(s_stat(t, Kernel::uniform(), 2) == doctest::Approx(2.9).epsilon(1e-15));
    CHECK(s_stat(t, Kernel::uniform(), 1) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("standardized statistic on a hand table") {
    const auto t = manual_table(10, {1.0, 0.5}, {1.0, 0.25});
    CHECK(s_star_stat(t, Kernel::uniform(), 1) == doctest::Approx(10.0).epsilon(1e-15));
    const auto bad = manual_table(10, {1.0, 0.5}, {1.0, 0.0});
    CHECK_THROWS_WITH_AS(s_star_stat(bad, Kernel::uniform(), 1), doctest::Contains("degenerate at lag 1"),
                         DegenerateError);
}

TEST_CASE("statistics vanish without autocorrelation") {
    const auto t = manual_table(50, std::vector<double>(50, 0.0));
    std::vector<double> r(50, 0.0);
    r[0] = 2.0;
    const auto t2 = manual_table(50, r);
    for (std::size_t p = 1; p < 50; ++p) {
        CHECK(s_stat(t2, Kernel::uniform(), p) == 0.0);
        CHECK(s_stat(t2, Kernel::modified_parzen(), p) == 0.0);
    }
    (void)t;
}

TEST_CASE("modified parzen at order one is n R_1^2") {
    const Series u(oracle::gaussian(80, 2));
    const auto t = full_autocov_table(u);
    CHECK(s_stat(t, Kernel::modified_parzen(), 1) == doctest::Approx(80.0 * t.rhat[1] * t.rhat[1]).epsilon(1e-14));
}

TEST_CASE("constant standardization divides by R_0^2") {
    const Series u(oracle::gaussian(60, 4));
    auto t = full_autocov_table(u);
    const double r0sq = t.rhat[0] * t.rhat[0];
    for (std::size_t j = 1; j < t.tausq.size(); ++j) t.tausq[j] = r0sq;
    for (std::size_t p : {1u, 3u, 10u, 40u}) {
        CHECK(s_star_stat(t, Kernel::uniform(), p) == doctest::Approx(s_stat(t, Kernel::uniform(), p) / r0sq));
    }
}

TEST_CASE("centering sequences") {
    for (const auto& k : {Kernel::uniform(), Kernel::modified_parzen()}) {
        const auto c = centering(k, 100, 1);
        CHECK(c.e_delta == 0.0);
        CHECK(c.v_delta == 0.0);
    }
    const auto c = centering(Kernel::uniform(), 100, 3);
    CHECK(c.e_delta == doctest::Approx(1.95).epsilon(1e-14));
    CHECK(c.v_delta * c.v_delta == doctest::Approx(3.8026).epsilon(1e-13));
    CHECK(c.e == doctest::Approx(0.99 + 0.98 + 0.97).epsilon(1e-14));
}

TEST_CASE("statistics and centering agree with full direct sums") {
    const std::function<double(double)> kernels[] = {oracle::uniform_kernel, oracle::modified_parzen};
    const Kernel impl[] = {Kernel::uniform(), Kernel::modified_parzen()};
    for (unsigned seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 20 + 23 * seed;
        const auto v = oracle::gaussian(n, seed);
        const auto t = full_autocov_table(Series(v));
        for (int k = 0; k < 2; ++k) {
            for (std::size_t p : {std::size_t{1}, std::size_t{2}, n / 3, n - 2}) {
                CHECK(oracle::rel(s_stat(t, impl[k], p), oracle::s_stat(v, kernels[k], p, false)) < 1e-12);
                CHECK(oracle::rel(s_star_stat(t, impl[k], p), oracle::s_stat(v, kernels[k], p, true)) < 1e-10);
                const auto c = centering(impl[k], n, p);
                const auto o = oracle::centering(kernels[k], n, p);
                CHECK(oracle::rel(c.e, o.e) < 1e-12);
                CHECK(oracle::rel(c.e_delta, o.e_delta) < 1e-12);
                CHECK(oracle::rel(c.v_delta, o.v_delta) < 1e-12);
            }
        }
    }
}

TEST_CASE("profile and centering table match the pointwise functions") {
    const std::size_t n = 150;
    const auto t = full_autocov_table(Series(oracle::gaussian(n, 77)));
    for (const auto& k : {Kernel::uniform(), Kernel::modified_parzen()}) {
        const auto ct = centering_table(k, n, n - 2);
        const auto raw = s_profile(t, k, n - 2, false);
        const auto star = s_profile(t, k, n - 2, true);
        for (std::size_t p = 1; p <= n - 2; ++p) {
            const auto c = centering(k, n, p);
            CHECK(ct.e[p] == doctest::Approx(c.e).epsilon(1e-12));
            CHECK(ct.e_delta[p] == doctest::Approx(c.e_delta).epsilon(1e-12));
            CHECK(ct.v_delta[p] == doctest::Approx(c.v_delta).epsilon(1e-12));
            CHECK(raw[p] == doctest::Approx(s_stat(t, k, p)).epsilon(1e-12));
            CHECK(star[p] == doctest::Approx(s_star_stat(t, k, p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("uniform monotonicity in the order") {
    const std::size_t n = 300;
    const auto t = full_autocov_table(Series(oracle::gaussian(n, 8)));
    double prev_s = 0, prev_e = 0;
    for (std::size_t p = 1; p < n; ++p) {
        const double s = s_stat(t, Kernel::uniform(), p);
        const double e = centering(Kernel::uniform(), n, p).e_delta;
        CHECK(s >= prev_s);
        CHECK(e >= prev_e);
        prev_s = s;
        prev_e = e;
    }
}

TEST_CASE("order of the standardization terms") {
    // Constants fixed from a scan over n in {100, 1000}: V_Delta(p) >= 0.5 (p-1)^{1/2}
    // and E_Delta(p) <= 2 p^{1/2} V_Delta(p) for 2 <= p <= n/2.
    for (const auto& k : {Kernel::uniform(), Kernel::modified_parzen()}) {
        for (std::size_t n : {100u, 1000u}) {
            for (std::size_t p = 2; p <= n / 2; ++p) {
                const auto c = centering(k, n, p);
                CHECK(c.e_delta >= 0.0);
                CHECK(c.v_delta > 0.0);
                CHECK(c.v_delta >= 0.5 * std::sqrt(p - 1.0));
                CHECK(c.e_delta <= 2.0 * std::sqrt(static_cast<double>(p)) * c.v_delta);
            }
        }
    }
}

TEST_CASE("order range is checked") {
    const auto t = full_autocov_table(Series(oracle::gaussian(20, 1)));
    CHECK_THROWS_AS(s_stat(t, Kernel::uniform(), 0), std::invalid_argument);
    CHECK_THROWS_AS(s_stat(t, Kernel::uniform(), 20), std::invalid_argument);
    CHECK_THROWS_AS(centering(Kernel::uniform(), 20, 20), std::invalid_argument);
}
