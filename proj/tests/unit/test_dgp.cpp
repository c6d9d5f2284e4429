#include <cmath>

#include "doctest.h"
#include "wntest/covariance.hpp"
#include "wntest/dgp.hpp"
#include "wntest/errors.hpp"

using namespace wntest;

namespace {

std::vector<double> draw(const DgpSpec& spec, std::size_t n, std::uint64_t seed) {
    Engine rng = make_engine(seed, 0);
    const auto g = generate(spec, n, rng);
    return {g.series.values().begin(), g.series.values().end()};
}

double autocorr(const std::vector<double>& v, std::size_t j) {
    const auto t = autocov(Series(v), j);
    return t.rhat[j] / t.rhat[0];
}

}  // namespace

TEST_CASE("names round trip") {
    for (auto k : {DgpKind::IIDNormal, DgpKind::IIDStudent, DgpKind::IIDChi1Centered, DgpKind::GARCH11,
                   DgpKind::ARCH1, DgpKind::Bilinear, DgpKind::NoMDS, DgpKind::AllPass, DgpKind::AR1Observed,
                   DgpKind::LacunaryMA, DgpKind::LacunaryAR, DgpKind::RandomMA}) {
        CHECK(parse_dgp(dgp_name(k)) == k);
    }
    CHECK_THROWS_AS(parse_dgp("arma"), std::invalid_argument);
}

TEST_CASE("iid gaussian moments") {
    const auto v = draw(DgpSpec::iid_normal(), 100000, 1);
    double mean = 0, var = 0;
    for (double x : v) mean += x;
    mean /= v.size();
    for (double x : v) var += (x - mean) * (x - mean);
    var /= v.size() - 1;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(1e5));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("generation is deterministic") {
    for (auto k : {DgpKind::GARCH11, DgpKind::Bilinear, DgpKind::AllPass, DgpKind::RandomMA}) {
        auto spec = DgpSpec::of(k);
        spec.P = 5;
        CHECK(draw(spec, 300, 4) == draw(spec, 300, 4));
        CHECK(draw(spec, 300, 4) != draw(spec, 300, 5));
    }
}

TEST_CASE("weak white noise nulls are uncorrelated") {
    const std::size_t n = 100000;
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    for (auto k : {DgpKind::GARCH11, DgpKind::Bilinear, DgpKind::NoMDS, DgpKind::IIDStudent,
                   DgpKind::IIDChi1Centered}) {
        const auto v = draw(DgpSpec::of(k), n, 21);
        CHECK_MESSAGE(std::fabs(autocorr(v, 1)) < bound, dgp_name(k));
    }
    const auto ap = draw(DgpSpec::of(DgpKind::AllPass), n, 22);
    for (std::size_t j = 1; j <= 5; ++j) CHECK(std::fabs(autocorr(ap, j)) < bound);
    // ARCH(1) with coefficient 0.9 has no finite fourth moment; sqrt(n) scaling
    // of the sample correlation does not apply, so only a loose bound is used.
    const auto arch = draw(DgpSpec::of(DgpKind::ARCH1), n, 23);
    CHECK(std::fabs(autocorr(arch, 1)) < 0.1);
}

TEST_CASE("AR(1) observed data") {
    const auto v = draw(DgpSpec::of(DgpKind::AR1Observed), 50000, 2);
    CHECK(autocorr(v, 1) == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("lacunary population autocovariances") {
    const auto ma = population_autocov(DgpSpec::lacunary_ma(4, 0.8165), 8);
    CHECK(ma.r[4] / ma.r[0] == doctest::Approx(0.8165 / (1 + 0.8165 * 0.8165)));
    CHECK(ma.r[4] / ma.r[0] == doctest::Approx(0.48990).epsilon(1e-4));
    CHECK(ma.r[1] == 0.0);
    CHECK(ma.r[8] == 0.0);

    const auto ar = population_autocov(DgpSpec::lacunary_ar(6, 0.6849), 12);
    CHECK(ar.r[6] / ar.r[0] == doctest::Approx(0.6849));
    CHECK(ar.r[12] / ar.r[0] == doctest::Approx(0.46909).epsilon(1e-4));
    CHECK(ar.r[7] == 0.0);

    const auto iid = population_autocov(DgpSpec::iid_normal(), 3);
    CHECK(iid.r[0] == 1.0);
    CHECK(iid.r[1] == 0.0);

    const auto half = population_autocov(DgpSpec::lacunary_ma(1, 1.0), 1);
    CHECK(half.r[1] / half.r[0] == 0.5);
    for (double th : {0.3, 0.9, 1.1, 2.0}) {
        const auto p = population_autocov(DgpSpec::lacunary_ma(1, th), 1);
        CHECK(p.r[1] / p.r[0] < 0.5);
    }
    CHECK_THROWS_AS(population_autocov(DgpSpec::of(DgpKind::GARCH11), 3), std::invalid_argument);
}

TEST_CASE("lacunary samples match the population") {
    const auto v = draw(DgpSpec::lacunary_ma(4, 0.8165), 100000, 3);
    CHECK(autocorr(v, 4) == doctest::Approx(0.4899).epsilon(0.03));
    CHECK(std::fabs(autocorr(v, 2)) < 0.015);
    const auto w = draw(DgpSpec::lacunary_ar(6, 0.6849), 100000, 3);
    CHECK(autocorr(w, 6) == doctest::Approx(0.6849).epsilon(0.03));
    CHECK(autocorr(w, 12) == doctest::Approx(0.46909).epsilon(0.05));
}

TEST_CASE("calibrated coefficients") {
    CHECK(calibrate_lacunary(LacunaryFamily::MA, 1, 200) == doctest::Approx(0.1244).epsilon(1e-3 / 0.1244));
    CHECK(std::fabs(calibrate_lacunary(LacunaryFamily::MA, 4, 200) - 0.8165) < 1e-4);
    CHECK(std::fabs(calibrate_lacunary(LacunaryFamily::MA, 4, 1000) - 0.2307) < 1e-3);
    CHECK(std::fabs(calibrate_lacunary(LacunaryFamily::AR, 6, 1000) - 0.3242) < 1e-3);
    CHECK(std::fabs(calibrate_lacunary(LacunaryFamily::AR, 6, 200) - 0.6849) < 1e-3);
    CHECK_THROWS_AS(calibrate_lacunary(LacunaryFamily::MA, 10, 200), DataError);
}

TEST_CASE("calibration round trip") {
    for (auto fam : {LacunaryFamily::MA, LacunaryFamily::AR}) {
        for (std::size_t P : {1u, 2u, 4u, 6u}) {
            for (std::size_t n : {200u, 500u, 1000u}) {
                // The lacunary MA norm is at most 1/(4 P^2), so a root needs n >= 12 P^2.
                if (n <= 3 * P * P || (fam == LacunaryFamily::MA && n < 12 * P * P)) continue;
                const double c = calibrate_lacunary(fam, P, n);
                CHECK(c > 0.0);
                CHECK(c < 1.0);
                CHECK(std::fabs(lacunary_cvm_norm(fam, P, c) - 3.0 / n) < 1e-9);

                // Independent evaluation from the population autocovariances.
                const auto spec = fam == LacunaryFamily::MA ? DgpSpec::lacunary_ma(P, c) : DgpSpec::lacunary_ar(P, c);
                const auto pop = population_autocov(spec, 400 * P);
                double s = 0;
                for (std::size_t k = 1; k <= 400 * P; ++k) s += std::pow(pop.r[k] / pop.r[0], 2) / (k * double(k));
                CHECK(std::fabs(s - 3.0 / n) < 1e-9);
            }
        }
    }
}

TEST_CASE("random MA coefficient and draws") {
    const auto spec = DgpSpec::random_ma(75);
    const std::size_t n = 1000;
    const double gn = 3.4 * std::sqrt(2.0 * std::log(std::log(998.0)));
    CHECK(random_ma_coefficient(spec, n) == doctest::Approx(std::sqrt(2.5 * gn) / (std::sqrt(1000.0) * std::pow(75.0, 0.25))));
    Engine rng = make_engine(1, 0);
    const auto g = generate(spec, n, rng);
    CHECK(g.series.size() == n);
    CHECK(g.psi.size() == 75);
}

TEST_CASE("random MA population covariance decomposition") {
    const auto spec = DgpSpec::random_ma(10);
    std::vector<double> psi(10);
    for (std::size_t k = 0; k < 10; ++k) psi[k] = std::sin(k + 1.0);
    const auto pop = population_autocov(spec, 12, 200, psi);
    const double c = random_ma_coefficient(spec, 200);
    // Exact covariances of e_t + c sum psi_k e_{t-k}.
    std::vector<double> a(11);
    a[0] = 1.0;
    for (std::size_t k = 1; k <= 10; ++k) a[k] = c * psi[k - 1];
    for (std::size_t j = 0; j <= 12; ++j) {
        double r = 0;
        for (std::size_t k = 0; k + j <= 10; ++k) r += a[k] * a[k + j];
        CHECK(pop.r[j] == doctest::Approx(r).epsilon(1e-13));
        if (j >= 1 && j <= 10) CHECK(pop.first_order[j] == doctest::Approx(c * psi[j - 1]));
        if (j >= 1) CHECK(pop.first_order[j] + pop.remainder[j] == doctest::Approx(pop.r[j]).epsilon(1e-13));
    }
}

TEST_CASE("invalid parameters") {
    Engine rng = make_engine(1, 0);
    CHECK_THROWS_AS(generate(DgpSpec::lacunary_ar(2, 1.0), 10, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate(DgpSpec::lacunary_ma(0, 0.5), 10, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate(DgpSpec::iid_normal(), 0, rng), std::invalid_argument);
}
