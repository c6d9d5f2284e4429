#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "wntest/errors.hpp"
#include "wntest/montecarlo.hpp"

using namespace wntest;

namespace {

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

ExperimentSpec small_spec() {
    ExperimentSpec s;
    s.name = "small";
    s.n = 200;
    s.replications = 40;
    s.seed = 5;
    for (const char* m : {"ggl-bp", "ggl-par-raw", "el", "imse", "cvm", "max"}) s.methods.push_back(parse_method_spec(m));
    return s;
}

}  // namespace

TEST_CASE("seed derivation is injective over replication indices") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 200000; ++r) seen.insert(derive_seed(12345, r));
    CHECK(seen.size() == 200000);
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("method tokens") {
    const auto a = parse_method_spec("ggl-bp");
    CHECK(a.options.method == Method::GGL_BP);
    CHECK(a.options.standardized);
    const auto b = parse_method_spec("ggl-par-raw-chi2");
    CHECK(b.options.method == Method::GGL_Par);
    CHECK_FALSE(b.options.standardized);
    CHECK(b.options.cv == CvRule::Chi2);
    CHECK(parse_method_spec("el-chi2").options.cv == CvRule::Chi2);
    CHECK_THROWS_AS(parse_method_spec("cvm-raw"), std::invalid_argument);
    CHECK_THROWS_AS(parse_method_spec("imse-chi2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_method_spec("bp"), std::invalid_argument);
}

TEST_CASE("single replication gives frequencies of zero or one") {
    auto s = small_spec();
    s.replications = 1;
    const auto rep = run_experiment(s);
    for (const auto& m : rep.methods) {
        for (std::size_t a = 0; a < s.alphas.size(); ++a) {
            const double f = m.rejection_rate(a, 1);
            CHECK((f == 0.0 || f == 1.0));
            CHECK(m.std_error(a, 1) == 0.0);
        }
    }
    CHECK(to_json(rep)["replications"] == 1);
}

TEST_CASE("reports do not depend on the worker count") {
    const auto s = small_spec();
    RunOptions one, three;
    three.threads = 3;
    const auto a = run_experiment(s, CvStore::builtin(), one);
    const auto b = run_experiment(s, CvStore::builtin(), three);
    CHECK(suite_csv({a}) == suite_csv({b}));
    auto ja = to_json(a), jb = to_json(b);
    ja.erase("runtime_seconds");
    jb.erase("runtime_seconds");
    CHECK(ja == jb);
}

TEST_CASE("report arithmetic") {
    const auto s = small_spec();
    RunOptions run;
    run.keep_orders = true;
    const auto rep = run_experiment(s, CvStore::builtin(), run);
    for (std::size_t m = 0; m < rep.methods.size(); ++m) {
        const auto& mr = rep.methods[m];
        for (std::size_t a = 0; a < s.alphas.size(); ++a) {
            const double f = static_cast<double>(mr.rejections[a]) / 40.0;
            CHECK(mr.rejection_rate(a, 40) == f);
            CHECK(mr.std_error(a, 40) == doctest::Approx(std::sqrt(f * (1 - f) / 40)));
        }
        const auto& orders = rep.orders[m];
        std::uint64_t reported = 0, ne1 = 0;
        double sum = 0, sumsq = 0;
        for (auto p : orders) {
            if (p == 0) continue;
            ++reported;
            ne1 += p != 1;
            sum += p;
            sumsq += double(p) * p;
        }
        CHECK(mr.order_reported == reported);
        CHECK(mr.order_ne1 == ne1);
        if (reported > 1) {
            CHECK(*mr.mean_order() == doctest::Approx(sum / reported));
            const double var = (sumsq - sum * sum / reported) / (reported - 1);
            CHECK(*mr.sd_order() == doctest::Approx(std::sqrt(var)).epsilon(1e-9));
        }
    }
    // CvM and the max test have no selected order.
    CHECK(rep.methods[4].order_reported == 0);
    CHECK(rep.methods[5].order_reported == 0);
    CHECK_FALSE(rep.methods[4].mean_order().has_value());
}

TEST_CASE("empty suite") {
    const auto csv = suite_csv({});
    CHECK(count_lines(csv) == 1);
    CHECK(csv.rfind("experiment,", 0) == 0);
}

TEST_CASE("suite of lacunary alternatives") {
    std::string text = "replications = 2\nmethods = [\"ggl-bp\", \"el\", \"cvm\"]\n";
    for (const char* fam : {"ma", "ar"}) {
        for (int P : {1, 4}) {
            for (int n : {200, 1000}) {
                if ((std::string(fam) == "ar") && P == 4) P = 6;
                std::ostringstream e;
                e << "[[experiment]]\nname = \"" << fam << P << "-" << n << "\"\n"
                  << "dgp = \"lacunary-" << fam << "\"\nP = " << P << "\nn = " << n << "\ncalibrate = \"" << fam
                  << "\"\n";
                text += e.str();
            }
        }
    }
    const auto specs = parse_experiments(text);
    REQUIRE(specs.size() == 8);
    CHECK(specs[1].dgp.coef == doctest::Approx(calibrate_lacunary(LacunaryFamily::MA, 1, 1000)));
    const auto reports = run_suite(specs);
    const auto csv = suite_csv(reports);
    CHECK(count_lines(csv) == 1 + 8 * 3 * 3);
    CHECK(csv == suite_csv(run_suite(specs)));
}

TEST_CASE("experiment file parsing") {
    const std::string text = R"(
# shared settings
n = 300
replications = 10
alphas = [0.10, 0.05]

[[experiment]]
name = "garch"
dgp = "garch11"
methods = ["ggl-bp", "max"]   # trailing comment
seed = 9
gamma = 2.5
pbar = 40
max_order = 10
burn_in = 1_000

[[experiment]]
dgp = "ar1"
residual_model = "ar1"
n = 500
methods = "ggl-par"
)";
    const auto specs = parse_experiments(text);
    REQUIRE(specs.size() == 2);
    const auto& a = specs[0];
    CHECK(a.name == "garch");
    CHECK(a.dgp.kind == DgpKind::GARCH11);
    CHECK(a.dgp.burn_in == 1000);
    CHECK(a.n == 300);
    CHECK(a.replications == 10);
    CHECK(a.seed == 9);
    CHECK(a.alphas == std::vector<double>{0.10, 0.05});
    REQUIRE(a.methods.size() == 2);
    CHECK(a.methods[0].options.penalty.gamma_coef == 2.5);
    CHECK(a.methods[0].options.penalty.pbar == 40);
    CHECK(a.methods[1].options.max_order == 10);
    const auto& b = specs[1];
    CHECK(b.name == "experiment-2");
    CHECK(b.n == 500);
    CHECK(b.residual == ResidualKind::AR1_OLS);
    CHECK(b.methods[0].options.residual == ResidualKind::AR1_OLS);
}

TEST_CASE("experiment file errors") {
    CHECK_THROWS_AS(parse_experiments("[[experiment]]\nmethods = [\"ggl-bp\"]\ncolour = 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiments("[[experiment]]\nn = 3\nn = 4\nmethods = [\"el\"]\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiments("[[experiment]]\nn = abc\nmethods = [\"el\"]\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiments("[[experiment]]\nn = 3.5\nmethods = [\"el\"]\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiments("[experiment]\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiments("[[experiment]]\nn = 100\n"), std::invalid_argument);
    CHECK(parse_experiments("# nothing\n").empty());
}

TEST_CASE("missing tables are reported before running") {
    auto s = small_spec();
    s.n = 333;
    s.methods = {parse_method_spec("max")};
    CHECK_THROWS_WITH_AS(run_experiment(s), doctest::Contains("no max-test table"), DataError);
}

TEST_CASE("a failing replication aborts with its index") {
    auto s = small_spec();
    s.n = 6;
    s.methods = {parse_method_spec("ggl-bp")};
    CHECK_THROWS_WITH_AS(run_experiment(s), doctest::Contains("replication 0"), DataError);
}
