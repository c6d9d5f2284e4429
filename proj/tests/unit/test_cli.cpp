#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "wntest/cli.hpp"
#include "wntest/procedures.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "wntest");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = wntest::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const auto d = fs::temp_directory_path() / "wntest_cli_test";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("calibrate prints six decimals") {
    const auto r = cli({"calibrate", "--family", "ma", "--P", "4", "--n", "200"});
    CHECK(r.code == 0);
    CHECK(std::fabs(std::stod(r.out) - 0.8165) < 1e-4);
    CHECK(r.out.size() == std::string("0.816497\n").size());
}

TEST_CASE("zero series exits with a data error") {
    const auto f = scratch() / "zeros.csv";
    {
        std::ofstream o(f);
        for (int i = 0; i < 50; ++i) o << "0\n";
    }
    const auto r = cli({"test", "--method", "ggl-bp", "--alpha", "0.05", "--input", f.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("zero variance") != std::string::npos);
}

TEST_CASE("test emits a parseable outcome and writes it") {
    const auto dir = scratch();
    const auto f = dir / "series.csv";
    {
        std::ofstream o(f);
        o << "u\n";
        double x = 0.3;
        for (int i = 0; i < 300; ++i) {
            x = std::fmod(x * 3.9 * (1 - x) + 0.1, 1.0);
            o << (x - 0.5) << "\n";
        }
    }
    const auto out = dir / "outcome.json";
    const auto r = cli({"--out", out.string(), "test", "--method", "cvm", "--input", f.string()});
    REQUIRE(r.code == 0);
    const auto o = wntest::outcome_from_json(nlohmann::json::parse(r.out));
    CHECK(o.method == wntest::Method::CvM);
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == r.out);

    const auto multi = cli({"test", "--method", "ggl-par", "--alpha", "0.1", "--alpha", "0.05", "--input",
                            f.string(), "--kernel", "uniform", "--pbar", "20"});
    REQUIRE(multi.code == 0);
    CHECK(nlohmann::json::parse(multi.out).size() == 2);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"calibrate", "--family", "ma", "--P", "4"}).code == 1);
    CHECK(cli({"calibrate", "--family", "ma", "--P", "4", "--n", "200", "--bogus", "1"}).code == 1);
    CHECK(cli({"calibrate", "--family", "arma", "--P", "4", "--n", "200"}).code == 1);
    CHECK(cli({"test", "--method", "nope", "--input", "x.csv"}).code == 1);
    CHECK(cli({"tabulate-cv", "--dist", "gumbel"}).code == 1);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("missing input is a data error") {
    CHECK(cli({"test", "--method", "el", "--input", "/nonexistent/series.csv"}).code == 2);
}

TEST_CASE("tabulate-cv writes the table") {
    const auto out = scratch() / "t.json";
    const auto r = cli({"--seed", "3", "--out", out.string(), "tabulate-cv", "--dist", "maxtest", "--n", "100",
                        "--reps", "300", "--alphas", "0.1,0.05"});
    REQUIRE(r.code == 0);
    std::ifstream in(out);
    const auto j = nlohmann::json::parse(in);
    CHECK(j["distribution"] == "maxtest");
    CHECK(j["params"]["J"] == 10);
    CHECK(j["quantiles"].size() == 2);
}

TEST_CASE("simulate writes csv and json") {
    const auto dir = scratch();
    const auto spec = dir / "tiny.toml";
    {
        std::ofstream o(spec);
        o << "[[experiment]]\nname = \"tiny\"\nn = 100\nreplications = 3\nmethods = [\"ggl-bp\", \"imse\"]\n";
    }
    const auto out = dir / "results";
    fs::remove_all(out);
    const auto r = cli({"--threads", "2", "simulate", "--spec", spec.string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out / "tiny.csv"));
    std::ifstream in(out / "tiny.json");
    const auto j = nlohmann::json::parse(in);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["replications"] == 3);
    CHECK(cli({"simulate", "--spec", (dir / "absent.toml").string()}).code == 1);
}
