#include "wntest/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "wntest/critical_values.hpp"
#include "wntest/dgp.hpp"
#include "wntest/errors.hpp"
#include "wntest/montecarlo.hpp"
#include "wntest/procedures.hpp"
#include "wntest/series.hpp"

namespace wntest {

namespace {

namespace fs = std::filesystem;

struct Globals {
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out;
};

struct TestArgs {
    std::string method;
    std::vector<double> alphas{0.05};
    bool standardized = false;
    bool raw = false;
    std::string input;
    std::string cv_table;
    double gamma = 3.4;
    std::size_t pbar = 0;
    std::size_t el_max_order = 0;
    std::size_t max_order = 0;
    std::string residual_model = "none";
    std::string cv = "lobato";
    std::string kernel;
};

struct TabulateArgs {
    std::string dist;
    std::vector<double> alphas{0.20, 0.10, 0.05, 0.025, 0.01};
    std::uint64_t reps = 100000;
    std::size_t grid = 10000;
    std::size_t truncation = 10000;
    std::size_t n = 0;
    std::size_t J = 0;
};

struct SimulateArgs {
    std::string spec;
    std::string cv_table;
    std::optional<std::uint64_t> reps;
};

struct CalibrateArgs {
    std::string family;
    std::size_t P = 0;
    std::size_t n = 0;
};

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write " + path.string());
    f << text;
}

CvStore load_store(const std::string& dir) {
    if (dir.empty()) return CvStore::builtin();
    CvStore store = CvStore::builtin();
    store.merge(CvStore::load_directory(dir));
    return store;
}

Series read_input(const std::string& input) {
    if (input == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        return parse_series_csv(buf.str());
    }
    return read_series_csv(input);
}

int cmd_test(const Globals& g, const TestArgs& a, std::ostream& out) {
    if (a.standardized && a.raw) throw std::invalid_argument("--standardized and --raw are exclusive");
    TestOptions opt;
    opt.method = parse_method(a.method);
    opt.standardized = !a.raw;
    opt.penalty.gamma_coef = a.gamma;
    opt.penalty.pbar = a.pbar;
    if (a.cv == "chi2") {
        opt.cv = CvRule::Chi2;
    } else if (a.cv != "lobato") {
        throw std::invalid_argument("--cv must be lobato or chi2");
    }
    if (a.residual_model == "ar1") {
        opt.residual = ResidualKind::AR1_OLS;
    } else if (a.residual_model != "none") {
        throw std::invalid_argument("--residual-model must be none or ar1");
    }
    if (!a.kernel.empty()) {
        if (a.kernel == "uniform" || a.kernel == "parzen") {
            opt.kernel = Kernel::from_name(a.kernel);
        } else {
            opt.kernel = Kernel::from_csv(a.kernel);
        }
    }
    if (opt.method == Method::EL) opt.max_order = a.el_max_order;
    if (opt.method == Method::CvM || opt.method == Method::MaxTest) opt.max_order = a.max_order;
    for (double alpha : a.alphas) {
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("--alpha must lie in (0,1)");
    }

    const CvStore store = load_store(a.cv_table);
    const Series data = read_input(a.input);
    const PreparedSample sample(data, opt.residual);
    const TestContext ctx = make_context(opt, sample.n());
    const auto outcomes = run_test(sample, opt, a.alphas, store, &ctx);

    nlohmann::json j;
    if (outcomes.size() == 1) {
        j = to_json(outcomes.front());
    } else {
        j = nlohmann::json::array();
        for (const auto& o : outcomes) j.push_back(to_json(o));
    }
    const std::string text = j.dump(2) + "\n";
    out << text;
    if (!g.out.empty()) write_file(g.out, text);
    return 0;
}

int cmd_tabulate(const Globals& g, const TabulateArgs& a, std::ostream& out) {
    const std::uint64_t seed = g.seed.value_or(1);
    CriticalValueTable table;
    if (a.dist == "lobato") {
        table = tabulate_lobato(a.alphas, a.reps, a.grid, seed, g.threads);
    } else if (a.dist == "cvm") {
        table = tabulate_cvm(a.alphas, a.truncation, a.reps, seed, g.threads);
    } else if (a.dist == "maxtest") {
        if (a.n == 0) throw std::invalid_argument("--dist maxtest requires --n");
        const std::size_t J = a.J ? a.J : default_max_order(Method::MaxTest, a.n);
        table = tabulate_maxtest(a.n, J, a.alphas, a.reps, seed, g.threads);
    } else {
        throw std::invalid_argument("--dist must be lobato, cvm or maxtest");
    }
    const std::string text = to_json(table).dump(2) + "\n";
    if (g.out.empty()) {
        out << text;
    } else {
        write_file(g.out, text);
        out << "wrote " << g.out << "\n";
    }
    return 0;
}

int cmd_simulate(const Globals& g, const SimulateArgs& a, std::ostream& out) {
    auto specs = load_experiments(a.spec);
    for (auto& s : specs) {
        if (g.seed) s.seed = *g.seed;
        if (a.reps) s.replications = *a.reps;
    }
    const CvStore store = load_store(a.cv_table);
    RunOptions run;
    run.threads = g.threads;
    const auto reports = run_suite(specs, store, run);

    const fs::path dir = g.out.empty() ? fs::path("results") : fs::path(g.out);
    const std::string stem = fs::path(a.spec).stem().string();
    nlohmann::json all = nlohmann::json::array();
    for (const auto& r : reports) all.push_back(to_json(r));
    const std::string csv = suite_csv(reports);
    write_file(dir / (stem + ".csv"), csv);
    write_file(dir / (stem + ".json"), all.dump(2) + "\n");
    out << csv;
    return 0;
}

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
    LacunaryFamily family;
    if (a.family == "ma") {
        family = LacunaryFamily::MA;
    } else if (a.family == "ar") {
        family = LacunaryFamily::AR;
    } else {
        throw std::invalid_argument("--family must be ma or ar");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", calibrate_lacunary(family, a.P, a.n));
    out << buf << "\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive weak white noise tests"};
    app.require_subcommand(1);

    Globals g;
    app.add_option("--seed", g.seed, "Base seed (tabulate-cv; overrides experiment seeds in simulate)");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--out", g.out, "Output file (test, tabulate-cv) or directory (simulate)");

    TestArgs ta;
    auto* test = app.add_subcommand("test", "Run one test on a series file")->fallthrough();
    test->add_option("--method", ta.method, "ggl-bp | ggl-par | el | imse | cvm | max")->required();
    test->add_option("--alpha", ta.alphas, "Significance level(s)")->capture_default_str();
    test->add_flag("--standardized", ta.standardized, "Standardized GGL statistic (default)");
    test->add_flag("--raw", ta.raw, "Unstandardized GGL statistic");
    test->add_option("--input", ta.input, "Single-column CSV, '-' for stdin")->required();
    test->add_option("--cv-table", ta.cv_table, "Directory of critical-value tables");
    test->add_option("--gamma", ta.gamma, "Penalty coefficient")->capture_default_str();
    test->add_option("--pbar", ta.pbar, "Largest candidate order (0: default)");
    test->add_option("--el-max-order", ta.el_max_order, "EL largest order (0: default)");
    test->add_option("--max-order", ta.max_order, "CvM / max test number of lags (0: default)");
    test->add_option("--residual-model", ta.residual_model, "none | ar1")->capture_default_str();
    test->add_option("--cv", ta.cv, "lobato | chi2")->capture_default_str();
    test->add_option("--kernel", ta.kernel, "uniform | parzen | path to x,value CSV");

    TabulateArgs tb;
    auto* tab = app.add_subcommand("tabulate-cv", "Simulate a critical-value table")->fallthrough();
    tab->add_option("--dist", tb.dist, "lobato | cvm | maxtest")->required();
    tab->add_option("--alphas", tb.alphas, "Upper-tail levels")->delimiter(',')->capture_default_str();
    tab->add_option("--reps", tb.reps, "Replications")->check(CLI::PositiveNumber)->capture_default_str();
    tab->add_option("--grid", tb.grid, "Brownian grid (lobato)")->capture_default_str();
    tab->add_option("--truncation", tb.truncation, "Series truncation (cvm)")->capture_default_str();
    tab->add_option("--n", tb.n, "Sample size (maxtest)");
    tab->add_option("--J", tb.J, "Number of lags (maxtest; 0: floor(sqrt n))");

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment file")->fallthrough();
    sim->add_option("--spec", sa.spec, "Experiment file")->required()->check(CLI::ExistingFile);
    sim->add_option("--cv-table", sa.cv_table, "Directory of critical-value tables");
    sim->add_option("--reps", sa.reps, "Override replications of every experiment");

    CalibrateArgs ca;
    auto* cal = app.add_subcommand("calibrate", "Coefficient of a lacunary alternative")->fallthrough();
    cal->add_option("--family", ca.family, "ma | ar")->required();
    cal->add_option("--P", ca.P, "Lag of the lacunary term")->required();
    cal->add_option("--n", ca.n, "Sample size")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*test) return cmd_test(g, ta, out);
        if (*tab) return cmd_tabulate(g, tb, out);
        if (*sim) return cmd_simulate(g, sa, out);
        return cmd_calibrate(ca, out);
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace wntest
