#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "json.hpp"

#include "wntest/covariance.hpp"
#include "wntest/critical_values.hpp"
#include "wntest/dgp.hpp"
#include "wntest/errors.hpp"
#include "wntest/montecarlo.hpp"
#include "wntest/procedures.hpp"
#include "wntest/rng.hpp"
#include "wntest/series.hpp"

namespace py = pybind11;
using namespace wntest;

namespace {

// Results cross the boundary as plain dicts, decoded by Python's json module.
py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

ResidualKind residual_kind(const std::string& name) {
    if (name == "none") return ResidualKind::Identity;
    if (name == "ar1") return ResidualKind::AR1_OLS;
    throw std::invalid_argument("residual_model must be 'none' or 'ar1'");
}

CvStore store_for(const std::string& cv_table) {
    CvStore store = CvStore::builtin();
    if (!cv_table.empty()) store.merge(CvStore::load_directory(cv_table));
    return store;
}

py::object run(const std::vector<double>& data, const std::string& method, double alpha, bool standardized,
               double gamma, std::size_t pbar, std::size_t max_order, const std::string& residual_model,
               const std::string& cv, const std::string& kernel, const std::string& cv_table) {
    TestOptions opt;
    opt.method = parse_method(method);
    opt.standardized = standardized;
    opt.penalty.gamma_coef = gamma;
    opt.penalty.pbar = pbar;
    opt.max_order = max_order;
    opt.residual = residual_kind(residual_model);
    if (cv == "chi2") {
        opt.cv = CvRule::Chi2;
    } else if (cv != "lobato") {
        throw std::invalid_argument("cv must be 'lobato' or 'chi2'");
    }
    if (!kernel.empty()) opt.kernel = Kernel::from_name(kernel);
    const TestOutcome outcome = [&] {
        py::gil_scoped_release release;
        return run_test(Series(data), opt, alpha, store_for(cv_table));
    }();
    return to_python(to_json(outcome));
}

}  // namespace

PYBIND11_MODULE(_wntest, m) {
    m.doc() = "Adaptive weak white noise tests";

    // Translators run newest first, so the subclass is registered last.
    const auto& data_error = py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<DegenerateError>(m, "DegenerateError", data_error.ptr());

    m.attr("generator_id") = std::string(kGeneratorId);

    m.def("run_test", &run, py::arg("data"), py::arg("method") = "ggl-bp", py::arg("alpha") = 0.05,
          py::arg("standardized") = true, py::arg("gamma") = 3.4, py::arg("pbar") = 0, py::arg("max_order") = 0,
          py::arg("residual_model") = "none", py::arg("cv") = "lobato", py::arg("kernel") = "",
          py::arg("cv_table") = "",
          "Apply one test and return the outcome as a dict.");

    m.def(
        "autocov",
        [](const std::vector<double>& u, std::size_t maxlag) {
            const auto t = autocov_table(Series(u), maxlag, maxlag);
            return py::make_tuple(t.rhat, t.tausq);
        },
        py::arg("u"), py::arg("maxlag"),
        "Sample autocovariances R_0..R_J and tau_j^2 (index 0 holds the lag-0 extension).");

    m.def(
        "gamma1",
        [](const std::vector<double>& data, const std::string& residual_model) {
            const PreparedSample s(Series(data), residual_kind(residual_model));
            const auto& g = s.gamma1();
            return py::make_tuple(g.value, g.degenerate);
        },
        py::arg("data"), py::arg("residual_model") = "none");

    m.def(
        "calibrate_lacunary",
        [](const std::string& family, std::size_t P, std::size_t n) {
            if (family != "ma" && family != "ar") throw std::invalid_argument("family must be 'ma' or 'ar'");
            return calibrate_lacunary(family == "ma" ? LacunaryFamily::MA : LacunaryFamily::AR, P, n);
        },
        py::arg("family"), py::arg("P"), py::arg("n"));

    m.def(
        "generate",
        [](const std::string& dgp, std::size_t n, std::uint64_t seed, std::size_t index, std::size_t P, double coef,
           double df, double scale) {
            DgpSpec spec = DgpSpec::of(parse_dgp(dgp));
            spec.P = P;
            spec.coef = coef;
            spec.df = df;
            spec.scale = scale;
            Engine rng = make_engine(seed, index);
            const auto g = generate(spec, n, rng);
            const auto v = g.series.values();
            return std::vector<double>(v.begin(), v.end());
        },
        py::arg("dgp"), py::arg("n"), py::arg("seed") = 1, py::arg("index") = 0, py::arg("P") = 1,
        py::arg("coef") = 0.8, py::arg("df") = 3.0, py::arg("scale") = 2.5,
        "Replication `index` of a simulation process, as used by simulate().");

    m.def(
        "tabulate_cv",
        [](const std::string& dist, const std::vector<double>& alphas, std::uint64_t reps, std::uint64_t seed,
           std::size_t grid, std::size_t truncation, std::size_t n, std::size_t J, unsigned threads) {
            CriticalValueTable t;
            {
                py::gil_scoped_release release;
                if (dist == "lobato") {
                    t = tabulate_lobato(alphas, reps, grid, seed, threads);
                } else if (dist == "cvm") {
                    t = tabulate_cvm(alphas, truncation, reps, seed, threads);
                } else if (dist == "maxtest") {
                    t = tabulate_maxtest(n, J ? J : default_max_order(Method::MaxTest, n), alphas, reps, seed, threads);
                } else {
                    throw std::invalid_argument("dist must be 'lobato', 'cvm' or 'maxtest'");
                }
            }
            return to_python(to_json(t));
        },
        py::arg("dist"), py::arg("alphas") = std::vector<double>{0.10, 0.05, 0.01}, py::arg("reps") = 100000,
        py::arg("seed") = 1, py::arg("grid") = 10000, py::arg("truncation") = 10000, py::arg("n") = 0,
        py::arg("J") = 0, py::arg("threads") = 1);

    m.def(
        "simulate",
        [](const std::string& spec_text, unsigned threads) {
            const auto specs = parse_experiments(spec_text);
            RunOptions run;
            run.threads = threads;
            std::vector<SimulationReport> reports;
            {
                py::gil_scoped_release release;
                reports = run_suite(specs, CvStore::builtin(), run);
            }
            nlohmann::json all = nlohmann::json::array();
            for (const auto& r : reports) all.push_back(to_json(r));
            return py::make_tuple(to_python(all), suite_csv(reports));
        },
        py::arg("spec_text"), py::arg("threads") = 1,
        "Run experiments given as TOML text; returns (reports, csv).");
}
