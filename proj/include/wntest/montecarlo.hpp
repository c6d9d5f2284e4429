#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wntest/critical_values.hpp"
#include "wntest/dgp.hpp"
#include "wntest/procedures.hpp"

namespace wntest {

struct MethodSpec {
    std::string label;
    TestOptions options;
};

struct ExperimentSpec {
    std::string name;
    DgpSpec dgp;
    std::size_t n = 200;
    std::uint64_t replications = 5000;
    std::vector<MethodSpec> methods;
    std::vector<double> alphas{0.10, 0.05, 0.01};
    std::uint64_t seed = 1;
    ResidualKind residual = ResidualKind::Identity;
};

struct MethodReport {
    std::string label;
    Method method = Method::GGL_BP;
    std::vector<std::uint64_t> rejections;  // per alpha
    std::uint64_t order_reported = 0;       // replications with a selected order
    std::uint64_t order_ne1 = 0;
    std::uint64_t order_sum = 0;
    std::uint64_t order_sumsq = 0;

    double rejection_rate(std::size_t a, std::uint64_t reps) const;
    double std_error(std::size_t a, std::uint64_t reps) const;
    std::optional<double> pct_order_ne1() const;
    std::optional<double> mean_order() const;
    std::optional<double> sd_order() const;
};

struct SimulationReport {
    ExperimentSpec spec;
    std::vector<MethodReport> methods;
    double runtime_seconds = 0.0;
    /// Per-replication selected orders, kept only when requested.
    std::vector<std::vector<std::size_t>> orders;
};

struct RunOptions {
    unsigned threads = 1;
    bool keep_orders = false;
};

/// Replication r uses the engine seeded with derive_seed(spec.seed, r). The
/// report does not depend on the number of worker threads. Any failing
/// replication aborts the run with a DataError naming its index.
SimulationReport run_experiment(const ExperimentSpec& spec, const CvStore& store = CvStore::builtin(),
                                const RunOptions& run = {});

std::vector<SimulationReport> run_suite(const std::vector<ExperimentSpec>& specs,
                                        const CvStore& store = CvStore::builtin(), const RunOptions& run = {});

/// One row per (experiment, method, alpha). Runtime is excluded so identical
/// seeds give identical bytes.
std::string suite_csv(const std::vector<SimulationReport>& reports);
nlohmann::json to_json(const SimulationReport& report);

/// Experiments declared in a TOML subset: one [[experiment]] table per
/// experiment, scalar keys and flat arrays.
std::vector<ExperimentSpec> parse_experiments(const std::string& text);
std::vector<ExperimentSpec> load_experiments(const std::filesystem::path& path);

/// Method entries: "ggl-bp", "ggl-par", "el", "imse", "cvm", "max"; GGL names
/// take a "-raw" suffix for the unstandardized statistic and a "-chi2" suffix
/// for chi-square critical values.
MethodSpec parse_method_spec(const std::string& token);

}  // namespace wntest
