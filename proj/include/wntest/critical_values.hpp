#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "wntest/kernels.hpp"

namespace wntest {

enum class Distribution { LobatoSN, CvMLimit, MaxTest, Chi2_1, StdNormal };

struct QuantileEntry {
    double alpha = 0.0;      // upper-tail probability
    double value = 0.0;
    double std_error = 0.0;  // binomial order-statistic interval / (2 * 1.96)
};

struct TableMeta {
    std::uint64_t replications = 0;
    std::size_t discretization = 0;  // Brownian grid, CvM truncation, or sample size
    std::uint64_t seed = 0;
    std::string generator;
    double sample_mean = 0.0;
    std::string note;
};

/// Simulated upper quantiles of a limiting (or finite-sample) null law.
/// Quantiles are sorted by decreasing alpha and strictly increasing in value.
struct CriticalValueTable {
    Distribution distribution = Distribution::LobatoSN;
    std::size_t n = 0;  // MaxTest only
    std::size_t J = 0;  // MaxTest only
    std::vector<QuantileEntry> quantiles;
    TableMeta meta;

    /// Throws std::out_of_range if alpha was not tabulated.
    double value(double alpha) const;
    const QuantileEntry& entry(double alpha) const;
};

nlohmann::json to_json(const CriticalValueTable& table);
CriticalValueTable table_from_json(const nlohmann::json& j);

std::string distribution_name(Distribution d);

/// Quantile at upper probability alpha of a sample; the sample is sorted in
/// place. Standard error by the binomial (distribution-free) interval.
QuantileEntry empirical_quantile(std::vector<double>& sorted_or_not, double alpha);

/// W(1)^2 / int_0^1 (W(r) - r W(1))^2 dr by a scaled random walk with `grid`
/// steps and a Riemann sum of the bridge.
CriticalValueTable tabulate_lobato(std::span<const double> alphas, std::uint64_t reps, std::size_t grid,
                                   std::uint64_t seed, unsigned threads = 1);

/// sum_{j<=J} Z_j^2 / (pi^2 j^2) plus the mean of the omitted tail.
CriticalValueTable tabulate_cvm(std::span<const double> alphas, std::size_t truncation, std::uint64_t reps,
                                std::uint64_t seed, unsigned threads = 1);

/// Finite-sample null quantiles of the max statistic for iid N(0,1) data of
/// length n.
CriticalValueTable tabulate_maxtest(std::size_t n, std::size_t J, std::span<const double> alphas,
                                    std::uint64_t reps, std::uint64_t seed, unsigned threads = 1);

/// Closed-form upper quantiles: Chi2_1 or StdNormal (one-sided).
double quantile(Distribution dist, double alpha);

/// K^2(1) * gamma1 * z_L(alpha), divided by tau1sq when given.
double lobato_cv(const CriticalValueTable& table, double gamma1, const Kernel& kernel, double alpha,
                 std::optional<double> tau1sq = std::nullopt);

/// Set of tables consulted by the tests.
class CvStore {
public:
    /// Tables compiled into the library from data/tables/.
    static const CvStore& builtin();
    /// Every *.json table in `dir`. Throws DataError on malformed files.
    static CvStore load_directory(const std::filesystem::path& dir);

    void add(CriticalValueTable table);
    /// Tables of `other` replace tables of the same kind.
    void merge(const CvStore& other);

    const CriticalValueTable& lobato() const;
    const CriticalValueTable& cvm() const;
    const CriticalValueTable& maxtest(std::size_t n, std::size_t J) const;
    bool has_lobato() const noexcept { return lobato_.has_value(); }
    bool has_cvm() const noexcept { return cvm_.has_value(); }
    bool has_maxtest(std::size_t n, std::size_t J) const noexcept;

private:
    std::optional<CriticalValueTable> lobato_;
    std::optional<CriticalValueTable> cvm_;
    std::map<std::pair<std::size_t, std::size_t>, CriticalValueTable> maxtest_;
};

}  // namespace wntest
