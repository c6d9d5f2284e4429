#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "wntest/covariance.hpp"
#include "wntest/critical_values.hpp"
#include "wntest/kernels.hpp"
#include "wntest/residuals.hpp"
#include "wntest/selection.hpp"
#include "wntest/series.hpp"

namespace wntest {

enum class Method { GGL_BP, GGL_Par, EL, IMSE, CvM, MaxTest };

std::string method_name(Method m);
/// "ggl-bp" | "ggl-par" | "el" | "imse" | "cvm" | "max".
Method parse_method(std::string_view name);

/// Critical values of the data-driven portmanteau tests (GGL and EL).
/// SelfNormalized uses the Lobato functional scaled by the observed-data or
/// recursive long-run variance; Chi2 uses chi-square(1) quantiles.
enum class CvRule { SelfNormalized, Chi2 };

struct Diagnostics {
    std::optional<double> gamma1;
    std::optional<double> tau1_sq;
    std::optional<double> r0;
    std::optional<double> penalty;  // gamma_n for GGL, ln n or 2 for EL
    std::string penalty_branch;     // EL: "ln n" | "2"
    std::string cv_source;          // lobato | kuan-lee | chi2 | normal | cvm-limit | maxtest
    std::optional<double> bandwidth;  // IMSE real-valued order
    std::size_t max_order = 0;      // pbar, J
    bool standardized = false;
    bool estimated_residuals = false;
    std::vector<std::string> notes;
};

/// One test decision. All rejection regions are right-tailed:
/// reject <=> statistic >= critical_value.
struct TestOutcome {
    Method method = Method::GGL_BP;
    double statistic = 0.0;
    std::optional<std::size_t> selected_order;
    double critical_value = 0.0;
    double alpha = 0.05;
    bool reject = false;
    Diagnostics diagnostics;
};

nlohmann::json to_json(const TestOutcome& outcome);
TestOutcome outcome_from_json(const nlohmann::json& j);

/// Configuration shared by every method; fields irrelevant to a method are ignored.
struct TestOptions {
    Method method = Method::GGL_BP;
    PenaltyConfig penalty;           // GGL
    bool standardized = true;        // GGL
    CvRule cv = CvRule::SelfNormalized;
    std::optional<Kernel> kernel;    // GGL: overrides the method's kernel
    std::size_t max_order = 0;       // EL/CvM: J (0 -> n-2); Max: J (0 -> floor(sqrt n))
    ResidualKind residual = ResidualKind::Identity;
};

/// Residuals, autocovariances and the lag-1 long-run variance of one data
/// set, computed once and shared by all tests applied to it.
class PreparedSample {
public:
    /// `data` is the tested series (Identity) or the raw series the model is
    /// fitted on (AR1_OLS).
    PreparedSample(const Series& data, ResidualKind kind);

    const Series& data() const noexcept { return data_; }
    const Series& residuals() const noexcept { return residuals_; }
    const ResidualModel& model() const noexcept { return model_; }
    const AutocovTable& table() const noexcept { return table_; }
    std::size_t n() const noexcept { return residuals_.size(); }
    bool estimated() const noexcept { return model_.kind != ResidualKind::Identity; }

    /// Lobato (observed) or Kuan-Lee (estimated residuals), computed on first use.
    const Degeneracy& gamma1() const;

private:
    Series data_;
    ResidualModel model_;
    Series residuals_;
    AutocovTable table_;
    mutable std::optional<Degeneracy> gamma1_;
};

/// Reusable per-(method, n) precomputation; optional.
struct TestContext {
    std::optional<CenteringTable> centering;
};

TestContext make_context(const TestOptions& options, std::size_t n);

/// Apply one method at several levels. The statistic and selected order do
/// not depend on alpha; one outcome per alpha is returned.
std::vector<TestOutcome> run_test(const PreparedSample& sample, const TestOptions& options,
                                  std::span<const double> alphas, const CvStore& store,
                                  const TestContext* context = nullptr);

TestOutcome run_test(const Series& data, const TestOptions& options, double alpha,
                     const CvStore& store = CvStore::builtin());

/// Adaptive portmanteau test with the penalized order choice.
TestOutcome ggl_test(const Series& series, const Kernel& kernel, const PenaltyConfig& cfg, double alpha,
                     bool standardized, std::optional<ResidualKind> residual_model = std::nullopt,
                     const CvStore& store = CvStore::builtin(), CvRule cv = CvRule::SelfNormalized);

TestOutcome el_test(const Series& series, double alpha, std::size_t J = 0,
                    std::optional<ResidualKind> residual_model = std::nullopt,
                    const CvStore& store = CvStore::builtin());

TestOutcome cvm_test(const Series& series, double alpha, std::size_t J = 0,
                     const CvStore& store = CvStore::builtin());

TestOutcome imse_test(const Series& series, double alpha);

TestOutcome max_test(const Series& series, double alpha, std::size_t J = 0,
                     const CvStore& store = CvStore::builtin());

/// CvM_n = (n/pi^2) sum_{j<=J} R_j^2 / (j^2 tau_j^2).
double cvm_statistic(const AutocovTable& table, std::size_t J);

/// b_n (sqrt(n) max_{j<=J} |R_j/tau_j| - b_n), b_n = (2 ln J - ln ln J - ln 4pi)^{1/2}.
double max_statistic(const AutocovTable& table, std::size_t J);
double max_test_bn(std::size_t J);

/// Standardized Parzen-weighted statistic at the plug-in order.
double imse_statistic(const AutocovTable& table, const ImseBandwidth& bw);

std::size_t default_max_order(Method m, std::size_t n);

}  // namespace wntest
