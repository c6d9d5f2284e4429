#include "wntest/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "wntest/errors.hpp"
#include "wntest/statistics.hpp"
#include "wntest/summation.hpp"

namespace wntest {

std::string method_name(Method m) {
    switch (m) {
        case Method::GGL_BP: return "ggl-bp";
        case Method::GGL_Par: return "ggl-par";
        case Method::EL: return "el";
        case Method::IMSE: return "imse";
        case Method::CvM: return "cvm";
        case Method::MaxTest: return "max";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (auto m : {Method::GGL_BP, Method::GGL_Par, Method::EL, Method::IMSE, Method::CvM, Method::MaxTest}) {
        if (method_name(m) == name) return m;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) +
                                "' (expected ggl-bp|ggl-par|el|imse|cvm|max)");
}

namespace {

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> opt_get(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

double checked_tau(const AutocovTable& table, std::size_t j) {
    if (!table.has_tau(j) || table.tau_degenerate[j]) {
        throw DegenerateError("tests", "standardization degenerate at lag " + std::to_string(j));
    }
    return table.tausq[j];
}

Kernel kernel_for(const TestOptions& o) {
    if (o.kernel) return *o.kernel;
    return o.method == Method::GGL_Par ? Kernel::modified_parzen() : Kernel::uniform();
}

std::vector<TestOutcome> decide(Method m, double statistic, std::optional<std::size_t> order,
                                const Diagnostics& diag, std::span<const double> alphas,
                                const std::function<double(double)>& cv_of) {
    std::vector<TestOutcome> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        TestOutcome o;
        o.method = m;
        o.statistic = statistic;
        o.selected_order = order;
        o.alpha = a;
        o.critical_value = cv_of(a);
        o.reject = o.statistic >= o.critical_value;
        o.diagnostics = diag;
        out.push_back(std::move(o));
    }
    return out;
}

double long_run_variance(const PreparedSample& s) {
    const auto& g = s.gamma1();
    if (g.degenerate) {
        throw DegenerateError("tests", s.estimated() ? "recursive long-run variance is zero"
                                                     : "lag-1 long-run variance is zero");
    }
    return g.value;
}

std::vector<TestOutcome> run_ggl(const PreparedSample& s, const TestOptions& o, std::span<const double> alphas,
                                 const CvStore& store, const TestContext* ctx) {
    const std::size_t n = s.n();
    if (n < 8) throw DataError("tests", "series too short for the adaptive test (n < 8)");
    const Kernel kernel = kernel_for(o);
    const auto& table = s.table();
    const std::size_t pbar = resolve_pbar(o.penalty, n, o.standardized);

    std::optional<CenteringTable> local;
    const CenteringTable* centering = nullptr;
    if (ctx && ctx->centering && ctx->centering->n == n && ctx->centering->pbar() >= pbar) {
        centering = &*ctx->centering;
    } else {
        local = centering_table(kernel, n, pbar);
        centering = &*local;
    }
    const auto sel = o.standardized ? select_order_star(table, kernel, o.penalty, *centering)
                                    : select_order(table, kernel, o.penalty, *centering);
    const double stat = o.standardized ? s_star_stat(table, kernel, sel.p_hat) : s_stat(table, kernel, sel.p_hat);

    Diagnostics d;
    d.r0 = table.rhat[0];
    d.penalty = o.penalty.penalty(n);
    d.max_order = pbar;
    d.standardized = o.standardized;
    d.estimated_residuals = s.estimated();
    const double k1 = kernel.squared(1.0);

    if (o.cv == CvRule::Chi2) {
        d.cv_source = "chi2";
        const double scale = o.standardized ? k1 : k1 * table.rhat[0] * table.rhat[0];
        if (o.standardized) d.tau1_sq = checked_tau(table, 1);
        return decide(o.method, stat, sel.p_hat, d, alphas,
                      [&](double a) { return scale * quantile(Distribution::Chi2_1, a); });
    }
    const double gamma = long_run_variance(s);
    d.gamma1 = gamma;
    d.cv_source = s.estimated() ? "kuan-lee" : "lobato";
    std::optional<double> tau1;
    if (o.standardized) tau1 = checked_tau(table, 1);
    d.tau1_sq = tau1;
    const auto& lob = store.lobato();
    return decide(o.method, stat, sel.p_hat, d, alphas,
                  [&](double a) { return lobato_cv(lob, gamma, kernel, a, tau1); });
}

std::vector<TestOutcome> run_el(const PreparedSample& s, const TestOptions& o, std::span<const double> alphas,
                                const CvStore& store) {
    const std::size_t n = s.n();
    const std::size_t J = o.max_order ? o.max_order : default_max_order(Method::EL, n);
    const auto& table = s.table();
    const auto sel = el_select(table, J, n);
    CompensatedSum bp;
    for (std::size_t j = 1; j <= sel.order.p_hat; ++j) {
        bp += static_cast<double>(n) * table.rhat[j] * table.rhat[j] / checked_tau(table, j);
    }
    Diagnostics d;
    d.r0 = table.rhat[0];
    d.penalty = sel.branch == ElPenalty::LogN ? std::log(static_cast<double>(n)) : 2.0;
    d.penalty_branch = sel.branch == ElPenalty::LogN ? "ln n" : "2";
    d.max_order = J;
    d.standardized = true;
    d.estimated_residuals = s.estimated();
    const double tau1 = checked_tau(table, 1);
    d.tau1_sq = tau1;
    if (o.cv == CvRule::Chi2) {
        d.cv_source = "chi2";
        return decide(Method::EL, bp.value(), sel.order.p_hat, d, alphas,
                      [](double a) { return quantile(Distribution::Chi2_1, a); });
    }
    const double gamma = long_run_variance(s);
    d.gamma1 = gamma;
    d.cv_source = s.estimated() ? "kuan-lee" : "lobato";
    const auto& lob = store.lobato();
    const Kernel bp_kernel = Kernel::uniform();
    return decide(Method::EL, bp.value(), sel.order.p_hat, d, alphas,
                  [&](double a) { return lobato_cv(lob, gamma, bp_kernel, a, tau1); });
}

std::vector<TestOutcome> run_cvm(const PreparedSample& s, const TestOptions& o, std::span<const double> alphas,
                                 const CvStore& store) {
    const std::size_t n = s.n();
    const std::size_t J = o.max_order ? o.max_order : default_max_order(Method::CvM, n);
    Diagnostics d;
    d.max_order = J;
    d.standardized = true;
    d.estimated_residuals = s.estimated();
    d.cv_source = "cvm-limit";
    if (s.estimated()) d.notes.push_back("critical values not adjusted for parameter estimation");
    const double stat = cvm_statistic(s.table(), J);
    const auto& table = store.cvm();
    return decide(Method::CvM, stat, std::nullopt, d, alphas, [&](double a) { return table.value(a); });
}

std::vector<TestOutcome> run_imse(const PreparedSample& s, std::span<const double> alphas) {
    const auto bw = imse_bandwidth(s.table(), s.n());
    Diagnostics d;
    d.bandwidth = bw.p_real;
    d.max_order = bw.p_imse;
    d.standardized = true;
    d.estimated_residuals = s.estimated();
    d.cv_source = "normal";
    if (s.estimated()) d.notes.push_back("critical values not adjusted for parameter estimation");
    const double stat = imse_statistic(s.table(), bw);
    return decide(Method::IMSE, stat, bw.p_imse, d, alphas,
                  [](double a) { return quantile(Distribution::StdNormal, a); });
}

std::vector<TestOutcome> run_max(const PreparedSample& s, const TestOptions& o, std::span<const double> alphas,
                                 const CvStore& store) {
    const std::size_t n = s.n();
    const std::size_t J = o.max_order ? o.max_order : default_max_order(Method::MaxTest, n);
    Diagnostics d;
    d.max_order = J;
    d.standardized = true;
    d.estimated_residuals = s.estimated();
    d.cv_source = "maxtest";
    if (s.estimated()) d.notes.push_back("critical values not adjusted for parameter estimation");
    const double stat = max_statistic(s.table(), J);
    const auto& table = store.maxtest(n, J);
    return decide(Method::MaxTest, stat, std::nullopt, d, alphas, [&](double a) { return table.value(a); });
}

}  // namespace

nlohmann::json to_json(const TestOutcome& o) {
    const auto& d = o.diagnostics;
    nlohmann::json diag = {{"gamma1", opt(d.gamma1)},
                           {"tau1_sq", opt(d.tau1_sq)},
                           {"r0", opt(d.r0)},
                           {"penalty", opt(d.penalty)},
                           {"penalty_branch", d.penalty_branch},
                           {"cv_source", d.cv_source},
                           {"bandwidth", opt(d.bandwidth)},
                           {"max_order", d.max_order},
                           {"standardized", d.standardized},
                           {"estimated_residuals", d.estimated_residuals},
                           {"notes", d.notes}};
    return {{"method", method_name(o.method)},
            {"statistic", o.statistic},
            {"selected_order", opt(o.selected_order)},
            {"critical_value", o.critical_value},
            {"alpha", o.alpha},
            {"reject", o.reject},
            {"diagnostics", diag}};
}

TestOutcome outcome_from_json(const nlohmann::json& j) {
    TestOutcome o;
    try {
        o.method = parse_method(j.at("method").get<std::string>());
        o.statistic = j.at("statistic").get<double>();
        o.selected_order = opt_get<std::size_t>(j, "selected_order");
        o.critical_value = j.at("critical_value").get<double>();
        o.alpha = j.at("alpha").get<double>();
        o.reject = j.at("reject").get<bool>();
        const auto& d = j.at("diagnostics");
        o.diagnostics.gamma1 = opt_get<double>(d, "gamma1");
        o.diagnostics.tau1_sq = opt_get<double>(d, "tau1_sq");
        o.diagnostics.r0 = opt_get<double>(d, "r0");
        o.diagnostics.penalty = opt_get<double>(d, "penalty");
        o.diagnostics.penalty_branch = d.at("penalty_branch").get<std::string>();
        o.diagnostics.cv_source = d.at("cv_source").get<std::string>();
        o.diagnostics.bandwidth = opt_get<double>(d, "bandwidth");
        o.diagnostics.max_order = d.at("max_order").get<std::size_t>();
        o.diagnostics.standardized = d.at("standardized").get<bool>();
        o.diagnostics.estimated_residuals = d.at("estimated_residuals").get<bool>();
        o.diagnostics.notes = d.at("notes").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("tests", std::string("malformed outcome: ") + e.what());
    }
    return o;
}

PreparedSample::PreparedSample(const Series& data, ResidualKind kind) : data_(data) {
    if (kind == ResidualKind::AR1_OLS) {
        model_ = fit_ar1(data_);
        residuals_ = wntest::residuals(data_, model_);
    } else {
        residuals_ = data_;
    }
    table_ = full_autocov_table(residuals_);
}

const Degeneracy& PreparedSample::gamma1() const {
    if (!gamma1_) {
        gamma1_ = estimated() ? kuanlee_gamma1(data_, model_) : lobato_gamma1(residuals_);
    }
    return *gamma1_;
}

std::size_t default_max_order(Method m, std::size_t n) {
    switch (m) {
        case Method::EL:
        case Method::CvM: return n - 2;
        case Method::MaxTest: return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
        default: return 0;
    }
}

TestContext make_context(const TestOptions& options, std::size_t n) {
    TestContext ctx;
    if (options.method == Method::GGL_BP || options.method == Method::GGL_Par) {
        const std::size_t pbar = resolve_pbar(options.penalty, n, options.standardized);
        ctx.centering = centering_table(kernel_for(options), n, pbar);
    }
    return ctx;
}

std::vector<TestOutcome> run_test(const PreparedSample& sample, const TestOptions& options,
                                  std::span<const double> alphas, const CvStore& store, const TestContext* context) {
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    }
    switch (options.method) {
        case Method::GGL_BP:
        case Method::GGL_Par: return run_ggl(sample, options, alphas, store, context);
        case Method::EL: return run_el(sample, options, alphas, store);
        case Method::CvM: return run_cvm(sample, options, alphas, store);
        case Method::IMSE: return run_imse(sample, alphas);
        case Method::MaxTest: return run_max(sample, options, alphas, store);
    }
    throw std::invalid_argument("unknown method");
}

TestOutcome run_test(const Series& data, const TestOptions& options, double alpha, const CvStore& store) {
    const PreparedSample sample(data, options.residual);
    const double alphas[] = {alpha};
    return run_test(sample, options, alphas, store).front();
}

TestOutcome ggl_test(const Series& series, const Kernel& kernel, const PenaltyConfig& cfg, double alpha,
                     bool standardized, std::optional<ResidualKind> residual_model, const CvStore& store,
                     CvRule cv) {
    TestOptions o;
    o.method = kernel.kind() == KernelKind::ModifiedParzen ? Method::GGL_Par : Method::GGL_BP;
    o.kernel = kernel;
    o.penalty = cfg;
    o.standardized = standardized;
    o.cv = cv;
    o.residual = residual_model.value_or(ResidualKind::Identity);
    return run_test(series, o, alpha, store);
}

TestOutcome el_test(const Series& series, double alpha, std::size_t J, std::optional<ResidualKind> residual_model,
                    const CvStore& store) {
    TestOptions o;
    o.method = Method::EL;
    o.max_order = J;
    o.residual = residual_model.value_or(ResidualKind::Identity);
    return run_test(series, o, alpha, store);
}

TestOutcome cvm_test(const Series& series, double alpha, std::size_t J, const CvStore& store) {
    TestOptions o;
    o.method = Method::CvM;
    o.max_order = J;
    return run_test(series, o, alpha, store);
}

TestOutcome imse_test(const Series& series, double alpha) {
    TestOptions o;
    o.method = Method::IMSE;
    return run_test(series, o, alpha, CvStore::builtin());
}

TestOutcome max_test(const Series& series, double alpha, std::size_t J, const CvStore& store) {
    TestOptions o;
    o.method = Method::MaxTest;
    o.max_order = J;
    return run_test(series, o, alpha, store);
}

double cvm_statistic(const AutocovTable& table, std::size_t J) {
    const std::size_t n = table.n;
    if (J < 1 || J > n - 2 || J > table.tau_maxlag()) {
        throw std::invalid_argument("CvM: J = " + std::to_string(J) + " outside [1, n-2]");
    }
    CompensatedSum s;
    for (std::size_t j = 1; j <= J; ++j) {
        const double jd = static_cast<double>(j);
        s += table.rhat[j] * table.rhat[j] / (jd * jd * checked_tau(table, j));
    }
    return static_cast<double>(n) / (std::numbers::pi * std::numbers::pi) * s.value();
}

double max_test_bn(std::size_t J) {
    if (J < 8) throw std::invalid_argument("max test needs J >= 8 (b_n requires ln ln J > 0)");
    const double j = static_cast<double>(J);
    return std::sqrt(2.0 * std::log(j) - std::log(std::log(j)) - std::log(4.0 * std::numbers::pi));
}

double max_statistic(const AutocovTable& table, std::size_t J) {
    const double b = max_test_bn(J);
    if (J > table.n - 2 || J > table.tau_maxlag()) {
        throw std::invalid_argument("max test: J = " + std::to_string(J) + " exceeds n-2");
    }
    double m = 0.0;
    for (std::size_t j = 1; j <= J; ++j) m = std::max(m, std::fabs(table.rhat[j]) / std::sqrt(checked_tau(table, j)));
    return b * (std::sqrt(static_cast<double>(table.n)) * m - b);
}

double imse_statistic(const AutocovTable& table, const ImseBandwidth& bw) {
    const std::size_t n = table.n;
    const double nd = static_cast<double>(n);
    const std::size_t last = std::min(bw.p_imse, n - 2);
    CompensatedSum num, den;
    for (std::size_t j = 1; j <= last; ++j) {
        const double k = parzen(static_cast<double>(j) / bw.p_real);
        const double w = 1.0 - static_cast<double>(j) / nd;
        num += k * k * (nd * table.rhat[j] * table.rhat[j] / checked_tau(table, j) - w);
        den += k * k * k * k * w * w;
    }
    if (!(den.value() > 0.0)) throw DegenerateError("tests", "IMSE scale is zero (plug-in order too small)");
    return num.value() / std::sqrt(2.0 * den.value());
}

}  // namespace wntest
