#include "wntest/critical_values.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "parallel.hpp"
#include "wntest/covariance.hpp"
#include "wntest/errors.hpp"
#include "wntest/procedures.hpp"
#include "wntest/rng.hpp"
#include "wntest/summation.hpp"

namespace wntest {

std::vector<std::string_view> builtin_table_sources();  // generated at configure time

namespace {

constexpr double kAlphaTol = 1e-12;
constexpr double kZ975 = 1.959963984540054;

void check_alphas(std::span<const double> alphas) {
    if (alphas.empty()) throw std::invalid_argument("at least one alpha is required");
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    }
}

CriticalValueTable summarize(Distribution dist, std::vector<double>& draws, std::span<const double> alphas) {
    CriticalValueTable table;
    table.distribution = dist;
    std::sort(draws.begin(), draws.end());
    CompensatedSum mean;
    for (double d : draws) mean += d;
    table.meta.sample_mean = mean.value() / static_cast<double>(draws.size());
    std::vector<double> sorted_alphas(alphas.begin(), alphas.end());
    std::sort(sorted_alphas.rbegin(), sorted_alphas.rend());
    sorted_alphas.erase(std::unique(sorted_alphas.begin(), sorted_alphas.end()), sorted_alphas.end());
    for (double a : sorted_alphas) table.quantiles.push_back(empirical_quantile(draws, a));
    table.meta.generator = std::string(kGeneratorId);
    table.meta.replications = draws.size();
    return table;
}

}  // namespace

std::string distribution_name(Distribution d) {
    switch (d) {
        case Distribution::LobatoSN: return "lobato";
        case Distribution::CvMLimit: return "cvm";
        case Distribution::MaxTest: return "maxtest";
        case Distribution::Chi2_1: return "chi2_1";
        case Distribution::StdNormal: return "normal";
    }
    return "unknown";
}

namespace {

Distribution parse_distribution(const std::string& s) {
    for (auto d : {Distribution::LobatoSN, Distribution::CvMLimit, Distribution::MaxTest, Distribution::Chi2_1,
                   Distribution::StdNormal}) {
        if (distribution_name(d) == s) return d;
    }
    throw std::invalid_argument("unknown distribution '" + s + "'");
}

}  // namespace

const QuantileEntry& CriticalValueTable::entry(double alpha) const {
    for (const auto& q : quantiles) {
        if (std::fabs(q.alpha - alpha) <= kAlphaTol) return q;
    }
    std::ostringstream msg;
    msg << distribution_name(distribution) << " table has no quantile for alpha = " << alpha;
    throw std::out_of_range(msg.str());
}

double CriticalValueTable::value(double alpha) const { return entry(alpha).value; }

QuantileEntry empirical_quantile(std::vector<double>& draws, double alpha) {
    if (draws.empty()) throw std::invalid_argument("empirical_quantile: no draws");
    if (!std::is_sorted(draws.begin(), draws.end())) std::sort(draws.begin(), draws.end());
    const double N = static_cast<double>(draws.size());
    const auto at = [&](double rank) {  // 1-based rank, clamped
        const double r = std::clamp(rank, 1.0, N);
        return draws[static_cast<std::size_t>(r) - 1];
    };
    QuantileEntry q;
    q.alpha = alpha;
    const double centre = N * (1.0 - alpha);
    q.value = at(std::ceil(centre));
    const double half = kZ975 * std::sqrt(N * alpha * (1.0 - alpha));
    q.std_error = (at(std::ceil(centre + half)) - at(std::floor(centre - half))) / (2.0 * kZ975);
    return q;
}

nlohmann::json to_json(const CriticalValueTable& table) {
    nlohmann::json j;
    j["distribution"] = distribution_name(table.distribution);
    nlohmann::json params = nlohmann::json::object();
    switch (table.distribution) {
        case Distribution::LobatoSN: params["grid"] = table.meta.discretization; break;
        case Distribution::CvMLimit: params["truncation"] = table.meta.discretization; break;
        case Distribution::MaxTest:
            params["n"] = table.n;
            params["J"] = table.J;
            break;
        default: break;
    }
    j["params"] = params;
    j["quantiles"] = nlohmann::json::array();
    for (const auto& q : table.quantiles) {
        j["quantiles"].push_back({{"alpha", q.alpha}, {"value", q.value}, {"std_error", q.std_error}});
    }
    j["meta"] = {{"replications", table.meta.replications},
                 {"discretization", table.meta.discretization},
                 {"seed", table.meta.seed},
                 {"generator", table.meta.generator},
                 {"sample_mean", table.meta.sample_mean},
                 {"note", table.meta.note}};
    return j;
}

CriticalValueTable table_from_json(const nlohmann::json& j) {
    CriticalValueTable t;
    try {
        t.distribution = parse_distribution(j.at("distribution").get<std::string>());
        const auto& params = j.at("params");
        if (t.distribution == Distribution::MaxTest) {
            t.n = params.at("n").get<std::size_t>();
            t.J = params.at("J").get<std::size_t>();
        }
        for (const auto& q : j.at("quantiles")) {
            t.quantiles.push_back(
                {q.at("alpha").get<double>(), q.at("value").get<double>(), q.at("std_error").get<double>()});
        }
        const auto& m = j.at("meta");
        t.meta.replications = m.at("replications").get<std::uint64_t>();
        t.meta.discretization = m.at("discretization").get<std::size_t>();
        t.meta.seed = m.at("seed").get<std::uint64_t>();
        t.meta.generator = m.at("generator").get<std::string>();
        t.meta.sample_mean = m.value("sample_mean", 0.0);
        t.meta.note = m.value("note", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw DataError("critical_values", std::string("malformed table: ") + e.what());
    }
    std::sort(t.quantiles.begin(), t.quantiles.end(),
              [](const auto& a, const auto& b) { return a.alpha > b.alpha; });
    for (std::size_t i = 1; i < t.quantiles.size(); ++i) {
        if (!(t.quantiles[i].value > t.quantiles[i - 1].value)) {
            throw DataError("critical_values", "quantiles not strictly decreasing in alpha");
        }
    }
    return t;
}

CriticalValueTable tabulate_lobato(std::span<const double> alphas, std::uint64_t reps, std::size_t grid,
                                   std::uint64_t seed, unsigned threads) {
    check_alphas(alphas);
    if (reps < 1 || grid < 2) throw std::invalid_argument("tabulate_lobato: need reps >= 1 and grid >= 2");
    std::vector<double> draws(reps);
    const double g = static_cast<double>(grid);
    const double step = 1.0 / std::sqrt(g);
    // sum_{k=1}^{g} k^2
    const double sum_k2 = g * (g + 1.0) * (2.0 * g + 1.0) / 6.0;
    detail::parallel_for(reps, threads, [&](std::size_t r) {
        Engine rng = make_engine(seed, r);
        NormalDist normal;
        double w = 0.0, sum_w2 = 0.0, sum_kw = 0.0;
        for (std::size_t k = 1; k <= grid; ++k) {
            w += step * normal(rng);
            sum_w2 += w * w;
            sum_kw += static_cast<double>(k) * w;
        }
        // Riemann sum of (W(k/g) - (k/g) W(1))^2 over k = 1..g
        const double slope = w / g;
        const double bridge = (sum_w2 - 2.0 * slope * sum_kw + slope * slope * sum_k2) / g;
        if (!(bridge > 0.0)) throw DataError("critical_values", "nonpositive bridge integral");
        draws[r] = w * w / bridge;
    });
    auto table = summarize(Distribution::LobatoSN, draws, alphas);
    table.meta.discretization = grid;
    table.meta.seed = seed;
    table.meta.note = "W(1)^2 / int (W(r) - r W(1))^2 dr; random walk with `discretization` steps";
    return table;
}

CriticalValueTable tabulate_cvm(std::span<const double> alphas, std::size_t truncation, std::uint64_t reps,
                                std::uint64_t seed, unsigned threads) {
    check_alphas(alphas);
    if (reps < 1 || truncation < 1) throw std::invalid_argument("tabulate_cvm: need reps >= 1 and J >= 1");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    std::vector<double> weight(truncation + 1, 0.0);
    CompensatedSum head;
    for (std::size_t j = truncation; j >= 1; --j) {  // small terms first
        weight[j] = 1.0 / (pi2 * static_cast<double>(j) * static_cast<double>(j));
        head += weight[j];
    }
    const double tail_mean = 1.0 / 6.0 - head.value();
    std::vector<double> draws(reps);
    detail::parallel_for(reps, threads, [&](std::size_t r) {
        Engine rng = make_engine(seed, r);
        NormalDist normal;
        double s = 0.0;
        for (std::size_t j = 1; j <= truncation; ++j) {
            const double z = normal(rng);
            s += weight[j] * z * z;
        }
        draws[r] = s + tail_mean;
    });
    auto table = summarize(Distribution::CvMLimit, draws, alphas);
    table.meta.discretization = truncation;
    table.meta.seed = seed;
    std::ostringstream note;
    note.precision(17);
    note << "sum_{j<=J} Z_j^2/(pi^2 j^2) + omitted tail mean " << tail_mean;
    table.meta.note = note.str();
    return table;
}

CriticalValueTable tabulate_maxtest(std::size_t n, std::size_t J, std::span<const double> alphas,
                                    std::uint64_t reps, std::uint64_t seed, unsigned threads) {
    check_alphas(alphas);
    if (J < 8) throw std::invalid_argument("max test needs J >= 8");
    if (n < 10 || J > n - 2) throw std::invalid_argument("max test needs J <= n-2");
    if (reps < 1) throw std::invalid_argument("tabulate_maxtest: need reps >= 1");
    std::vector<double> draws(reps);
    detail::parallel_for(reps, threads, [&](std::size_t r) {
        Engine rng = make_engine(seed, r);
        NormalDist normal;
        std::vector<double> u(n);
        for (auto& x : u) x = normal(rng);
        const auto table = autocov_table(Series(std::move(u)), J, J);
        draws[r] = max_statistic(table, J);
    });
    auto table = summarize(Distribution::MaxTest, draws, alphas);
    table.n = n;
    table.J = J;
    table.meta.discretization = n;
    table.meta.seed = seed;
    table.meta.note = "finite-sample null quantiles under iid N(0,1)";
    return table;
}

double quantile(Distribution dist, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("quantile: alpha must lie in (0,1)");
    switch (dist) {
        case Distribution::StdNormal:
            return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>(), alpha));
        case Distribution::Chi2_1:
            return boost::math::quantile(
                boost::math::complement(boost::math::chi_squared_distribution<double>(1.0), alpha));
        default: throw std::invalid_argument("quantile: only chi2_1 and normal have closed forms");
    }
}

double lobato_cv(const CriticalValueTable& table, double gamma1, const Kernel& kernel, double alpha,
                 std::optional<double> tau1sq) {
    if (!(gamma1 > 0.0)) throw DegenerateError("critical_values", "long-run variance is zero");
    double cv = kernel.squared(1.0) * gamma1 * table.value(alpha);
    if (tau1sq) {
        if (!(*tau1sq > 0.0)) throw DegenerateError("critical_values", "tau_1^2 is zero");
        cv /= *tau1sq;
    }
    return cv;
}

const CvStore& CvStore::builtin() {
    static const CvStore store = [] {
        CvStore s;
        for (auto src : builtin_table_sources()) s.add(table_from_json(nlohmann::json::parse(src)));
        return s;
    }();
    return store;
}

CvStore CvStore::load_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw DataError("critical_values", "not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    CvStore s;
    for (const auto& f : files) {
        std::ifstream in(f);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw DataError("critical_values", f.string() + ": " + e.what());
        }
        s.add(table_from_json(j));
    }
    return s;
}

void CvStore::add(CriticalValueTable table) {
    switch (table.distribution) {
        case Distribution::LobatoSN: lobato_ = std::move(table); break;
        case Distribution::CvMLimit: cvm_ = std::move(table); break;
        case Distribution::MaxTest: {
            const auto key = std::make_pair(table.n, table.J);
            maxtest_.insert_or_assign(key, std::move(table));
            break;
        }
        default: throw std::invalid_argument("CvStore: closed-form distributions are not stored");
    }
}

void CvStore::merge(const CvStore& other) {
    if (other.lobato_) lobato_ = other.lobato_;
    if (other.cvm_) cvm_ = other.cvm_;
    for (const auto& [key, table] : other.maxtest_) maxtest_.insert_or_assign(key, table);
}

const CriticalValueTable& CvStore::lobato() const {
    if (!lobato_) throw DataError("critical_values", "no Lobato table loaded");
    return *lobato_;
}

const CriticalValueTable& CvStore::cvm() const {
    if (!cvm_) throw DataError("critical_values", "no CvM limit table loaded");
    return *cvm_;
}

bool CvStore::has_maxtest(std::size_t n, std::size_t J) const noexcept {
    return maxtest_.count({n, J}) > 0;
}

const CriticalValueTable& CvStore::maxtest(std::size_t n, std::size_t J) const {
    auto it = maxtest_.find({n, J});
    if (it == maxtest_.end()) {
        throw DataError("critical_values", "no max-test table for n = " + std::to_string(n) +
                                               ", J = " + std::to_string(J) + " (run tabulate-cv --dist maxtest)");
    }
    return it->second;
}

}  // namespace wntest
