#include "wntest/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "parallel.hpp"
#include "wntest/errors.hpp"
#include "wntest/rng.hpp"

namespace wntest {

// ---------------------------------------------------------------------------
// Report accessors

double MethodReport::rejection_rate(std::size_t a, std::uint64_t reps) const {
    return static_cast<double>(rejections.at(a)) / static_cast<double>(reps);
}

double MethodReport::std_error(std::size_t a, std::uint64_t reps) const {
    const double f = rejection_rate(a, reps);
    return std::sqrt(f * (1.0 - f) / static_cast<double>(reps));
}

std::optional<double> MethodReport::pct_order_ne1() const {
    if (order_reported == 0) return std::nullopt;
    return 100.0 * static_cast<double>(order_ne1) / static_cast<double>(order_reported);
}

std::optional<double> MethodReport::mean_order() const {
    if (order_reported == 0) return std::nullopt;
    return static_cast<double>(order_sum) / static_cast<double>(order_reported);
}

std::optional<double> MethodReport::sd_order() const {
    if (order_reported < 2) return std::nullopt;
    const std::uint64_t N = order_reported;
    const double num = static_cast<double>(N * order_sumsq - order_sum * order_sum);
    return std::sqrt(num / (static_cast<double>(N) * static_cast<double>(N - 1)));
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

struct RepResult {
    std::vector<std::uint8_t> reject;   // method-major, alpha-minor
    std::vector<std::size_t> order;     // 0 when the method reports none
};

void require_tables(const ExperimentSpec& spec, const CvStore& store) {
    for (const auto& m : spec.methods) {
        const auto& o = m.options;
        switch (o.method) {
            case Method::GGL_BP:
            case Method::GGL_Par:
            case Method::EL:
                if (o.cv == CvRule::SelfNormalized) (void)store.lobato();
                break;
            case Method::CvM: (void)store.cvm(); break;
            case Method::MaxTest: {
                const std::size_t J = o.max_order ? o.max_order : default_max_order(Method::MaxTest, spec.n);
                (void)store.maxtest(spec.n, J);
                break;
            }
            case Method::IMSE: break;
        }
    }
}

}  // namespace

SimulationReport run_experiment(const ExperimentSpec& spec, const CvStore& store, const RunOptions& run) {
    if (spec.replications < 1) throw std::invalid_argument("experiment '" + spec.name + "': replications must be >= 1");
    if (spec.methods.empty()) throw std::invalid_argument("experiment '" + spec.name + "': no methods");
    if (spec.alphas.empty()) throw std::invalid_argument("experiment '" + spec.name + "': no alphas");
    require_tables(spec, store);

    const auto start = std::chrono::steady_clock::now();
    const std::size_t M = spec.methods.size();
    const std::size_t A = spec.alphas.size();
    const std::size_t raw_n = spec.n + (spec.residual == ResidualKind::AR1_OLS ? 1 : 0);

    std::vector<TestContext> contexts;
    contexts.reserve(M);
    for (const auto& m : spec.methods) contexts.push_back(make_context(m.options, spec.n));

    std::vector<RepResult> results(spec.replications);
    detail::parallel_for(
        spec.replications, run.threads,
        [&](std::size_t r) {
            Engine rng = make_engine(spec.seed, r);
            const auto generated = generate(spec.dgp, raw_n, rng);
            const PreparedSample sample(generated.series, spec.residual);
            RepResult res;
            res.reject.resize(M * A);
            res.order.resize(M);
            for (std::size_t m = 0; m < M; ++m) {
                const auto outcomes = run_test(sample, spec.methods[m].options, spec.alphas, store, &contexts[m]);
                for (std::size_t a = 0; a < A; ++a) res.reject[m * A + a] = outcomes[a].reject ? 1 : 0;
                res.order[m] = outcomes.front().selected_order.value_or(0);
            }
            results[r] = std::move(res);
        },
        [&](std::size_t r, std::exception_ptr e) {
            try {
                std::rethrow_exception(e);
            } catch (const std::exception& ex) {
                throw DataError("montecarlo", "experiment '" + spec.name + "', replication " + std::to_string(r) +
                                                  ": " + ex.what());
            }
        });

    SimulationReport report;
    report.spec = spec;
    report.methods.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
        report.methods[m].label = spec.methods[m].label;
        report.methods[m].method = spec.methods[m].options.method;
        report.methods[m].rejections.assign(A, 0);
    }
    if (run.keep_orders) report.orders.assign(M, std::vector<std::size_t>(spec.replications, 0));
    for (std::size_t r = 0; r < results.size(); ++r) {
        const auto& res = results[r];
        for (std::size_t m = 0; m < M; ++m) {
            auto& mr = report.methods[m];
            for (std::size_t a = 0; a < A; ++a) mr.rejections[a] += res.reject[m * A + a];
            const std::size_t p = res.order[m];
            if (p > 0) {
                ++mr.order_reported;
                mr.order_ne1 += p != 1 ? 1 : 0;
                mr.order_sum += p;
                mr.order_sumsq += static_cast<std::uint64_t>(p) * p;
            }
            if (run.keep_orders) report.orders[m][r] = p;
        }
    }
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<SimulationReport> run_suite(const std::vector<ExperimentSpec>& specs, const CvStore& store,
                                        const RunOptions& run) {
    std::vector<SimulationReport> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(run_experiment(s, store, run));
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string{}; }

std::string residual_name(ResidualKind k) { return k == ResidualKind::AR1_OLS ? "ar1" : "none"; }

}  // namespace

std::string suite_csv(const std::vector<SimulationReport>& reports) {
    std::ostringstream out;
    out << "experiment,dgp,n,replications,seed,residual_model,method,alpha,rejections,rejection_rate,std_error,"
           "pct_order_ne1,mean_order,sd_order\n";
    for (const auto& rep : reports) {
        const auto& s = rep.spec;
        for (const auto& m : rep.methods) {
            for (std::size_t a = 0; a < s.alphas.size(); ++a) {
                out << s.name << ',' << dgp_name(s.dgp.kind) << ',' << s.n << ',' << s.replications << ',' << s.seed
                    << ',' << residual_name(s.residual) << ',' << m.label << ',' << fmt(s.alphas[a]) << ','
                    << m.rejections[a] << ',' << fmt(m.rejection_rate(a, s.replications)) << ','
                    << fmt(m.std_error(a, s.replications)) << ',' << fmt(m.pct_order_ne1()) << ','
                    << fmt(m.mean_order()) << ',' << fmt(m.sd_order()) << '\n';
            }
        }
    }
    return out.str();
}

nlohmann::json to_json(const SimulationReport& rep) {
    const auto& s = rep.spec;
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& m : rep.methods) {
        nlohmann::json levels = nlohmann::json::array();
        for (std::size_t a = 0; a < s.alphas.size(); ++a) {
            levels.push_back({{"alpha", s.alphas[a]},
                              {"rejections", m.rejections[a]},
                              {"rejection_rate", m.rejection_rate(a, s.replications)},
                              {"std_error", m.std_error(a, s.replications)}});
        }
        const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
        methods.push_back({{"label", m.label},
                           {"method", method_name(m.method)},
                           {"levels", levels},
                           {"order",
                            {{"reported", m.order_reported},
                             {"ne1", m.order_ne1},
                             {"pct_ne1", opt(m.pct_order_ne1())},
                             {"mean", opt(m.mean_order())},
                             {"sd", opt(m.sd_order())}}}});
    }
    return {{"experiment", s.name},
            {"dgp", to_json(s.dgp)},
            {"n", s.n},
            {"replications", s.replications},
            {"seed", s.seed},
            {"alphas", s.alphas},
            {"residual_model", residual_name(s.residual)},
            {"generator", std::string(kGeneratorId)},
            {"methods", methods},
            {"runtime_seconds", rep.runtime_seconds}};
}

// ---------------------------------------------------------------------------
// Experiment files

MethodSpec parse_method_spec(const std::string& token) {
    MethodSpec spec;
    spec.label = token;
    std::string base = token;
    auto strip = [&](const std::string& suffix) {
        if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
            base.erase(base.size() - suffix.size());
            return true;
        }
        return false;
    };
    const bool chi2 = strip("-chi2");
    const bool raw = strip("-raw");
    spec.options.method = parse_method(base);
    const bool ggl = spec.options.method == Method::GGL_BP || spec.options.method == Method::GGL_Par;
    if (raw && !ggl) throw std::invalid_argument("'-raw' applies to ggl methods only: " + token);
    if (chi2 && !(ggl || spec.options.method == Method::EL)) {
        throw std::invalid_argument("'-chi2' applies to ggl and el only: " + token);
    }
    spec.options.standardized = !raw;
    spec.options.cv = chi2 ? CvRule::Chi2 : CvRule::SelfNormalized;
    return spec;
}

namespace {

using Scalar = std::variant<std::string, double, bool>;
using Value = std::variant<Scalar, std::vector<Scalar>>;
using Table = std::map<std::string, std::pair<Value, int>>;  // value, line

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw std::invalid_argument("experiment file line " + std::to_string(line) + ": " + msg);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

Scalar parse_scalar(const std::string& text, int line) {
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') return text.substr(1, text.size() - 2);
    if (text == "true") return true;
    if (text == "false") return false;
    std::string digits;
    for (char c : text) {
        if (c != '_') digits += c;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(digits, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != digits.size()) parse_fail(line, "cannot parse value '" + text + "'");
    return v;
}

Value parse_value(const std::string& text, int line) {
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') parse_fail(line, "unterminated array");
        std::vector<Scalar> items;
        std::string inner = text.substr(1, text.size() - 2);
        std::string item;
        bool in_string = false;
        for (char c : inner) {
            if (c == '"') in_string = !in_string;
            if (c == ',' && !in_string) {
                if (const auto t = trim(item); !t.empty()) items.push_back(parse_scalar(t, line));
                item.clear();
            } else {
                item += c;
            }
        }
        if (const auto t = trim(item); !t.empty()) items.push_back(parse_scalar(t, line));
        return items;
    }
    return parse_scalar(text, line);
}

std::vector<Table> parse_tables(const std::string& text) {
    Table defaults;
    std::vector<Table> tables;
    Table* current = &defaults;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line == "[[experiment]]") {
            tables.push_back(defaults);
            for (auto& [k, v] : tables.back()) v.second = -v.second;  // mark inherited
            current = &tables.back();
            continue;
        }
        if (line.front() == '[') parse_fail(lineno, "only [[experiment]] tables are supported");
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(lineno, "expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty() || value.empty()) parse_fail(lineno, "expected key = value");
        auto it = current->find(key);
        if (it != current->end() && it->second.second > 0) parse_fail(lineno, "duplicate key '" + key + "'");
        (*current)[key] = {parse_value(value, lineno), lineno};
    }
    return tables;
}

class Reader {
public:
    explicit Reader(Table t) : table_(std::move(t)) {}

    bool has(const std::string& key) const { return table_.count(key) > 0; }

    const Scalar& scalar(const std::string& key) {
        const auto& [value, line] = at(key);
        if (const auto* s = std::get_if<Scalar>(&value)) return *s;
        parse_fail(std::abs(line), "'" + key + "' must be a scalar");
    }

    std::string str(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const auto& s = scalar(key);
        if (const auto* v = std::get_if<std::string>(&s)) return *v;
        parse_fail(line_of(key), "'" + key + "' must be a string");
    }

    double num(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const auto& s = scalar(key);
        if (const auto* v = std::get_if<double>(&s)) return *v;
        parse_fail(line_of(key), "'" + key + "' must be a number");
    }

    std::uint64_t count(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const double v = num(key, 0.0);
        if (v < 0 || std::floor(v) != v) parse_fail(line_of(key), "'" + key + "' must be a nonnegative integer");
        return static_cast<std::uint64_t>(v);
    }

    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const auto& s = scalar(key);
        if (const auto* v = std::get_if<bool>(&s)) return *v;
        parse_fail(line_of(key), "'" + key + "' must be true or false");
    }

    std::vector<Scalar> list(const std::string& key) {
        const auto& [value, line] = at(key);
        if (const auto* v = std::get_if<std::vector<Scalar>>(&value)) return *v;
        return {std::get<Scalar>(value)};
    }

    void finish() const {
        for (const auto& [key, v] : table_) {
            if (!used_.count(key)) parse_fail(std::abs(v.second), "unknown key '" + key + "'");
        }
    }

private:
    const std::pair<Value, int>& at(const std::string& key) {
        auto it = table_.find(key);
        if (it == table_.end()) throw std::invalid_argument("experiment file: missing key '" + key + "'");
        used_.insert(key);
        return it->second;
    }
    int line_of(const std::string& key) const { return std::abs(table_.at(key).second); }

    Table table_;
    std::set<std::string> used_;
};

ExperimentSpec build_spec(Table table, std::size_t index) {
    Reader r(std::move(table));
    ExperimentSpec spec;
    spec.name = r.str("name", "experiment-" + std::to_string(index + 1));
    spec.dgp = DgpSpec::of(parse_dgp(r.str("dgp", "iid-normal")));
    spec.n = r.count("n", spec.n);
    spec.replications = r.count("replications", spec.replications);
    spec.seed = r.count("seed", spec.seed);
    spec.dgp.P = r.count("P", spec.dgp.P);
    spec.dgp.df = r.num("df", spec.dgp.df);
    spec.dgp.scale = r.num("scale", spec.dgp.scale);
    spec.dgp.gamma_coef = r.num("dgp_gamma", spec.dgp.gamma_coef);
    spec.dgp.burn_in = r.count("burn_in", spec.dgp.burn_in);
    if (r.has("coef") && r.has("calibrate")) throw std::invalid_argument("experiment '" + spec.name + "': give coef or calibrate, not both");
    spec.dgp.coef = r.num("coef", spec.dgp.coef);
    if (r.has("calibrate")) {
        const auto family = r.str("calibrate", "");
        if (family != "ma" && family != "ar") throw std::invalid_argument("calibrate must be \"ma\" or \"ar\"");
        const std::size_t cal_n = r.count("calibrate_n", spec.n);
        spec.dgp.coef = calibrate_lacunary(family == "ma" ? LacunaryFamily::MA : LacunaryFamily::AR, spec.dgp.P, cal_n);
    } else {
        (void)r.has("calibrate_n");
    }

    const auto residual = r.str("residual_model", "none");
    if (residual == "ar1") {
        spec.residual = ResidualKind::AR1_OLS;
    } else if (residual != "none") {
        throw std::invalid_argument("residual_model must be \"none\" or \"ar1\"");
    }

    if (r.has("alphas")) {
        spec.alphas.clear();
        for (const auto& a : r.list("alphas")) {
            const auto* v = std::get_if<double>(&a);
            if (!v) throw std::invalid_argument("alphas must be numbers");
            spec.alphas.push_back(*v);
        }
    }

    PenaltyConfig penalty;
    penalty.gamma_coef = r.num("gamma", penalty.gamma_coef);
    penalty.pbar = r.count("pbar", 0);
    const std::size_t el_order = r.count("el_max_order", 0);
    const std::size_t cvm_order = r.count("cvm_max_order", 0);
    const std::size_t max_order = r.count("max_order", 0);

    if (!r.has("methods")) throw std::invalid_argument("experiment '" + spec.name + "': missing methods");
    for (const auto& m : r.list("methods")) {
        const auto* token = std::get_if<std::string>(&m);
        if (!token) throw std::invalid_argument("methods must be strings");
        auto ms = parse_method_spec(*token);
        ms.options.penalty = penalty;
        ms.options.residual = spec.residual;
        switch (ms.options.method) {
            case Method::EL: ms.options.max_order = el_order; break;
            case Method::CvM: ms.options.max_order = cvm_order; break;
            case Method::MaxTest: ms.options.max_order = max_order; break;
            default: break;
        }
        spec.methods.push_back(std::move(ms));
    }
    r.finish();
    return spec;
}

}  // namespace

std::vector<ExperimentSpec> parse_experiments(const std::string& text) {
    auto tables = parse_tables(text);
    std::vector<ExperimentSpec> specs;
    specs.reserve(tables.size());
    for (std::size_t i = 0; i < tables.size(); ++i) specs.push_back(build_spec(std::move(tables[i]), i));
    return specs;
}

std::vector<ExperimentSpec> load_experiments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open experiment file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiments(buf.str());
}

}  // namespace wntest
