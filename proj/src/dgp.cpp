#include "wntest/dgp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/random/student_t_distribution.hpp>

#include "wntest/errors.hpp"

namespace wntest {

namespace {

struct NamedKind {
    DgpKind kind;
    const char* name;
};

constexpr NamedKind kNames[] = {
    {DgpKind::IIDNormal, "iid-normal"},   {DgpKind::IIDStudent, "iid-student"},
    {DgpKind::IIDChi1Centered, "iid-chi1"}, {DgpKind::GARCH11, "garch11"},
    {DgpKind::ARCH1, "arch1"},             {DgpKind::Bilinear, "bilinear"},
    {DgpKind::NoMDS, "no-mds"},            {DgpKind::AllPass, "all-pass"},
    {DgpKind::AR1Observed, "ar1"},         {DgpKind::LacunaryMA, "lacunary-ma"},
    {DgpKind::LacunaryAR, "lacunary-ar"},  {DgpKind::RandomMA, "random-ma"},
};

std::vector<double> normals(std::size_t count, Engine& rng) {
    NormalDist normal;
    std::vector<double> z(count);
    for (auto& x : z) x = normal(rng);
    return z;
}

Series finish(std::vector<double> path, std::size_t burn_in) {
    path.erase(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(burn_in));
    return Series(std::move(path));
}

}  // namespace

std::string dgp_name(DgpKind kind) {
    for (const auto& e : kNames) {
        if (e.kind == kind) return e.name;
    }
    return "unknown";
}

DgpKind parse_dgp(std::string_view name) {
    for (const auto& e : kNames) {
        if (name == e.name) return e.kind;
    }
    throw std::invalid_argument("unknown dgp '" + std::string(name) + "'");
}

DgpSpec DgpSpec::of(DgpKind kind) {
    DgpSpec s;
    s.kind = kind;
    return s;
}

DgpSpec DgpSpec::lacunary_ma(std::size_t P, double coef) {
    DgpSpec s = of(DgpKind::LacunaryMA);
    s.P = P;
    s.coef = coef;
    return s;
}

DgpSpec DgpSpec::lacunary_ar(std::size_t P, double coef) {
    DgpSpec s = of(DgpKind::LacunaryAR);
    s.P = P;
    s.coef = coef;
    return s;
}

DgpSpec DgpSpec::random_ma(std::size_t P, double scale) {
    DgpSpec s = of(DgpKind::RandomMA);
    s.P = P;
    s.scale = scale;
    return s;
}

nlohmann::json to_json(const DgpSpec& s) {
    nlohmann::json j = {{"kind", dgp_name(s.kind)}, {"burn_in", s.burn_in}};
    switch (s.kind) {
        case DgpKind::IIDStudent: j["df"] = s.df; break;
        case DgpKind::AR1Observed: j["coef"] = s.coef; break;
        case DgpKind::LacunaryMA:
        case DgpKind::LacunaryAR:
            j["P"] = s.P;
            j["coef"] = s.coef;
            break;
        case DgpKind::RandomMA:
            j["P"] = s.P;
            j["scale"] = s.scale;
            j["gamma_coef"] = s.gamma_coef;
            break;
        default: break;
    }
    return j;
}

double random_ma_coefficient(const DgpSpec& spec, std::size_t n) {
    if (n < 5) throw std::invalid_argument("random MA needs n >= 5");
    const double gamma_n = spec.gamma_coef * std::sqrt(2.0 * std::log(std::log(static_cast<double>(n - 2))));
    return std::sqrt(spec.scale * gamma_n) /
           (std::sqrt(static_cast<double>(n)) * std::pow(static_cast<double>(spec.P), 0.25));
}

GeneratedSeries generate(const DgpSpec& spec, std::size_t n, Engine& rng) {
    if (n < 1) throw std::invalid_argument("generate: n must be positive");
    NormalDist normal;
    const std::size_t burn = spec.burn_in;
    const std::size_t total = n + burn;
    GeneratedSeries out;

    switch (spec.kind) {
        case DgpKind::IIDNormal: out.series = Series(normals(n, rng)); break;

        case DgpKind::IIDStudent: {
            if (!(spec.df > 0.0)) throw std::invalid_argument("Student df must be positive");
            boost::random::student_t_distribution<double> t(spec.df);
            std::vector<double> v(n);
            for (auto& x : v) x = t(rng);
            out.series = Series(std::move(v));
            break;
        }

        case DgpKind::IIDChi1Centered: {
            auto v = normals(n, rng);
            for (auto& x : v) x = x * x - 1.0;
            out.series = Series(std::move(v));
            break;
        }

        case DgpKind::GARCH11: {
            std::vector<double> u(total);
            double s2 = 0.001 / (1.0 - 0.95);
            double u2 = s2;
            for (std::size_t t = 0; t < total; ++t) {
                s2 = 0.001 + 0.90 * s2 + 0.05 * u2;
                u[t] = std::sqrt(s2) * normal(rng);
                u2 = u[t] * u[t];
            }
            out.series = finish(std::move(u), burn);
            break;
        }

        case DgpKind::ARCH1: {
            std::vector<double> u(total);
            double u2 = 0.0;
            for (std::size_t t = 0; t < total; ++t) {
                const double s2 = 0.001 + 0.9 * u2;
                u[t] = std::sqrt(s2) * normal(rng);
                u2 = u[t] * u[t];
            }
            out.series = finish(std::move(u), burn);
            break;
        }

        case DgpKind::Bilinear: {
            std::vector<double> u(total);
            double z_prev = 0.0, u1 = 0.0, u2 = 0.0;  // z_{t-1}, u_{t-1}, u_{t-2}
            for (std::size_t t = 0; t < total; ++t) {
                const double z = normal(rng);
                u[t] = z + 0.9 * z_prev * u2;
                u2 = u1;
                u1 = u[t];
                z_prev = z;
            }
            out.series = finish(std::move(u), burn);
            break;
        }

        case DgpKind::NoMDS: {
            const auto z = normals(n + 2, rng);
            std::vector<double> u(n);
            for (std::size_t t = 0; t < n; ++t) {
                const double z0 = z[t + 2], z1 = z[t + 1], z2 = z[t];
                u[t] = z1 * z2 * (1.0 + z2 + z0);
            }
            out.series = Series(std::move(u));
            break;
        }

        case DgpKind::AllPass: {
            boost::random::student_t_distribution<double> t9(9.0);
            std::vector<double> u(total);
            double u_prev = 0.0, z_prev = 0.0;
            for (std::size_t t = 0; t < total; ++t) {
                const double z = t9(rng);
                u[t] = 0.5 * u_prev + z - z_prev / 0.5;
                u_prev = u[t];
                z_prev = z;
            }
            out.series = finish(std::move(u), burn);
            break;
        }

        case DgpKind::AR1Observed: {
            std::vector<double> y(total);
            double prev = 0.0;
            for (std::size_t t = 0; t < total; ++t) {
                y[t] = spec.coef * prev + normal(rng);
                prev = y[t];
            }
            out.series = finish(std::move(y), burn);
            break;
        }

        case DgpKind::LacunaryMA: {
            if (spec.P < 1) throw std::invalid_argument("lacunary MA needs P >= 1");
            const auto e = normals(n + spec.P, rng);
            std::vector<double> u(n);
            for (std::size_t t = 0; t < n; ++t) u[t] = e[t + spec.P] + spec.coef * e[t];
            out.series = Series(std::move(u));
            break;
        }

        case DgpKind::LacunaryAR: {
            if (spec.P < 1) throw std::invalid_argument("lacunary AR needs P >= 1");
            if (!(std::fabs(spec.coef) < 1.0)) throw std::invalid_argument("lacunary AR needs |coef| < 1");
            // the P interleaved AR(1) chains start from their stationary law
            const double sd0 = 1.0 / std::sqrt(1.0 - spec.coef * spec.coef);
            std::vector<double> u(n);
            for (std::size_t t = 0; t < n; ++t) {
                const double e = normal(rng);
                u[t] = t < spec.P ? sd0 * e : spec.coef * u[t - spec.P] + e;
            }
            out.series = Series(std::move(u));
            break;
        }

        case DgpKind::RandomMA: {
            if (spec.P < 1) throw std::invalid_argument("random MA needs P >= 1");
            out.psi = normals(spec.P, rng);
            const double c = random_ma_coefficient(spec, n);
            const auto e = normals(n + spec.P, rng);
            std::vector<double> u(n);
            for (std::size_t t = 0; t < n; ++t) {
                const std::size_t now = t + spec.P;
                double ma = 0.0;
                for (std::size_t k = 1; k <= spec.P; ++k) ma += out.psi[k - 1] * e[now - k];
                u[t] = e[now] + c * ma;
            }
            out.series = Series(std::move(u));
            break;
        }
    }
    return out;
}

PopulationAutocov population_autocov(const DgpSpec& spec, std::size_t J, std::size_t n,
                                     const std::vector<double>& psi) {
    PopulationAutocov out;
    out.r.assign(J + 1, 0.0);
    switch (spec.kind) {
        case DgpKind::IIDNormal: out.r[0] = 1.0; break;
        case DgpKind::IIDStudent:
            if (!(spec.df > 2.0)) throw std::invalid_argument("Student variance needs df > 2");
            out.r[0] = spec.df / (spec.df - 2.0);
            break;
        case DgpKind::IIDChi1Centered: out.r[0] = 2.0; break;
        case DgpKind::LacunaryMA:
            out.r[0] = 1.0 + spec.coef * spec.coef;
            if (spec.P <= J) out.r[spec.P] = spec.coef;
            break;
        case DgpKind::LacunaryAR: {
            if (!(std::fabs(spec.coef) < 1.0)) throw std::invalid_argument("lacunary AR needs |coef| < 1");
            out.r[0] = 1.0 / (1.0 - spec.coef * spec.coef);
            double rho_k = 1.0;
            for (std::size_t lag = spec.P; lag <= J; lag += spec.P) {
                rho_k *= spec.coef;
                out.r[lag] = out.r[0] * rho_k;
            }
            break;
        }
        case DgpKind::RandomMA: {
            if (psi.size() != spec.P) throw std::invalid_argument("random MA population needs the drawn psi");
            const double c = random_ma_coefficient(spec, n);
            std::vector<double> b(spec.P + 1);
            b[0] = 1.0;
            for (std::size_t k = 1; k <= spec.P; ++k) b[k] = c * psi[k - 1];
            out.first_order.assign(J + 1, 0.0);
            out.remainder.assign(J + 1, 0.0);
            out.first_order[0] = 1.0;
            for (std::size_t j = 0; j <= J && j <= spec.P; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k + j <= spec.P; ++k) s += b[k] * b[k + j];
                out.r[j] = s;
                if (j >= 1) out.first_order[j] = b[j];
            }
            for (std::size_t j = 0; j <= J; ++j) out.remainder[j] = out.r[j] - out.first_order[j];
            break;
        }
        default: throw std::invalid_argument("no closed-form autocovariance for " + dgp_name(spec.kind));
    }
    return out;
}

double lacunary_cvm_norm(LacunaryFamily family, std::size_t P, double coef) {
    const double p2 = static_cast<double>(P) * static_cast<double>(P);
    if (family == LacunaryFamily::MA) {
        const double rho = coef / (1.0 + coef * coef);
        return rho * rho / p2;
    }
    const double r2 = coef * coef;
    double pow2k = 1.0, sum = 0.0;
    for (std::size_t k = 1;; ++k) {
        pow2k *= r2;
        const double term = pow2k / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < 1e-16 || k > 100000000) break;
    }
    return sum / p2;
}

double calibrate_lacunary(LacunaryFamily family, std::size_t P, std::size_t n) {
    if (P < 1 || n < 1) throw std::invalid_argument("calibrate: need P >= 1 and n >= 1");
    const double target = 3.0 / static_cast<double>(n);
    const double p2 = static_cast<double>(P) * static_cast<double>(P);
    // value of the norm at coef = 1
    const double sup = family == LacunaryFamily::MA ? 0.25 / p2 : (std::numbers::pi * std::numbers::pi / 6.0) / p2;
    if (!(target < sup)) {
        throw DataError("dgp", "no calibrated coefficient in (0,1) for P = " + std::to_string(P) +
                                   ", n = " + std::to_string(n));
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (lacunary_cvm_norm(family, P, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace wntest
