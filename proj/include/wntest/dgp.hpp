#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "wntest/rng.hpp"
#include "wntest/series.hpp"

namespace wntest {

enum class DgpKind {
    IIDNormal,
    IIDStudent,
    IIDChi1Centered,
    GARCH11,
    ARCH1,
    Bilinear,
    NoMDS,
    AllPass,
    AR1Observed,
    LacunaryMA,
    LacunaryAR,
    RandomMA,
};

/// Null and alternative processes of the simulation design.
///
///   GARCH11     u = s z, s_t^2 = 0.001 + 0.90 s_{t-1}^2 + 0.05 u_{t-1}^2
///   ARCH1       u = s z, s_t^2 = 0.001 + 0.9 u_{t-1}^2
///   Bilinear    u_t = z_t + 0.9 z_{t-1} u_{t-2}
///   NoMDS       u_t = z_{t-1} z_{t-2} (1 + z_{t-2} + z_t)
///   AllPass     u_t - 0.5 u_{t-1} = z_t - z_{t-1} / 0.5, z ~ Student(9)
///   AR1Observed y_t = coef y_{t-1} + z_t (coef defaults to 0.8)
///   LacunaryMA  u_t = e_t + coef e_{t-P}
///   LacunaryAR  u_t = coef u_{t-P} + e_t
///   RandomMA    u_t = e_t + c sum_{k<=P} psi_k e_{t-k},
///               c = (scale gamma_n)^{1/2} / (n^{1/2} P^{1/4}), psi_k iid N(0,1)
///               redrawn per call, gamma_n = gamma_coef (2 ln ln(n-2))^{1/2}.
struct DgpSpec {
    DgpKind kind = DgpKind::IIDNormal;
    double df = 3.0;           // IIDStudent
    std::size_t P = 1;         // lacunary, RandomMA
    double coef = 0.8;         // AR1Observed, lacunary
    double scale = 2.5;        // RandomMA
    double gamma_coef = 3.4;   // RandomMA
    std::size_t burn_in = 500;

    static DgpSpec iid_normal() { return {}; }
    static DgpSpec lacunary_ma(std::size_t P, double coef);
    static DgpSpec lacunary_ar(std::size_t P, double coef);
    static DgpSpec random_ma(std::size_t P, double scale = 2.5);
    static DgpSpec of(DgpKind kind);
};

std::string dgp_name(DgpKind kind);
DgpKind parse_dgp(std::string_view name);
nlohmann::json to_json(const DgpSpec& spec);

struct GeneratedSeries {
    Series series;
    std::vector<double> psi;  // RandomMA coefficients, psi[k-1] = psi_k
};

/// Throws std::invalid_argument for invalid parameters.
GeneratedSeries generate(const DgpSpec& spec, std::size_t n, Engine& rng);

/// RandomMA multiplier c for sample size n.
double random_ma_coefficient(const DgpSpec& spec, std::size_t n);

/// Population autocovariances R_0..R_J with unit innovation variance.
/// For RandomMA `first_order` holds the leading term c psi_j (R_0 = 1) and
/// `remainder` the exact difference to the population autocovariance.
struct PopulationAutocov {
    std::vector<double> r;
    std::vector<double> first_order;
    std::vector<double> remainder;
};

PopulationAutocov population_autocov(const DgpSpec& spec, std::size_t J, std::size_t n = 0,
                                     const std::vector<double>& psi = {});

enum class LacunaryFamily { MA, AR };

/// Positive coefficient in (0,1) for which sum_k (R_k/R_0)^2 / k^2 = 3/n,
/// found by bisection to 1e-10. Throws DataError if no root exists.
double calibrate_lacunary(LacunaryFamily family, std::size_t P, std::size_t n);

/// sum_k (R_k / R_0)^2 / k^2 of a lacunary process.
double lacunary_cvm_norm(LacunaryFamily family, std::size_t P, double coef);

}  // namespace wntest
