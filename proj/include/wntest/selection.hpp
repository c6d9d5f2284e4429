#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wntest/covariance.hpp"
#include "wntest/kernels.hpp"
#include "wntest/statistics.hpp"

namespace wntest {

/// Penalty gamma_n = gamma_coef * (2 ln ln(n-2))^{1/2}, unless gamma_n is
/// given directly. pbar = 0 selects the default largest order.
struct PenaltyConfig {
    double gamma_coef = 3.4;
    std::optional<double> gamma_n;
    std::size_t pbar = 0;

    /// Throws std::invalid_argument for n < 5.
    double penalty(std::size_t n) const;
};

enum class SelectionVariant { Raw, Standardized, EL, IMSE };

struct OrderSelection {
    std::size_t p_hat = 1;
    std::vector<double> objective;  // index p - 1
    SelectionVariant variant = SelectionVariant::Raw;
};

/// Largest admissible order: pbar if set, else n-1 for raw statistics and
/// n-2 for standardized ones (tau_{n-1}^2 is identically zero).
std::size_t resolve_pbar(const PenaltyConfig& cfg, std::size_t n, bool standardized);

/// Smallest maximizer over p in [1, pbar] of S_p/R_0^2 - E(p) - gamma_n V_Delta(p).
/// Throws DegenerateError("zero variance") when R_0 = 0.
OrderSelection select_order(const AutocovTable& table, const Kernel& kernel, const PenaltyConfig& cfg);
OrderSelection select_order(const AutocovTable& table, const Kernel& kernel, const PenaltyConfig& cfg,
                            const CenteringTable& centering);

/// Same with S*_p in place of S_p/R_0^2.
OrderSelection select_order_star(const AutocovTable& table, const Kernel& kernel, const PenaltyConfig& cfg);
OrderSelection select_order_star(const AutocovTable& table, const Kernel& kernel,
                                 const PenaltyConfig& cfg, const CenteringTable& centering);

enum class ElPenalty { LogN, Two };

struct ElSelection {
    OrderSelection order;
    ElPenalty branch = ElPenalty::LogN;
    double max_abs_ratio = 0.0;  // sqrt(n) max_j |R_j / tau_j|
};

/// Smallest maximizer of BP*_p - g p over p in [1, J], with g = ln n when
/// sqrt(n) max_{j<=J} |R_j/tau_j| <= (2.4 ln n)^{1/2} and g = 2 otherwise.
ElSelection el_select(const AutocovTable& table, std::size_t J, std::size_t n);

struct ImseBandwidth {
    double pilot = 0.0;   // (4n/100)^{4/25}
    double c_tilde = 0.0;
    double p_real = 0.0;  // (1 v c^{1/5}) n^{1/5}; argument scale of the kernel
    std::size_t p_imse = 1;  // floor(p_real), summation limit
};

/// Newey-West type plug-in order with the base Parzen window.
ImseBandwidth imse_bandwidth(const AutocovTable& table, std::size_t n);

}  // namespace wntest
