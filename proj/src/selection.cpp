#include "wntest/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wntest/errors.hpp"
#include "wntest/kernels.hpp"
#include "wntest/summation.hpp"

namespace wntest {

double PenaltyConfig::penalty(std::size_t n) const {
    if (gamma_n) return *gamma_n;
    if (n < 5) throw std::invalid_argument("penalty needs n >= 5 so that ln ln(n-2) > 0");
    return gamma_coef * std::sqrt(2.0 * std::log(std::log(static_cast<double>(n - 2))));
}

std::size_t resolve_pbar(const PenaltyConfig& cfg, std::size_t n, bool standardized) {
    const std::size_t cap = standardized ? n - 2 : n - 1;
    if (cfg.pbar == 0) return cap;
    if (cfg.pbar > cap) {
        throw std::invalid_argument("pbar = " + std::to_string(cfg.pbar) + " exceeds " +
                                    (standardized ? "n-2" : "n-1") + " = " + std::to_string(cap));
    }
    return cfg.pbar;
}

namespace {

std::size_t smallest_argmax(const std::vector<double>& objective) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < objective.size(); ++i) {
        if (objective[i] > objective[best]) best = i;
    }
    return best + 1;
}

OrderSelection penalized(const AutocovTable& table, const Kernel& kernel, const PenaltyConfig& cfg,
                         const CenteringTable& centering, bool standardized) {
    const std::size_t n = table.n;
    if (!(table.rhat[0] > 0.0)) throw DegenerateError("selection", "zero variance");
    const std::size_t pbar = resolve_pbar(cfg, n, standardized);
    if (centering.n != n || centering.pbar() < pbar) {
        throw std::invalid_argument("selection: centering table does not cover (n, pbar)");
    }
    const double gamma = cfg.penalty(n);
    const auto profile = s_profile(table, kernel, pbar, standardized);
    const double scale = standardized ? 1.0 : 1.0 / (table.rhat[0] * table.rhat[0]);

    OrderSelection sel;
    sel.variant = standardized ? SelectionVariant::Standardized : SelectionVariant::Raw;
    sel.objective.resize(pbar);
    for (std::size_t p = 1; p <= pbar; ++p) {
        sel.objective[p - 1] = profile[p] * scale - centering.e[p] - gamma * centering.v_delta[p];
    }
    sel.p_hat = smallest_argmax(sel.objective);
    return sel;
}

}  // namespace

OrderSelection select_order(const AutocovTable& table, const Kernel& kernel, const PenaltyConfig& cfg,
                            const CenteringTable& centering) {
    return penalized(table, kernel, cfg, centering, false);
}

OrderSelection select_order(const AutocovTable& table, const Kernel& kernel, const PenaltyConfig& cfg) {
    const std::size_t pbar = resolve_pbar(cfg, table.n, false);
    return penalized(table, kernel, cfg, centering_table(kernel, table.n, pbar), false);
}

OrderSelection select_order_star(const AutocovTable& table, const Kernel& kernel,
                                 const PenaltyConfig& cfg, const CenteringTable& centering) {
    return penalized(table, kernel, cfg, centering, true);
}

OrderSelection select_order_star(const AutocovTable& table, const Kernel& kernel, const PenaltyConfig& cfg) {
    const std::size_t pbar = resolve_pbar(cfg, table.n, true);
    return penalized(table, kernel, cfg, centering_table(kernel, table.n, pbar), true);
}

ElSelection el_select(const AutocovTable& table, std::size_t J, std::size_t n) {
    if (J < 1 || J > table.tau_maxlag() || J > n - 1) {
        throw std::invalid_argument("el_select: J = " + std::to_string(J) + " outside [1, tau lags]");
    }
    const double nd = static_cast<double>(n);
    std::vector<double> ratio(J + 1, 0.0);
    double max_abs = 0.0;
    for (std::size_t j = 1; j <= J; ++j) {
        if (table.tau_degenerate[j]) {
            throw DegenerateError("selection", "standardization degenerate at lag " + std::to_string(j));
        }
        ratio[j] = table.rhat[j] * table.rhat[j] / table.tausq[j];
        max_abs = std::max(max_abs, std::sqrt(ratio[j]));
    }
    ElSelection out;
    out.max_abs_ratio = std::sqrt(nd) * max_abs;
    out.branch = out.max_abs_ratio <= std::sqrt(2.4 * std::log(nd)) ? ElPenalty::LogN : ElPenalty::Two;
    const double g = out.branch == ElPenalty::LogN ? std::log(nd) : 2.0;

    out.order.variant = SelectionVariant::EL;
    out.order.objective.resize(J);
    CompensatedSum bp;
    for (std::size_t p = 1; p <= J; ++p) {
        bp += nd * ratio[p];
        out.order.objective[p - 1] = bp.value() - g * static_cast<double>(p);
    }
    out.order.p_hat = smallest_argmax(out.order.objective);
    return out;
}

ImseBandwidth imse_bandwidth(const AutocovTable& table, std::size_t n) {
    ImseBandwidth bw;
    const double nd = static_cast<double>(n);
    bw.pilot = std::pow(4.0 * nd / 100.0, 4.0 / 25.0);

    // Symmetric sums over j = -(n-1)..(n-1); k(j/pilot) vanishes for |j| >= pilot.
    CompensatedSum num, den;
    if (!table.has_tau(0) || table.tau_degenerate[0]) {
        throw DegenerateError("selection", "fourth-moment standardization degenerate at lag 0");
    }
    den += table.rhat[0] * table.rhat[0] / table.tausq[0];
    for (std::size_t j = 1; j < n; ++j) {
        const double w = parzen(static_cast<double>(j) / bw.pilot);
        if (w == 0.0) break;
        if (!table.has_tau(j) || table.tau_degenerate[j]) {
            throw DegenerateError("selection", "standardization degenerate at lag " + std::to_string(j));
        }
        const double ratio = table.rhat[j] * table.rhat[j] / table.tausq[j];
        const double j4 = std::pow(static_cast<double>(j), 4);
        num += 2.0 * w * j4 * ratio;
        den += 2.0 * w * ratio;
    }
    if (!(den.value() > 0.0)) throw DegenerateError("selection", "plug-in bandwidth denominator is zero");
    bw.c_tilde = 144.0 * num.value() / (0.539285 * den.value());
    bw.p_real = std::max(1.0, std::pow(bw.c_tilde, 0.2)) * std::pow(nd, 0.2);
    bw.p_imse = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(bw.p_real)));
    return bw;
}

}  // namespace wntest
