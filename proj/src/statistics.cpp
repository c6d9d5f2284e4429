#include "wntest/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wntest/errors.hpp"
#include "wntest/summation.hpp"

namespace wntest {

namespace {

void check_order(std::size_t n, std::size_t p) {
    if (n < 2 || p < 1 || p > n - 1) {
        throw std::invalid_argument("order p = " + std::to_string(p) + " outside [1, n-1] for n = " +
                                    std::to_string(n));
    }
}

double weight_sq(const Kernel& kernel, std::size_t j, std::size_t p) {
    return kernel.squared(static_cast<double>(j) / static_cast<double>(p));
}

// n R_j^2 (raw) or n R_j^2 / tau_j^2 (standardized) for j = 1..last.
std::vector<double> lag_terms(const AutocovTable& table, std::size_t last, bool standardized,
                              const Kernel* kernel, std::size_t p) {
    if (table.maxlag < last) throw DataError("statistics", "autocovariance table too short for order");
    std::vector<double> terms(last + 1, 0.0);
    const double n = static_cast<double>(table.n);
    for (std::size_t j = 1; j <= last; ++j) {
        const double r = table.rhat[j];
        if (!standardized) {
            terms[j] = n * r * r;
            continue;
        }
        // lags with zero weight never need tau_j
        if (kernel != nullptr && weight_sq(*kernel, j, p) == 0.0) continue;
        if (!table.has_tau(j) || table.tau_degenerate[j]) {
            throw DegenerateError("statistics", "standardization degenerate at lag " + std::to_string(j));
        }
        terms[j] = n * r * r / table.tausq[j];
    }
    return terms;
}

double weighted_sum(const std::vector<double>& terms, const Kernel& kernel, std::size_t p) {
    CompensatedSum s;
    for (std::size_t j = 1; j < terms.size(); ++j) s += weight_sq(kernel, j, p) * terms[j];
    return s.value();
}

}  // namespace

double s_stat(const AutocovTable& table, const Kernel& kernel, std::size_t p) {
    check_order(table.n, p);
    const std::size_t last = std::min(p, table.n - 1);
    return weighted_sum(lag_terms(table, last, false, nullptr, p), kernel, p);
}

double s_star_stat(const AutocovTable& table, const Kernel& kernel, std::size_t p) {
    check_order(table.n, p);
    const std::size_t last = std::min(p, table.n - 1);
    return weighted_sum(lag_terms(table, last, true, &kernel, p), kernel, p);
}

Centering centering(const Kernel& kernel, std::size_t n, std::size_t p) {
    check_order(n, p);
    const double nd = static_cast<double>(n);
    const double k1 = kernel.squared(1.0);
    CompensatedSum e, ed, vd;
    const std::size_t last = std::min(p, n - 1);
    for (std::size_t j = 1; j <= last; ++j) {
        const double w = 1.0 - static_cast<double>(j) / nd;
        const double kp = weight_sq(kernel, j, p);
        const double diff = kp - (j == 1 ? k1 : 0.0);  // K(j) = 0 for j >= 2
        e += w * kp;
        ed += w * diff;
        vd += w * w * diff * diff;
    }
    return {e.value(), ed.value(), std::sqrt(2.0 * vd.value())};
}

StatTrace trace(const AutocovTable& table, const Kernel& kernel, std::size_t p) {
    StatTrace t;
    t.p = p;
    t.s = s_stat(table, kernel, p);
    t.s_star = s_star_stat(table, kernel, p);
    t.centering = centering(kernel, table.n, p);
    return t;
}

CenteringTable centering_table(const Kernel& kernel, std::size_t n, std::size_t pbar) {
    check_order(n, pbar);
    CenteringTable out;
    out.n = n;
    out.e.assign(pbar + 1, 0.0);
    out.e_delta.assign(pbar + 1, 0.0);
    out.v_delta.assign(pbar + 1, 0.0);
    if (kernel.kind() == KernelKind::Uniform) {
        // K^2(j/p) = 1 for j <= p: running sums over p
        const double nd = static_cast<double>(n);
        CompensatedSum e, vd;
        for (std::size_t p = 1; p <= pbar; ++p) {
            const double w = 1.0 - static_cast<double>(p) / nd;
            e += w;
            if (p >= 2) vd += w * w;
            out.e[p] = e.value();
            out.e_delta[p] = e.value() - (1.0 - 1.0 / nd);
            out.v_delta[p] = std::sqrt(2.0 * vd.value());
        }
        out.e_delta[1] = 0.0;
        return out;
    }
    for (std::size_t p = 1; p <= pbar; ++p) {
        const auto c = centering(kernel, n, p);
        out.e[p] = c.e;
        out.e_delta[p] = c.e_delta;
        out.v_delta[p] = c.v_delta;
    }
    return out;
}

std::vector<double> s_profile(const AutocovTable& table, const Kernel& kernel, std::size_t pbar,
                              bool standardized) {
    check_order(table.n, pbar);
    std::vector<double> out(pbar + 1, 0.0);
    const auto terms = lag_terms(table, pbar, standardized, nullptr, pbar);
    if (kernel.kind() == KernelKind::Uniform) {
        CompensatedSum s;
        for (std::size_t p = 1; p <= pbar; ++p) {
            s += terms[p];
            out[p] = s.value();
        }
        return out;
    }
    for (std::size_t p = 1; p <= pbar; ++p) {
        CompensatedSum s;
        for (std::size_t j = 1; j <= p; ++j) s += weight_sq(kernel, j, p) * terms[j];
        out[p] = s.value();
    }
    return out;
}

}  // namespace wntest
