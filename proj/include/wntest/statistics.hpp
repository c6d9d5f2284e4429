#pragma once

#include <cstddef>
#include <vector>

#include "wntest/covariance.hpp"
#include "wntest/kernels.hpp"

namespace wntest {

/// Centering and scaling of (S_p - S_1) / R_0^2 at order p.
struct Centering {
    double e = 0.0;        // E(p) = sum (1-j/n) K^2(j/p)
    double e_delta = 0.0;  // sum (1-j/n) (K^2(j/p) - K^2(j))
    double v_delta = 0.0;  // (2 sum (1-j/n)^2 (K^2(j/p) - K^2(j))^2)^{1/2}
};

struct StatTrace {
    std::size_t p = 0;
    double s = 0.0;
    double s_star = 0.0;
    Centering centering;
};

/// S_p = n sum_{j=1}^{n-1} K^2(j/p) R_j^2. The kernel support truncates the
/// sum at j = p. Requires 1 <= p <= n-1 and table.maxlag >= min(p, n-1).
double s_stat(const AutocovTable& table, const Kernel& kernel, std::size_t p);

/// S*_p = n sum K^2(j/p) R_j^2 / tau_j^2. Throws DegenerateError naming the
/// first lag with positive weight whose tau_j^2 is degenerate.
double s_star_stat(const AutocovTable& table, const Kernel& kernel, std::size_t p);

Centering centering(const Kernel& kernel, std::size_t n, std::size_t p);

StatTrace trace(const AutocovTable& table, const Kernel& kernel, std::size_t p);

/// E(p) and V_Delta(p) for p = 1..pbar, computed once per (kernel, n) and
/// shared read-only across replications. Index 0 is unused.
struct CenteringTable {
    std::size_t n = 0;
    std::vector<double> e;
    std::vector<double> e_delta;
    std::vector<double> v_delta;

    std::size_t pbar() const noexcept { return e.empty() ? 0 : e.size() - 1; }
};

CenteringTable centering_table(const Kernel& kernel, std::size_t n, std::size_t pbar);

/// Values of S_p (standardized = false) or S*_p for every p = 1..pbar.
/// Index 0 is unused.
std::vector<double> s_profile(const AutocovTable& table, const Kernel& kernel, std::size_t pbar,
                              bool standardized);

}  // namespace wntest
