#pragma once

#include <cstddef>
#include <vector>

#include "wntest/residuals.hpp"
#include "wntest/series.hpp"

namespace wntest {

/// A variance-type quantity and whether it was numerically zero.
struct Degeneracy {
    double value = 0.0;
    bool degenerate = false;
};

/// Sample autocovariances R_0..R_J (divisor n at every lag) and, optionally,
/// standardizations tau_j^2 for j = 1..tau_maxlag.
///
/// tausq[0] holds the j -> 0 extension (1/n) sum u_t^4 - R_0^2, used only by
/// the plug-in bandwidth. tau_degenerate[j] marks entries clamped to zero.
struct AutocovTable {
    std::size_t n = 0;
    std::size_t maxlag = 0;
    std::vector<double> rhat;
    std::vector<double> tausq;
    std::vector<bool> tau_degenerate;

    bool has_tau(std::size_t j) const noexcept { return j < tausq.size(); }
    std::size_t tau_maxlag() const noexcept { return tausq.empty() ? 0 : tausq.size() - 1; }
};

/// R_j = (1/n) sum_{t=1}^{n-j} u_t u_{t+j}, j = 0..maxlag.
/// Throws DataError if maxlag >= n.
AutocovTable autocov(const Series& u, std::size_t maxlag);

/// autocov plus tau_j^2 for j = 0..tau_maxlag (tau_maxlag <= n-2).
AutocovTable autocov_table(const Series& u, std::size_t maxlag, std::size_t tau_maxlag);

/// Full table used by the tests: maxlag n-1, tau up to n-2.
AutocovTable full_autocov_table(const Series& u);

/// tau_j^2 = (1/(n-j)) sum u_t^2 u_{t+j}^2 - ((n/(n-j)) R_j)^2, 1 <= j <= n-2.
/// Values at or below a 1e-12 relative floor are returned as 0 and flagged.
Degeneracy tau_sq(const Series& u, std::size_t j);

/// Self-normalizer of the lag-1 autocovariance for directly observed data:
///   (n-1)^{-2} sum_{t=1}^{n-1} (sum_{j<=t} (u_j u_{j+1} - mean))^2.
/// O(n). Throws DataError for n < 3.
Degeneracy lobato_gamma1(const Series& u);

/// Recursive self-normalizer for estimated residuals. `data` is the raw
/// series the model was fitted on. For residual time t = 1..m-1 (m residuals)
/// the residuals are rebuilt with the estimate that uses the first t+1 raw
/// observations, and the partial sums of u_j u_{j+1} - (m/(m-1)) R_1 are
/// accumulated; R_1 is the full-sample residual autocovariance. Terms whose
/// recursive estimate is undefined are skipped; the divisor stays (m-1)^2.
/// With the identity model this reduces exactly to lobato_gamma1.
Degeneracy kuanlee_gamma1(const Series& data, const ResidualModel& model);

}  // namespace wntest
