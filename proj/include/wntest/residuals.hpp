#pragma once

#include <optional>
#include <vector>

#include "wntest/series.hpp"

namespace wntest {

enum class ResidualKind { Identity, AR1_OLS };

/// Parametric model whose residuals are tested.
///
/// For AR1_OLS on data y_1..y_N the full-sample estimate is
///   theta = sum_{t<N} y_t y_{t+1} / sum_{t<N} y_t^2
/// and the residuals are u_t = y_{t+1} - theta y_t, t = 1..N-1.
/// recursive[t-1] holds the same estimate computed on y_1..y_t; entries whose
/// denominator vanishes are empty.
struct ResidualModel {
    ResidualKind kind = ResidualKind::Identity;
    double theta = 0.0;
    std::vector<std::optional<double>> recursive;

    static ResidualModel identity() { return {}; }
};

/// Throws DegenerateError when sum y_t^2 over the regressor range is zero.
ResidualModel fit_ar1(const Series& y);

/// theta_t for t = 1..N by running sums; element t-1 is theta_t.
/// theta_1 is always empty (no lagged pair yet).
std::vector<std::optional<double>> fit_ar1_recursive(const Series& y);

/// Residual series implied by `model` on raw data `y`. Identity returns y.
Series residuals(const Series& y, const ResidualModel& model);

/// AR(1) residuals y_{t+1} - theta y_t, t = 1..N-1, for an arbitrary theta.
std::vector<double> ar1_residuals(std::span<const double> y, double theta);

}  // namespace wntest
