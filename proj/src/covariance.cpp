#include "wntest/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wntest/errors.hpp"
#include "wntest/summation.hpp"

namespace wntest {

namespace {

constexpr double kTauFloor = 1e-12;    // relative to the fourth-moment term
constexpr double kGammaFloor = 1e-20;  // relative to the mean squared lag-1 product

double lag_product_sum(std::span<const double> u, std::size_t j) {
    const std::size_t n = u.size();
    double s = 0.0;
    for (std::size_t t = 0; t + j < n; ++t) s += u[t] * u[t + j];
    return s;
}

Degeneracy clamp_tau(double fourth, double centered) {
    const double value = fourth - centered;
    if (!(value > kTauFloor * fourth)) return {0.0, true};
    return {value, false};
}

// Square of the lag-1 long-run variance partial sums given products x_1..x_m
// and their centering constant.
double partial_sum_energy(std::span<const double> x, double centre) {
    CompensatedSum partial;
    CompensatedSum energy;
    for (double xi : x) {
        partial += xi - centre;
        const double s = partial.value();
        energy += s * s;
    }
    return energy.value();
}

}  // namespace

AutocovTable autocov(const Series& u, std::size_t maxlag) {
    const std::size_t n = u.size();
    if (n == 0) throw DataError("covariance", "empty series");
    if (maxlag >= n) {
        throw DataError("covariance", "lag exceeds sample (maxlag " + std::to_string(maxlag) +
                                          " >= n " + std::to_string(n) + ")");
    }
    AutocovTable table;
    table.n = n;
    table.maxlag = maxlag;
    table.rhat.resize(maxlag + 1);
    const auto v = u.values();
    for (std::size_t j = 0; j <= maxlag; ++j) table.rhat[j] = lag_product_sum(v, j) / static_cast<double>(n);
    return table;
}

AutocovTable autocov_table(const Series& u, std::size_t maxlag, std::size_t tau_maxlag) {
    AutocovTable table = autocov(u, maxlag);
    const std::size_t n = u.size();
    if (tau_maxlag == 0) return table;
    if (n < 3 || tau_maxlag > n - 2) {
        throw DataError("covariance", "standardization lag " + std::to_string(tau_maxlag) +
                                          " exceeds n-2");
    }
    if (tau_maxlag > maxlag) throw std::invalid_argument("autocov_table: tau_maxlag > maxlag");

    std::vector<double> sq(n);
    const auto v = u.values();
    for (std::size_t t = 0; t < n; ++t) sq[t] = v[t] * v[t];

    table.tausq.resize(tau_maxlag + 1);
    table.tau_degenerate.assign(tau_maxlag + 1, false);
    const double r0 = table.rhat[0];
    const double fourth0 = lag_product_sum(sq, 0) / static_cast<double>(n);
    const auto d0 = clamp_tau(fourth0, r0 * r0);
    table.tausq[0] = d0.value;
    table.tau_degenerate[0] = d0.degenerate;
    for (std::size_t j = 1; j <= tau_maxlag; ++j) {
        const double m = static_cast<double>(n - j);
        const double fourth = lag_product_sum(sq, j) / m;
        const double scaled = static_cast<double>(n) / m * table.rhat[j];
        const auto d = clamp_tau(fourth, scaled * scaled);
        table.tausq[j] = d.value;
        table.tau_degenerate[j] = d.degenerate;
    }
    return table;
}

AutocovTable full_autocov_table(const Series& u) {
    const std::size_t n = u.size();
    if (n < 4) throw DataError("covariance", "series too short (n = " + std::to_string(n) + ", need >= 4)");
    return autocov_table(u, n - 1, n - 2);
}

Degeneracy tau_sq(const Series& u, std::size_t j) {
    const std::size_t n = u.size();
    if (j < 1 || n < 3 || j > n - 2) {
        throw DataError("covariance", "tau_sq lag " + std::to_string(j) + " outside [1, n-2]");
    }
    const auto v = u.values();
    std::vector<double> sq(n);
    for (std::size_t t = 0; t < n; ++t) sq[t] = v[t] * v[t];
    const double m = static_cast<double>(n - j);
    const double rj = lag_product_sum(v, j) / static_cast<double>(n);
    const double scaled = static_cast<double>(n) / m * rj;
    return clamp_tau(lag_product_sum(sq, j) / m, scaled * scaled);
}

Degeneracy lobato_gamma1(const Series& u) {
    const std::size_t n = u.size();
    if (n < 3) throw DataError("covariance", "lobato_gamma1 needs n >= 3");
    const auto v = u.values();
    std::vector<double> x(n - 1);
    CompensatedSum total;
    CompensatedSum squares;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        x[t] = v[t] * v[t + 1];
        total += x[t];
        squares += x[t] * x[t];
    }
    const double m = static_cast<double>(n - 1);
    const double gamma = partial_sum_energy(x, total.value() / m) / (m * m);
    if (!(gamma > kGammaFloor * squares.value() / m)) return {0.0, true};
    return {gamma, false};
}

Degeneracy kuanlee_gamma1(const Series& data, const ResidualModel& model) {
    if (model.kind == ResidualKind::Identity) return lobato_gamma1(data);

    // AR(1): u_j(theta) = y_{j+1} - theta y_j, so that
    //   sum_{j<=t} u_j u_{j+1} = A_t - theta B_t + theta^2 C_t
    // with running sums A = y_{j+1} y_{j+2}, B = y_j y_{j+2} + y_{j+1}^2, C = y_j y_{j+1}.
    const auto y = data.values();
    const std::size_t N = y.size();
    if (N < 5) throw DataError("covariance", "kuanlee_gamma1 needs at least 5 raw observations");
    if (model.recursive.size() != N) throw std::invalid_argument("kuanlee_gamma1: model was fitted on other data");
    const std::size_t m = N - 1;  // residual count

    const auto u = ar1_residuals(y, model.theta);
    const double r1 = lag_product_sum(u, 1) / static_cast<double>(m);
    const double centre = static_cast<double>(m) / static_cast<double>(m - 1) * r1;

    CompensatedSum a, b, c, energy, squares;
    for (std::size_t t = 1; t <= m - 1; ++t) {
        // residual-time t adds the pair (u_t, u_{t+1}); 0-based raw indices t-1, t, t+1
        const double y0 = y[t - 1], y1 = y[t], y2 = y[t + 1];
        a += y1 * y2;
        b += y0 * y2 + y1 * y1;
        c += y0 * y1;
        const double prod = u[t - 1] * u[t];
        squares += prod * prod;
        const auto& theta_t = model.recursive[t];  // estimate from raw y_1..y_{t+1}
        if (!theta_t) continue;
        const double th = *theta_t;
        const double s = a.value() - th * b.value() + th * th * c.value() - static_cast<double>(t) * centre;
        energy += s * s;
    }
    const double denom = static_cast<double>(m - 1);
    const double gamma = energy.value() / (denom * denom);
    if (!(gamma > kGammaFloor * squares.value() / denom)) return {0.0, true};
    return {gamma, false};
}

}  // namespace wntest
