#include "wntest/residuals.hpp"

#include <string>

#include "wntest/errors.hpp"

namespace wntest {

std::vector<std::optional<double>> fit_ar1_recursive(const Series& y) {
    const auto v = y.values();
    std::vector<std::optional<double>> out(v.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 1; t < v.size(); ++t) {
        num += v[t - 1] * v[t];
        den += v[t - 1] * v[t - 1];
        if (den > 0.0) out[t] = num / den;
    }
    return out;
}

ResidualModel fit_ar1(const Series& y) {
    if (y.size() < 2) throw DataError("residuals", "AR(1) fit needs at least 2 observations");
    ResidualModel model;
    model.kind = ResidualKind::AR1_OLS;
    model.recursive = fit_ar1_recursive(y);
    if (!model.recursive.back()) {
        throw DegenerateError("residuals", "AR(1) fit: zero regressor sum of squares");
    }
    model.theta = *model.recursive.back();
    return model;
}

std::vector<double> ar1_residuals(std::span<const double> y, double theta) {
    std::vector<double> u;
    if (y.size() < 2) return u;
    u.reserve(y.size() - 1);
    for (std::size_t t = 1; t < y.size(); ++t) u.push_back(y[t] - theta * y[t - 1]);
    return u;
}

Series residuals(const Series& y, const ResidualModel& model) {
    switch (model.kind) {
        case ResidualKind::Identity: return y;
        case ResidualKind::AR1_OLS: return Series(ar1_residuals(y.values(), model.theta));
    }
    return y;
}

}  // namespace wntest
