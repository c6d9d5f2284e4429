#include "wntest/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wntest {

double parzen(double t) noexcept {
    const double a = std::fabs(t);
    if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
    if (a <= 1.0) {
        const double b = 1.0 - a;
        return 2.0 * b * b * b;
    }
    return 0.0;
}

namespace {

constexpr double kParzenHalf = 0.25;  // k(1/2)

double interpolate(const std::vector<std::pair<double, double>>& grid, double x) {
    auto hi = std::lower_bound(grid.begin(), grid.end(), x,
                               [](const auto& node, double v) { return node.first < v; });
    if (hi == grid.begin()) return hi->second;
    if (hi == grid.end()) return grid.back().second;
    auto lo = std::prev(hi);
    const double w = (x - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

}  // namespace

Kernel Kernel::uniform() { return Kernel(KernelKind::Uniform); }

Kernel Kernel::modified_parzen() { return Kernel(KernelKind::ModifiedParzen); }

Kernel Kernel::tabulated(std::vector<std::pair<double, double>> grid) {
    Kernel k = tabulated_unchecked(std::move(grid));
    const auto report = validate(k);
    if (!report.ok()) {
        std::string msg = "tabulated kernel fails shape conditions:";
        for (const auto& v : report.violations) msg += " [" + v + "]";
        throw std::invalid_argument(msg);
    }
    return k;
}

Kernel Kernel::tabulated_unchecked(std::vector<std::pair<double, double>> grid) {
    if (grid.size() < 2) throw std::invalid_argument("tabulated kernel needs at least two grid points");
    for (const auto& [x, v] : grid) {
        if (!std::isfinite(x) || !std::isfinite(v)) throw std::invalid_argument("tabulated kernel: non-finite entry");
    }
    std::sort(grid.begin(), grid.end());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i].first == grid[i - 1].first) throw std::invalid_argument("tabulated kernel: duplicate x");
    }
    if (grid.front().first != 0.0 || grid.back().first != 1.0) {
        throw std::invalid_argument("tabulated kernel: grid must include x=0 and x=1 as its end points");
    }
    Kernel k(KernelKind::Tabulated);
    k.grid_ = std::move(grid);
    return k;
}

Kernel Kernel::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open kernel file " + path.string());
    std::vector<std::pair<double, double>> grid;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x = 0.0, v = 0.0;
        if (!(ss >> x >> v)) {
            if (first) {
                first = false;
                continue;
            }
            throw std::invalid_argument("kernel file " + path.string() + ": malformed line '" + line + "'");
        }
        first = false;
        grid.emplace_back(x, v);
    }
    return tabulated(std::move(grid));
}

Kernel Kernel::from_name(std::string_view name) {
    if (name == "uniform" || name == "bp") return uniform();
    if (name == "parzen" || name == "par") return modified_parzen();
    throw std::invalid_argument("unknown kernel '" + std::string(name) + "' (expected uniform|parzen)");
}

std::string Kernel::name() const {
    switch (kind_) {
        case KernelKind::Uniform: return "uniform";
        case KernelKind::ModifiedParzen: return "parzen";
        case KernelKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

double Kernel::operator()(double x) const noexcept {
    if (x < 0.0) x = -x;
    if (x > 1.0) return 0.0;
    switch (kind_) {
        case KernelKind::Uniform: return 1.0;
        case KernelKind::ModifiedParzen: return parzen(0.5 * x) / kParzenHalf;
        case KernelKind::Tabulated: return interpolate(grid_, x);
    }
    return 0.0;
}

KernelValidation validate(const Kernel& kernel) {
    constexpr double kStep = 1e-3;
    constexpr double kSlack = 1e-12;
    constexpr double kMaxJump = 1e-2;  // per grid step inside the support
    constexpr int kSteps = 1000;

    KernelValidation report;
    const double k0 = kernel(0.0);
    if (std::fabs(k0 - 1.0) > kSlack) {
        std::ostringstream msg;
        msg << "K(0) != 1 (K(0) = " << k0 << ")";
        if (kernel.kind() == KernelKind::ModifiedParzen) {
            report.warnings.push_back(msg.str());
        } else {
            report.violations.push_back(msg.str());
        }
    }

    double prev = k0;
    double min_half = k0;
    double max_jump = 0.0;
    bool monotone = true;
    for (int i = 1; i <= kSteps; ++i) {
        const double x = i * kStep;
        const double v = kernel(x);
        if (v > prev + kSlack) monotone = false;
        max_jump = std::max(max_jump, std::fabs(v - prev));
        if (x <= 0.5 + 1e-15) min_half = std::min(min_half, v);
        prev = v;
    }
    if (!monotone) report.violations.push_back("K not nonincreasing on [0,1]");
    if (!(min_half > 0.0)) report.violations.push_back("K not bounded away from 0 on [0,1/2]");
    for (double x : {1.0 + 1e-9, 1.0 + kStep, 1.5, 10.0}) {
        if (kernel(x) != 0.0) {
            report.violations.push_back("K nonzero outside [0,1]");
            break;
        }
    }
    if (max_jump > kMaxJump) {
        std::ostringstream msg;
        msg << "K not smooth on the grid (max step change " << max_jump << ")";
        report.violations.push_back(msg.str());
    }
    return report;
}

}  // namespace wntest
