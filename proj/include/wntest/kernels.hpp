#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wntest {

enum class KernelKind { Uniform, ModifiedParzen, Tabulated };

/// Outcome of a kernel shape check. Violations make a kernel unusable;
/// warnings are accepted deviations (the modified Parzen kernel has K(0)=4).
struct KernelValidation {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const noexcept { return violations.empty(); }
};

/// Base Parzen lag window, support [-1, 1]:
///   1 - 6t^2 + 6|t|^3 for |t| <= 1/2, 2(1-|t|)^3 for 1/2 < |t| <= 1.
double parzen(double t) noexcept;

/// Lag-window kernel K on [0, 1], zero for x > 1.
///
/// Uniform gives the Box-Pierce weights. ModifiedParzen is
/// K(t) = k(t/2) / k(1/2) with k the base Parzen window, so that K(1) = 1
/// (k(1) itself vanishes). Tabulated kernels interpolate linearly between
/// grid points; the grid must start at 0 and end at 1.
///
/// Values are immutable; evaluation is pure.
class Kernel {
public:
    static Kernel uniform();
    static Kernel modified_parzen();
    /// Throws std::invalid_argument if the table is malformed or fails validate().
    static Kernel tabulated(std::vector<std::pair<double, double>> grid);
    /// Structural checks only (sorted, end points 0 and 1); the shape is not
    /// validated. Meant for producing validation reports.
    static Kernel tabulated_unchecked(std::vector<std::pair<double, double>> grid);
    /// Two-column CSV (x,value), optional header line.
    static Kernel from_csv(const std::filesystem::path& path);
    /// "uniform" | "parzen".
    static Kernel from_name(std::string_view name);

    KernelKind kind() const noexcept { return kind_; }
    std::string name() const;

    /// K(x) for x >= 0.
    double operator()(double x) const noexcept;
    double squared(double x) const noexcept {
        const double k = (*this)(x);
        return k * k;
    }

    const std::vector<std::pair<double, double>>& grid() const noexcept { return grid_; }

private:
    explicit Kernel(KernelKind kind) : kind_(kind) {}

    KernelKind kind_;
    std::vector<std::pair<double, double>> grid_;
};

/// Shape check on a grid with step 1e-3: K(0) = 1, nonincreasing on [0,1],
/// positive on [0,1/2], zero beyond 1. Continuity is approximated by a bound
/// on successive grid differences inside [0,1]. Never throws.
KernelValidation validate(const Kernel& kernel);

}  // namespace wntest
