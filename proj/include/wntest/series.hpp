#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wntest {

/// A finite real-valued sample u_1..u_n. No demeaning is ever applied: the
/// tested process is assumed to be centered.
class Series {
public:
    Series() = default;
    /// Throws DataError if any entry is not finite.
    explicit Series(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    Series scaled(double c) const;

private:
    std::vector<double> values_;
};

/// Single-column CSV with an optional non-numeric header line.
Series read_series_csv(const std::filesystem::path& path);
Series parse_series_csv(const std::string& text, const std::string& source = "<input>");

}  // namespace wntest
