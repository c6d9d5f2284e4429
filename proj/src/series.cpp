#include "wntest/series.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "wntest/errors.hpp"

namespace wntest {

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("series", "non-finite value at index " + std::to_string(i));
        }
    }
}

Series Series::scaled(double c) const {
    std::vector<double> v(values_);
    for (auto& x : v) x *= c;
    return Series(std::move(v));
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Series parse_series_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string cell = trim(line);
        if (cell.empty()) continue;
        if (cell.find(',') != std::string::npos) {
            throw DataError("series", source + ":" + std::to_string(lineno) + ": expected a single column");
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != cell.size()) {
            if (values.empty() && !header_seen) {
                header_seen = true;
                continue;
            }
            throw DataError("series", source + ":" + std::to_string(lineno) + ": not a number");
        }
        values.push_back(v);
    }
    return Series(std::move(values));
}

Series read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("series", "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_series_csv(buf.str(), path.string());
}

}  // namespace wntest
