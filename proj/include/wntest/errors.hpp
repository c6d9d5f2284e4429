#pragma once

#include <stdexcept>
#include <string>

namespace wntest {

// Data-dependent failure: the input violates a module contract (too short,
// zero variance, lag beyond the sample, ...). Parameter mistakes made by the
// caller are reported with std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
    DataError(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// A quantity that must be strictly positive (a variance, a standardization,
// a long-run variance) came out zero.
class DegenerateError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace wntest
