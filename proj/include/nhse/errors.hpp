#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nhse {

/// Raised when a tridiagonal matrix has sub_i * sup_i <= 0 at some index.
class NotSymmetrizable : public std::invalid_argument {
public:
    NotSymmetrizable(std::size_t index, double product)
        : std::invalid_argument("matrix is not symmetrizable: sub*sup = " +
                                std::to_string(product) + " at index " +
                                std::to_string(index)),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Inverse iteration failed to reach the residual target.
class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few samples survived the floor in a log-linear fit.
class DegenerateFit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace nhse
