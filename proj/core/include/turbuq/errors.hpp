#pragma once

#include <stdexcept>
#include <string>

namespace turbuq {

/// Raised for malformed or inconsistent input data (schema violations,
/// unparsable cells, mismatched point ids, unphysical stresses).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a numerical procedure fails (non-convergence, non-finite
/// intermediate results).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace turbuq
