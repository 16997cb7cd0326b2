#pragma once

#include <stdexcept>
#include <string>

namespace treecdf {

// Malformed input data: unreadable CSV cells, constant columns, points
// outside the expected domain.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or incompatible model files, and model/data mismatches.
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace treecdf
