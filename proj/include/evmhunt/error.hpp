#pragma once

#include <stdexcept>
#include <string>

namespace evmhunt {

// Raised for malformed or inconsistent input data (bad hex, missing files,
// shape mismatches). The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace evmhunt
