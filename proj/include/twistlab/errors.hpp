// Error taxonomy shared by all modules.
//
// ConfigError    invalid space / couple / centralizer parameters
// InputError     structurally invalid call arguments (empty vector, overlap, ...)
// SizeError      a hard size cap was exceeded (Tsirelson support, tuple depth)
// NumericalError an iteration failed to make sense of the data (bracket expansion)
#pragma once

#include <stdexcept>
#include <string>

namespace twistlab {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct SizeError : std::runtime_error {
    explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace twistlab
