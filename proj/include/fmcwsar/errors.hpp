#pragma once

#include <stdexcept>
#include <string>

namespace fmcwsar {

/// Invalid user configuration (bad parameter, missing key, violated precondition).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent data (file format, dimension mismatch).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fmcwsar
