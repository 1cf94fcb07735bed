#pragma once

#include <stdexcept>
#include <string>

namespace lowlux {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File decode/encode and filesystem failures.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

// Rejected parameter values (out-of-domain lambda, bad gamma sequence, ...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Two images that must share dimensions do not.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

}  // namespace lowlux
