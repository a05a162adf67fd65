#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Process exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

/// Manifest or input-file validation failure.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical invariant (unitarity, normalization) was violated.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem read/write failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qwalk
