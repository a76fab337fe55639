#pragma once

#include <stdexcept>
#include <string>

namespace qlg {

// Bad user input: malformed config, invalid parameter ranges, unusable layouts.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / format trouble: unreadable files, bad magic, truncated payloads.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Violated numerical invariant: norm drift, non-finite values, failed fits.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qlg
