#pragma once

#include <stdexcept>
#include <string>

namespace lrmf {

/// Base for all library errors. `error_class()` is a stable machine-readable
/// tag used by the CLI to pick exit codes and error lines.
class Error : public std::runtime_error {
 public:
  Error(std::string cls, const std::string& what)
      : std::runtime_error(what), cls_(std::move(cls)) {}
  const std::string& error_class() const { return cls_; }

 private:
  std::string cls_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error("invalid_argument", what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error("dimension_mismatch", what) {}
};

class EmptyWindow : public Error {
 public:
  explicit EmptyWindow(const std::string& what) : Error("empty_window", what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error("numerical", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config_invalid", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

}  // namespace lrmf
