#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace scirel {

// All failures surface as one of these; error_class() is the stable
// machine-readable tag the CLI prints on exit.
class Error : public std::runtime_error {
 public:
  Error(std::string error_class, const std::string& message)
      : std::runtime_error(message), class_(std::move(error_class)) {}
  const std::string& error_class() const { return class_; }

 private:
  std::string class_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line = 0, int column = 0)
      : Error("parse-error", location_prefix(line, column) + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string location_prefix(int line, int column) {
    if (line <= 0) return "";
    return "line " + std::to_string(line) + ", col " + std::to_string(column) +
           ": ";
  }
  int line_;
  int column_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error("validation-error", message) {}
};

class UnsupportedStructureError : public Error {
 public:
  explicit UnsupportedStructureError(const std::string& message)
      : Error("unsupported-structure", message) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& message)
      : Error("alignment-error", message) {}
};

class TreeValidationError : public Error {
 public:
  explicit TreeValidationError(const std::string& message)
      : Error("tree-validation", message) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& message)
      : Error("format-error", message) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message)
      : Error("shape-error", message) {}
};

class PairingError : public Error {
 public:
  explicit PairingError(const std::string& message)
      : Error("pairing-error", message) {}
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& message)
      : Error("lookup-error", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error("config-error", message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message)
      : Error("numeric-error", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io-error", message) {}
};

}  // namespace scirel
