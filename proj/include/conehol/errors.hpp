#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conehol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text; carries the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

/// Function argument outside its real domain (log of a non-positive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class OutsideDomain : public Error {
 public:
  using Error::Error;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace conehol
