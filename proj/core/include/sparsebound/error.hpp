#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sparsebound {

// Base of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive enumeration requested over a dimension larger than the cap.
class DimensionTooLarge : public Error {
 public:
  DimensionTooLarge(std::size_t dimension, std::size_t cap)
      : Error("enumeration over dimension " + std::to_string(dimension) +
              " exceeds cap " + std::to_string(cap)),
        dimension_(dimension),
        cap_(cap) {}

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t dimension_;
  std::size_t cap_;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class ParameterOutOfRange : public Error {
 public:
  using Error::Error;
};

class AllZeroVariances : public Error {
 public:
  AllZeroVariances() : Error("every variance is zero; diagonal weights are undefined") {}
};

class UnreachableTarget : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedField : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsebound
