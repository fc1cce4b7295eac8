#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace srheat {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is a byte offset into the input.
class ParseError : public Error {
public:
  ParseError(std::size_t offset, std::vector<std::string> expected,
             const std::string &message);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string> &expected() const { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownIdentifierError : public Error {
public:
  UnknownIdentifierError(std::size_t offset, std::string name);

  std::size_t offset() const { return offset_; }
  const std::string &name() const { return name_; }

private:
  std::size_t offset_;
  std::string name_;
};

/// Evaluation outside the regular domain (division by zero, sqrt/log of an
/// out-of-range argument, non-finite intermediate).
class DomainError : public Error {
public:
  using Error::Error;
};

/// The frame fails the contact check at a queried point.
class DegenerateFrameError : public Error {
public:
  DegenerateFrameError(const std::string &message, double condition_number);

  double condition_number() const { return condition_number_; }

private:
  double condition_number_;
};

/// Structure data that is numerically inconsistent (e.g. -det C clearly
/// negative when computing chi).
class InconsistentFrameError : public Error {
public:
  using Error::Error;
};

/// A quadrature or Monte Carlo routine could not reach the requested accuracy.
class ToleranceError : public Error {
public:
  ToleranceError(const std::string &message, double achieved_error);

  double achieved_error() const { return achieved_error_; }

private:
  double achieved_error_;
};

/// Invalid arguments or configuration supplied by a caller.
class UsageError : public Error {
public:
  using Error::Error;
};

} // namespace srheat
