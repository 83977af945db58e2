#pragma once

#include <stdexcept>
#include <string>

namespace gridnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (CSV rows, references, lifetimes).
class ParseError : public Error
{
public:
  ParseError(const std::string& what, std::size_t row = 0)
    : Error(row ? what + " (row " + std::to_string(row) + ")" : what)
    , row_(row)
  {
  }

  /// 1-based data row, 0 when the error is not tied to a row.
  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

/// A metric or model is undefined for the given input.
class DomainError : public Error
{
public:
  using Error::Error;
};

} // namespace gridnet
