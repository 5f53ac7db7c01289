#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gbtwin {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
  public:
    using Error::Error;
};

class EmptyInput : public Error {
  public:
    using Error::Error;
};

class DegenerateGranulation : public Error {
  public:
    using Error::Error;
};

class DegeneratePair : public Error {
  public:
    using Error::Error;
};

class TooFewClasses : public Error {
  public:
    using Error::Error;
};

class ClassTooSmall : public Error {
  public:
    using Error::Error;
};

class UndefinedAuc : public Error {
  public:
    using Error::Error;
};

class DegenerateVariance : public Error {
  public:
    using Error::Error;
};

class AllZeroDifferences : public Error {
  public:
    using Error::Error;
};

class MissingLabelColumn : public Error {
  public:
    using Error::Error;
};

/// Raised by the CSV reader; row and column are 1-based file coordinates.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"),
          row_(row),
          column_(column) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

  private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace gbtwin
