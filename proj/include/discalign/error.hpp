#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace discalign {

// Base of every error the library throws on bad input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed bytes: JSON that does not parse, unbalanced .dis parentheses.
// `line`/`column` are 1-based; 0 means unknown. `offset` is a byte offset.
class SyntaxError : public DataError {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column,
              std::size_t offset = 0)
      : DataError(what), line_(line), column_(column), offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::size_t offset_;
};

// Well-formed input that violates a data invariant.
class SemanticError : public DataError {
 public:
  using DataError::DataError;
};

// Statistical routine called on an input it is not defined for.
class StatsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace discalign
