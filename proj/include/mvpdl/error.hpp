#ifndef MVPDL_ERROR_HPP
#define MVPDL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mvpdl {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two truth values (or a value and a model) live on different grids Ł_m, Ł_n.
class ResolutionMismatch : public Error {
 public:
  ResolutionMismatch(int expected, int found);
  int expected() const { return expected_; }
  int found() const { return found_; }

 private:
  int expected_;
  int found_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnknownWorld : public Error {
 public:
  explicit UnknownWorld(const std::string& name);
};

/// Parse failure in formula or program text. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::vector<std::string> expected,
              std::string found);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
  std::string found_;
};

/// Malformed model or derivation file.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A search exceeded its configured budget. Never a verdict.
class ResourceLimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace mvpdl

#endif  // MVPDL_ERROR_HPP
