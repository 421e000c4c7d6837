#include "mvpdl/error.hpp"

#include <sstream>

namespace mvpdl {

ResolutionMismatch::ResolutionMismatch(int expected, int found)
    : Error("resolution mismatch: expected n=" + std::to_string(expected) + ", found n=" +
            std::to_string(found)),
      expected_(expected),
      found_(found) {}

UnboundVariable::UnboundVariable(const std::string& name)
    : Error("unbound variable '" + name + "'"), name_(name) {}

UnknownWorld::UnknownWorld(const std::string& name) : Error("unknown world '" + name + "'") {}

namespace {

std::string describe_syntax_error(std::size_t line, std::size_t column,
                                  const std::vector<std::string>& expected,
                                  const std::string& found) {
  std::ostringstream os;
  os << "syntax error at " << line << ":" << column << ": expected ";
  if (expected.size() > 1) os << "one of ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) os << ", ";
    os << expected[i];
  }
  os << ", found " << found;
  return os.str();
}

}  // namespace

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::vector<std::string> expected,
                         std::string found)
    : Error(describe_syntax_error(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

FormatError::FormatError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace mvpdl
