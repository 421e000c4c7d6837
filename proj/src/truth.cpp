#include "mvpdl/truth.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "mvpdl/error.hpp"

namespace mvpdl {

Resolution::Resolution(int steps) : steps_(steps) {
  if (steps < 1) throw Error("resolution must be at least 1, got " + std::to_string(steps));
}

TruthValue::TruthValue(int numerator, Resolution resolution)
    : numerator_(numerator), resolution_(resolution) {
  if (numerator < 0 || numerator > resolution.steps()) {
    throw Error("truth value " + std::to_string(numerator) + "/" +
                std::to_string(resolution.steps()) + " lies outside [0,1]");
  }
}

std::string TruthValue::to_string() const {
  return std::to_string(numerator_) + "/" + std::to_string(resolution_.steps());
}

namespace {

int common_steps(const TruthValue& a, const TruthValue& b) {
  if (!(a.resolution() == b.resolution())) {
    throw ResolutionMismatch(a.resolution().steps(), b.resolution().steps());
  }
  return a.resolution().steps();
}

}  // namespace

bool operator==(const TruthValue& a, const TruthValue& b) {
  common_steps(a, b);
  return a.numerator_ == b.numerator_;
}

bool operator<(const TruthValue& a, const TruthValue& b) {
  common_steps(a, b);
  return a.numerator_ < b.numerator_;
}

std::ostream& operator<<(std::ostream& os, const TruthValue& v) { return os << v.to_string(); }

TruthValue parse_truth_value(const std::string& text, Resolution expected) {
  auto slash = text.find('/');
  if (slash == std::string::npos) throw Error("expected a fraction i/n, got '" + text + "'");
  int num = 0;
  int den = 0;
  auto parse_int = [&](std::string_view part, int& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc() && ptr == part.data() + part.size() && !part.empty();
  };
  std::string_view sv(text);
  if (!parse_int(sv.substr(0, slash), num) || !parse_int(sv.substr(slash + 1), den)) {
    throw Error("malformed fraction '" + text + "'");
  }
  if (den != expected.steps()) throw ResolutionMismatch(expected.steps(), den);
  return TruthValue(num, expected);
}

TruthValue neg(TruthValue x) {
  int n = x.resolution().steps();
  return TruthValue(luk::neg(x.numerator(), n), x.resolution());
}

TruthValue implies(TruthValue x, TruthValue y) {
  int n = common_steps(x, y);
  return TruthValue(luk::implies(x.numerator(), y.numerator(), n), x.resolution());
}

TruthValue oplus(TruthValue x, TruthValue y) {
  int n = common_steps(x, y);
  return TruthValue(luk::oplus(x.numerator(), y.numerator(), n), x.resolution());
}

TruthValue odot(TruthValue x, TruthValue y) {
  int n = common_steps(x, y);
  return TruthValue(luk::odot(x.numerator(), y.numerator(), n), x.resolution());
}

TruthValue join(TruthValue x, TruthValue y) {
  common_steps(x, y);
  return TruthValue(std::max(x.numerator(), y.numerator()), x.resolution());
}

TruthValue meet(TruthValue x, TruthValue y) {
  common_steps(x, y);
  return TruthValue(std::min(x.numerator(), y.numerator()), x.resolution());
}

TruthValue equiv(TruthValue x, TruthValue y) {
  int n = common_steps(x, y);
  return TruthValue(n - std::abs(x.numerator() - y.numerator()), x.resolution());
}

}  // namespace mvpdl
