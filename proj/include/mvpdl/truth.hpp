#ifndef MVPDL_TRUTH_HPP
#define MVPDL_TRUTH_HPP

// Exact arithmetic on the finite Łukasiewicz chain Ł_n = {0, 1/n, ..., 1}.

#include <cstdint>
#include <ostream>
#include <string>

namespace mvpdl {

/// Number of steps n of the chain Ł_n (which has n+1 elements). Always n >= 1.
class Resolution {
 public:
  explicit Resolution(int steps);

  int steps() const { return steps_; }
  int value_count() const { return steps_ + 1; }

  friend bool operator==(Resolution a, Resolution b) { return a.steps_ == b.steps_; }

 private:
  int steps_;
};

/// The element numerator/n of Ł_n. Values of different resolutions never mix:
/// every binary operation and comparison throws ResolutionMismatch.
class TruthValue {
 public:
  TruthValue(int numerator, Resolution resolution);

  static TruthValue top(Resolution r) { return TruthValue(r.steps(), r); }
  static TruthValue bottom(Resolution r) { return TruthValue(0, r); }

  int numerator() const { return numerator_; }
  Resolution resolution() const { return resolution_; }
  bool is_top() const { return numerator_ == resolution_.steps(); }

  /// Always "i/n", never a decimal and never reduced.
  std::string to_string() const;

  friend bool operator==(const TruthValue& a, const TruthValue& b);
  friend bool operator<(const TruthValue& a, const TruthValue& b);
  friend bool operator<=(const TruthValue& a, const TruthValue& b) { return !(b < a); }
  friend bool operator>(const TruthValue& a, const TruthValue& b) { return b < a; }
  friend bool operator>=(const TruthValue& a, const TruthValue& b) { return !(a < b); }

 private:
  int numerator_;
  Resolution resolution_;
};

std::ostream& operator<<(std::ostream& os, const TruthValue& v);

/// Parses "i/n"; the denominator must equal the expected resolution.
TruthValue parse_truth_value(const std::string& text, Resolution expected);

TruthValue neg(TruthValue x);
TruthValue implies(TruthValue x, TruthValue y);
TruthValue oplus(TruthValue x, TruthValue y);
TruthValue odot(TruthValue x, TruthValue y);
TruthValue join(TruthValue x, TruthValue y);
TruthValue meet(TruthValue x, TruthValue y);
TruthValue equiv(TruthValue x, TruthValue y);

// Raw numerator kernels shared by every evaluator. Arguments are numerators
// on a common grid with n steps.
namespace luk {

inline int neg(int x, int n) { return n - x; }
inline int implies(int x, int y, int n) { return n - x + y < n ? n - x + y : n; }
inline int oplus(int x, int y, int n) { return x + y < n ? x + y : n; }
inline int odot(int x, int y, int n) { return x + y - n > 0 ? x + y - n : 0; }

}  // namespace luk

}  // namespace mvpdl

#endif  // MVPDL_TRUTH_HPP
