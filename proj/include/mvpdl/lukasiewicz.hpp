#ifndef MVPDL_LUKASIEWICZ_HPP
#define MVPDL_LUKASIEWICZ_HPP

#include <map>
#include <optional>
#include <string>

#include "mvpdl/syntax.hpp"
#include "mvpdl/truth.hpp"

namespace mvpdl {

/// Valuation of propositional variables, all on one grid Ł_n.
class Assignment {
 public:
  explicit Assignment(Resolution r) : resolution_(r) {}

  Resolution resolution() const { return resolution_; }
  void set(const std::string& name, TruthValue v);
  std::optional<TruthValue> find(const std::string& name) const;
  const std::map<std::string, int>& numerators() const { return values_; }

 private:
  Resolution resolution_;
  std::map<std::string, int> values_;
};

/// Value of a box-free formula. Throws UnboundVariable when the assignment
/// misses a variable of f, and Error when f contains a modality.
TruthValue eval_propositional(const Formula& f, const Assignment& a);

/// Exhaustive truth table over Ł_n. Costs (n+1)^(number of variables) evaluations.
bool is_tautology_prop(const Formula& f, Resolution n);

/// First assignment (in odometer order over sorted variable names) where f
/// is below 1, if any.
std::optional<Assignment> find_counter_assignment(const Formula& f, Resolution n);

/// The single variable of threshold and indicator formulas.
inline constexpr const char* kUnaryVariable = "p";

/// Threshold formula over `p`: 1 when p >= i/n, 0 otherwise.
/// Built from iterated p (+) p and p (.) p for 1 <= i <= n; the formula found
/// first for a resolution is reused for every later call. i = 0 yields the
/// constant p (+) ~p, i = n+1 yields its negation.
Formula synth_tau(int i, Resolution n);

/// Indicator of the single value i/n, 0 <= i <= n: tau_i & ~tau_{i+1}.
Formula synth_indicator(int i, Resolution n);

/// Substitutes `arg` for the variable of a unary formula.
Formula apply_unary(const Formula& unary, const Formula& arg);

}  // namespace mvpdl

#endif  // MVPDL_LUKASIEWICZ_HPP
