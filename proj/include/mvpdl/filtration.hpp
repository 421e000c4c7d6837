#ifndef MVPDL_FILTRATION_HPP
#define MVPDL_FILTRATION_HPP

#include <cstddef>
#include <vector>

#include "mvpdl/kripke.hpp"
#include "mvpdl/syntax.hpp"

namespace mvpdl {

/// Worlds grouped by their values on FL(seed). Classes are sorted by value
/// tuple (closure order), worlds inside a class by index.
struct Partition {
  ClosureSet closure;
  std::vector<std::vector<std::size_t>> classes;
  /// Value tuple over closure.members() per class.
  std::vector<std::vector<int>> keys;
  /// World index to class index.
  std::vector<std::size_t> class_of;
};

Partition equivalence_classes(const KripkeModel& m, const Formula& seed);

struct FiltrationResult {
  /// Worlds c0, c1, ... in partition order. Every atomic program and variable
  /// of the input model is carried over: ([u],[v]) is an edge when some
  /// members are related, and a variable takes the join over the class.
  KripkeModel quotient;
  Partition partition;
  Formula seed;
};

FiltrationResult filter_model(const KripkeModel& m, const Formula& seed);

/// Formula true exactly at the worlds of `worlds` (a union of classes of the
/// partition induced by seed). An empty set yields 0. Throws Error when the
/// set splits a class.
Formula characteristic_formula(const KripkeModel& m, const Formula& seed,
                               const std::vector<std::size_t>& worlds);

}  // namespace mvpdl

#endif  // MVPDL_FILTRATION_HPP
