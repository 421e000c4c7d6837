#ifndef MVPDL_SATISFIABILITY_HPP
#define MVPDL_SATISFIABILITY_HPP

#include <cstddef>
#include <cstdint>
#include <variant>

#include "mvpdl/kripke.hpp"
#include "mvpdl/syntax.hpp"

namespace mvpdl {

struct Satisfiable {
  KripkeModel witness;
  std::size_t world;
};

/// No model with at most bound_used worlds. complete means bound_used has
/// reached (n+1)^|FL|, so the formula has no model at all.
struct UnsatisfiableWithinBound {
  std::uint64_t bound_used;
  bool complete;
};

struct SatStatistics {
  std::uint64_t atoms_generated = 0;
  std::uint64_t atoms_surviving = 0;
  std::uint64_t candidates_enumerated = 0;
  std::uint64_t nodes_explored = 0;
  std::uint64_t elimination_rounds = 0;
  std::size_t closure_size = 0;
  double wall_time_ms = 0;
  /// A model exists, but none within max_worlds was found.
  bool satisfiable_beyond_bound = false;
  /// The oracle cross-check ran and overrode the search verdict.
  bool oracle_disagreement = false;
};

struct SatResult {
  std::variant<Satisfiable, UnsatisfiableWithinBound> verdict;
  SatStatistics stats;

  bool satisfiable() const { return std::holds_alternative<Satisfiable>(verdict); }
  const Satisfiable& model() const { return std::get<Satisfiable>(verdict); }
  const UnsatisfiableWithinBound& unsat() const { return std::get<UnsatisfiableWithinBound>(verdict); }
};

struct SatOptions {
  std::size_t max_worlds = 8;
  /// Cap on candidate valuations plus search nodes; exceeding it throws
  /// ResourceLimitExceeded.
  std::uint64_t state_budget = 1'000'000;
  /// Re-decide with enumerate_oracle for every size up to max_worlds (only
  /// when max_worlds <= 3) and prefer the oracle on disagreement.
  bool cross_check_with_oracle = false;
};

/// Decides whether phi takes value 1 at some world of some model over Ł_n.
/// Candidate worlds are maps FL(phi) -> Ł_n consistent with the connective
/// and program equations; candidates whose box values lack a witnessing
/// successor are eliminated until stable. The survivors form a model, so the
/// answer is exact; a witness of at most max_worlds worlds is then searched
/// for by iterative deepening.
SatResult decide_sat(const Formula& phi, Resolution n, const SatOptions& options);
SatResult decide_sat(const Formula& phi, Resolution n, std::size_t max_worlds);

/// phi is valid iff ~(phi^n) is unsatisfiable. A Satisfiable verdict carries
/// a refuting model and a world where phi is below 1.
SatResult decide_valid(const Formula& phi, Resolution n, const SatOptions& options);
SatResult decide_valid(const Formula& phi, Resolution n, std::size_t max_worlds);

/// Exhaustive search over every model with exactly exact_worlds worlds over
/// the atomic programs and variables of phi. Throws Error above guard.
SatResult enumerate_oracle(const Formula& phi, Resolution n, std::size_t exact_worlds,
                           std::size_t guard = 3);

}  // namespace mvpdl

#endif  // MVPDL_SATISFIABILITY_HPP
