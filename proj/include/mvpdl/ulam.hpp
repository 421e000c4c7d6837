#ifndef MVPDL_ULAM_HPP
#define MVPDL_ULAM_HPP

// Ulam's searching game with lies as a many-valued Kripke model.
//
// The search space is M = {1, ..., m}; at resolution n the responder may lie
// n-1 times. A state of knowledge assigns each candidate a value in Ł_n
// (1 = no answer against it, 0 = rejected). Questions are subsets of M,
// written `Q{1,3}` in formulas; `~Q{1,3}` names the complement.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvpdl/kripke.hpp"
#include "mvpdl/syntax.hpp"
#include "mvpdl/truth.hpp"

namespace mvpdl::ulam {

class KnowledgeState {
 public:
  KnowledgeState(Resolution n, std::vector<int> numerators);
  /// Every candidate at value 1.
  static KnowledgeState initial(Resolution n, std::size_t m);

  Resolution resolution() const { return resolution_; }
  std::size_t size() const { return numerators_.size(); }
  /// Value of element `element` (1-based).
  TruthValue at(std::size_t element) const;
  const std::vector<int>& numerators() const { return numerators_; }
  /// World name, e.g. f2_1_1.
  std::string name() const;

  friend bool operator==(const KnowledgeState& a, const KnowledgeState& b) {
    return a.resolution_ == b.resolution_ && a.numerators_ == b.numerators_;
  }
  friend bool operator<(const KnowledgeState& a, const KnowledgeState& b) {
    return a.numerators_ < b.numerators_;
  }

 private:
  Resolution resolution_;
  std::vector<int> numerators_;
};

/// A subset of M as a bit mask: bit e-1 stands for element e.
struct Question {
  std::uint64_t members = 0;

  bool contains(std::size_t element) const { return (members >> (element - 1)) & 1U; }
  Question complement(std::size_t m) const;
  /// `Q{1,3}`; the empty question is `Q{}`.
  std::string name() const;

  friend bool operator==(Question a, Question b) { return a.members == b.members; }
};

/// Accepts `Q{...}` and `~Q{...}` over elements 1..m. Throws Error otherwise.
Question parse_question(const std::string& text, std::size_t m);

struct GameConfig {
  std::size_t m = 3;
  Resolution n{2};
  std::optional<KnowledgeState> initial;
  /// Question rounds explored from the initial state.
  std::size_t depth = 4;
  /// Use all of Ł_n^M as worlds instead of the reachable states.
  bool full_space = false;
  std::size_t state_cap = 200'000;

  KnowledgeState start() const;
};

/// f_Q: 1 on Q, (n-1)/n elsewhere.
KnowledgeState positive_answer(Question q, std::size_t m, Resolution n);
/// Pointwise f ⊙ f_Q, or f ⊙ f_{M∖Q} for a negative answer.
KnowledgeState update_state(const KnowledgeState& f, Question q, bool positive);

struct GameModel {
  KripkeModel model;
  std::vector<KnowledgeState> states;
  /// Fewest question rounds from the start; SIZE_MAX when unreachable.
  std::vector<std::size_t> distance;
  /// Every answer to every question from every world stays inside the model.
  bool closed = false;
};

/// Worlds are the states within cfg.depth rounds of the start (or all of
/// Ł_n^M), each subset Q of M is an atomic program `Q{...}` with both answers
/// as edges, and p_e takes the value f(e). Throws ResourceLimitExceeded past
/// cfg.state_cap worlds and Error for m outside 1..16.
GameModel build_game_model(const GameConfig& cfg);

/// The only element with a positive value, if there is exactly one.
std::optional<std::size_t> is_final(const KnowledgeState& f);

struct SpecResult {
  bool holds = true;
  std::optional<KnowledgeState> counterexample;
  std::size_t states_checked = 0;
};

/// Evaluates phi on every state within cfg.depth rounds of the start. Boxes
/// are read in the closure of those states under all answers, so the depth
/// bound never truncates a successor set. Question names are resolved as in
/// parse_question; an unknown one throws Error.
SpecResult check_spec(const GameConfig& cfg, const Formula& phi);

/// The threshold formula on p_e for i/n, taken as 1 when i <= 0.
Formula threshold_on(int i, std::size_t element, Resolution n);

struct Trajectory {
  std::vector<KnowledgeState> states;  // initial state first
  std::optional<std::size_t> final_element;
};

/// Applies the questions with answers '+' / '-' in order.
Trajectory run(const GameConfig& cfg, const std::vector<Question>& questions, const std::string& answers);

}  // namespace mvpdl::ulam

#endif  // MVPDL_ULAM_HPP
