#ifndef MVPDL_KRIPKE_HPP
#define MVPDL_KRIPKE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvpdl/syntax.hpp"
#include "mvpdl/truth.hpp"

namespace mvpdl {

/// Crisp binary relation on worlds 0..size-1, stored as bit rows.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t size);
  static Relation identity(std::size_t size);

  std::size_t size() const { return size_; }
  bool contains(std::size_t u, std::size_t v) const {
    return (bits_[u * words_ + v / 64] >> (v % 64)) & 1U;
  }
  void insert(std::size_t u, std::size_t v) { bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64); }
  void erase(std::size_t u, std::size_t v) { bits_[u * words_ + v / 64] &= ~(std::uint64_t{1} << (v % 64)); }
  bool empty() const;
  std::size_t pair_count() const;

  /// Bit row of successors of u; words() entries.
  const std::uint64_t* row(std::size_t u) const { return bits_.data() + u * words_; }
  std::size_t words() const { return words_; }
  std::vector<std::size_t> successors(std::size_t u) const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  /// {(u,w) | u R v and v S w}
  Relation compose(const Relation& s) const;
  Relation unite(const Relation& s) const;
  Relation reflexive_transitive_closure() const;
  bool subset_of(const Relation& s) const;

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.size_ == b.size_ && a.bits_ == b.bits_;
  }

 private:
  std::uint64_t* mutable_row(std::size_t u) { return bits_.data() + u * words_; }

  std::size_t size_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Finite Ł_n-valued Kripke model with crisp atomic relations. Worlds are
/// opaque names addressed by their declaration index.
class KripkeModel {
 public:
  KripkeModel(Resolution resolution, std::vector<std::string> worlds);

  Resolution resolution() const { return resolution_; }
  std::size_t world_count() const { return worlds_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  /// Throws UnknownWorld.
  std::size_t world_index(const std::string& name) const;
  std::optional<std::size_t> find_world(const std::string& name) const;

  /// Declares an atomic program with an empty relation (no-op if present).
  void declare_program(const std::string& atom);
  void add_edge(const std::string& atom, std::size_t u, std::size_t v);
  void add_edge(const std::string& atom, const std::string& u, const std::string& v);
  void set_relation(const std::string& atom, Relation r);

  void set_value(const std::string& variable, std::size_t world, TruthValue v);
  void set_valuation(const std::string& variable, std::vector<int> numerators);

  /// Relation of a declared atom, or nullptr.
  const Relation* find_relation(const std::string& atom) const;
  const std::map<std::string, Relation>& relations() const { return relations_; }
  /// Numerators per world; -1 marks a world not yet assigned.
  const std::map<std::string, std::vector<int>>& valuation() const { return valuation_; }

  TruthValue atomic_value(const std::string& variable, std::size_t world) const;

  /// Throws Error if some declared variable misses a world.
  void validate() const;

 private:
  Resolution resolution_;
  std::vector<std::string> worlds_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, Relation> relations_;
  std::map<std::string, std::vector<int>> valuation_;
};

/// Model data in the index space of an EvaluationPlan: atoms and variables
/// appear in the plan's order. Cheap to mutate in bulk enumerations.
struct RawModel {
  std::size_t worlds = 0;
  int steps = 1;
  std::vector<Relation> atoms;
  std::vector<std::vector<int>> variables;
};

/// A set of formulas and programs compiled once into a shared instruction
/// list, then evaluated over any number of models.
class EvaluationPlan {
 public:
  explicit EvaluationPlan(const std::vector<Formula>& formulas,
                          const std::vector<Program>& programs = {});

  const std::vector<std::string>& atoms() const { return atom_names_; }
  const std::vector<std::string>& variables() const { return variable_names_; }
  std::size_t formula_count() const { return formula_roots_.size(); }

  /// Reusable buffers for run().
  class Workspace {
   private:
    friend class EvaluationPlan;
    std::size_t worlds = 0;
    std::vector<int> values;
    std::vector<Relation> relations;
  };

  /// Undeclared atoms bind to the empty relation; undeclared variables throw
  /// UnboundVariable.
  RawModel bind(const KripkeModel& m) const;
  void run(const RawModel& m, Workspace& ws) const;

  /// Numerators of the i-th formula at every world, valid until the next run.
  std::span<const int> values(const Workspace& ws, std::size_t i) const;
  const Relation& relation(const Workspace& ws, std::size_t i) const;

 private:
  enum class Op : std::uint8_t { Var, Zero, Not, Implies, Box, Atom, Test, Seq, Union, Star };
  struct Step {
    Op op;
    std::size_t out;
    std::size_t a = 0;
    std::size_t b = 0;
  };

  std::size_t compile(const Formula& f);
  std::size_t compile(const Program& p);

  std::vector<Step> steps_;
  std::size_t formula_slots_ = 0;
  std::size_t program_slots_ = 0;
  std::vector<std::size_t> formula_roots_;
  std::vector<std::size_t> program_roots_;
  std::vector<std::string> atom_names_;
  std::vector<std::string> variable_names_;
  std::unordered_map<Formula, std::size_t, FormulaHash> formula_slot_of_;
  std::unordered_map<Program, std::size_t, ProgramHash> program_slot_of_;
  std::map<std::string, std::size_t> atom_index_;
  std::map<std::string, std::size_t> variable_index_;
};

Relation relation_of(const KripkeModel& m, const Program& alpha);
TruthValue value(const KripkeModel& m, std::size_t world, const Formula& f);
TruthValue value(const KripkeModel& m, const std::string& world, const Formula& f);
/// Numerators of f at every world.
std::vector<int> values(const KripkeModel& m, const Formula& f);
bool satisfies(const KripkeModel& m, std::size_t world, const Formula& f);
bool globally_true(const KripkeModel& m, const Formula& f);
/// First world (declaration order) where f is below 1.
std::optional<std::size_t> find_falsifying_world(const KripkeModel& m, const Formula& f);

/// Deterministic for a fixed seed on every platform. Worlds are named w0, w1, ...
KripkeModel random_model(std::uint64_t seed, Resolution resolution, std::size_t world_count,
                         const std::vector<std::string>& atoms,
                         const std::vector<std::string>& variables, double edge_density);

// Line-oriented model files:
//   n = 4
//   worlds: u v
//   rel a: u->v, v->v
//   val p: u=3/4 v=1/4
// `#` starts a comment. Every val line lists every world.
KripkeModel parse_model(const std::string& text);
KripkeModel read_model_file(const std::string& path);
std::string format_model(const KripkeModel& m);

}  // namespace mvpdl

#endif  // MVPDL_KRIPKE_HPP
