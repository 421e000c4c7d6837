#ifndef MVPDL_SYNTAX_HPP
#define MVPDL_SYNTAX_HPP

// Formulas and programs of many-valued PDL.
//
//   formula  f ::= p | 0 | ~f | f -> f | [prog] f
//   program  a ::= atom | f? | a;a | a+a | a*
//
// Nodes are immutable and shared; every connective other than the five core
// ones is sugar that expands eagerly at construction time.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace mvpdl {

enum class FormulaKind : std::uint8_t { Var, Zero, Not, Implies, Box };
enum class ProgramKind : std::uint8_t { Atomic, Test, Seq, Union, Star };

namespace detail {
struct FormulaNode;
struct ProgramNode;
struct NodeAccess;
}  // namespace detail

class Program;

class Formula {
 public:
  FormulaKind kind() const;
  /// Variable name; only for Var.
  const std::string& name() const;
  /// Operand of Not, antecedent of Implies, body of Box.
  Formula first() const;
  /// Consequent of Implies.
  Formula second() const;
  /// Program of Box.
  Program program() const;

  std::size_t hash() const;
  /// Nesting depth: atoms are 0, every formula or program constructor adds 1.
  int depth() const;

  const void* identity() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  /// Total structural order, used for canonical sets.
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  friend struct detail::NodeAccess;
  explicit Formula(std::shared_ptr<const detail::FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::FormulaNode> node_;
};

class Program {
 public:
  ProgramKind kind() const;
  /// Atomic program name; only for Atomic.
  const std::string& name() const;
  /// Formula of a Test.
  Formula test() const;
  /// Operand of Star, left of Seq/Union.
  Program first() const;
  /// Right of Seq/Union.
  Program second() const;

  std::size_t hash() const;
  int depth() const;

  const void* identity() const { return node_.get(); }

  friend bool operator==(const Program& a, const Program& b);
  friend bool operator!=(const Program& a, const Program& b) { return !(a == b); }
  friend bool operator<(const Program& a, const Program& b);

 private:
  friend struct detail::NodeAccess;
  explicit Program(std::shared_ptr<const detail::ProgramNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::ProgramNode> node_;
};

// Core constructors.
Formula var(std::string name);
Formula zero();
Formula neg(Formula f);
Formula implies(Formula a, Formula b);
Formula box(Program p, Formula f);

Program atomic(std::string name);
Program test(Formula f);
Program seq(Program a, Program b);
Program choice(Program a, Program b);
Program star(Program a);

// Sugar, expanded on construction:
//   1 = ~0               a | b = (a -> b) -> b       a & b = ~(~a | ~b)
//   a (+) b = ~a -> b    a (.) b = ~(~a (+) ~b)      a <-> b = (a -> b) (.) (b -> a)
//   <p>a = ~[p]~a        k.a = a (+) ... (+) a       a^k = a (.) ... (.) a
// with 0.a = 0, a^0 = 1, and left-nested repetition.
Formula one();
Formula lor(Formula a, Formula b);
Formula land(Formula a, Formula b);
Formula oplus(Formula a, Formula b);
Formula odot(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula diamond(Program p, Formula f);
Formula times(int k, Formula f);
Formula power(Formula f, int k);

/// Meet / join over a list; the empty meet is 1 and the empty join is 0.
Formula land_all(const std::vector<Formula>& fs);
Formula lor_all(const std::vector<Formula>& fs);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
struct ProgramHash {
  std::size_t operator()(const Program& p) const { return p.hash(); }
};

using FormulaSubstitution = std::map<std::string, Formula>;
using ProgramSubstitution = std::map<std::string, Program>;

/// Simultaneous replacement of variables (and atomic programs), reaching
/// inside test programs. Shared subterms stay shared in the result.
Formula substitute(const Formula& f, const FormulaSubstitution& fsub,
                   const ProgramSubstitution& psub = {});
Program substitute(const Program& p, const FormulaSubstitution& fsub,
                   const ProgramSubstitution& psub = {});

std::set<std::string> variables(const Formula& f);
std::set<std::string> atomic_programs(const Formula& f);
std::set<std::string> atomic_programs(const Program& p);
/// True when f contains no box (and therefore no program).
bool is_propositional(const Formula& f);

/// Fischer-Ladner closure of a seed set: the least set containing the seed
/// and closed under decomposition of ~, ->, [a], [a;b], [a+b], [a*], [f?].
/// Members keep the order in which the worklist discovered them.
class ClosureSet {
 public:
  ClosureSet() = default;

  const std::vector<Formula>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(const Formula& f) const { return index_.count(f) != 0; }
  /// Position of f in members(); f must be a member.
  std::size_t index_of(const Formula& f) const { return index_.at(f); }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  friend ClosureSet fl_closure(const std::vector<Formula>& seed);
  bool insert(const Formula& f);

  std::vector<Formula> members_;
  std::unordered_map<Formula, std::size_t, FormulaHash> index_;
};

ClosureSet fl_closure(const std::vector<Formula>& seed);
inline ClosureSet fl_closure(const Formula& f) { return fl_closure(std::vector<Formula>{f}); }

}  // namespace mvpdl

#endif  // MVPDL_SYNTAX_HPP
