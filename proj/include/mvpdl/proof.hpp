#ifndef MVPDL_PROOF_HPP
#define MVPDL_PROOF_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mvpdl/syntax.hpp"
#include "mvpdl/truth.hpp"

namespace mvpdl {

/// Axiom schema with schematic variables p, q and schematic programs a, b.
/// Templates mentioning the exponent n are built per resolution.
struct AxiomSchema {
  std::string id;
  std::set<std::string> formula_slots;
  std::set<std::string> program_slots;
  Formula (*build)(Resolution);

  Formula template_for(Resolution n) const { return build(n); }
};

/// K, box-oplus, box-odot, union, seq, test, star-fix, star-trans, induction.
const std::vector<AxiomSchema>& axiom_schemas();
/// Throws Error for an unknown id.
const AxiomSchema& axiom_schema(const std::string& id);

/// Throws Error unless the substitutions bind exactly the schema's slots.
Formula instantiate_axiom(const AxiomSchema& schema, Resolution n, const FormulaSubstitution& fsub,
                          const ProgramSubstitution& psub);

struct Premise {};
struct AxiomInstance {
  std::string schema;
  FormulaSubstitution fsub;
  ProgramSubstitution psub;
};
/// Instance of a propositional Ł_n tautology, checked after replacing each
/// maximal boxed subformula by a fresh variable.
struct LukTautology {};
/// Line `major` must read (line minor) -> (this line). Indices are 0-based.
struct ModusPonens {
  std::size_t minor;
  std::size_t major;
};
struct Necessitation {
  std::size_t line;
  Program program;
};
struct UniformSubstitution {
  std::size_t line;
  FormulaSubstitution fsub;
  ProgramSubstitution psub;
};
/// phi / phi^k. Admissible in the calculus, not derivable: a derivation
/// using it shows admissibility of its conclusion only.
struct PowerRule {
  std::size_t line;
  int exponent;
};

using Justification = std::variant<Premise, AxiomInstance, LukTautology, ModusPonens,
                                   Necessitation, UniformSubstitution, PowerRule>;

struct ProofLine {
  Formula formula;
  Justification why;
};

struct Derivation {
  Resolution resolution;
  std::vector<ProofLine> lines;

  std::size_t premise_count() const;
  /// True when no line is a premise and no admissible rule is used.
  bool is_theorem_derivation() const;
};

struct Violation {
  std::size_t line;  // 0-based
  std::string reason;
};

/// nullopt when line i is correctly justified by earlier lines.
std::optional<std::string> check_line(const Derivation& d, std::size_t i);
/// First failing line, if any. The empty derivation checks.
std::optional<Violation> check_derivation(const Derivation& d);

/// Derives phi -> [alpha*]phi from the premise (phi -> [alpha]phi)^n in ten
/// lines: necessitation, two propositional tautologies, the induction
/// axiom, and three modus ponens steps.
Derivation derive_loop_invariance(const Formula& phi, const Program& alpha, Resolution n);
/// Same from the premise phi -> [alpha]phi, via one PowerRule line.
Derivation derive_loop_invariance_sharp(const Formula& phi, const Program& alpha, Resolution n);

// Derivation files, one step per line (indices 1-based, `#` comments):
//   <index>. <formula> ; premise
//   <index>. <formula> ; axiom(<id>; p:=<formula>; a:=<program>)
//   <index>. <formula> ; luk
//   <index>. <formula> ; mp(<i>,<j>)
//   <index>. <formula> ; nec(<i>,[<program>])
//   <index>. <formula> ; sub(<i>; p:=<formula>; a:=<program>)
//   <index>. <formula> ; pow(<i>,<k>)
// In sub, a key naming an atomic program (and no variable) of line i binds
// a program. A first line `n = <int>` sets the resolution; otherwise the
// caller's default applies.
Derivation parse_derivation(const std::string& text, std::optional<Resolution> default_n = {});
Derivation read_derivation_file(const std::string& path, std::optional<Resolution> default_n = {});
std::string format_derivation(const Derivation& d);

}  // namespace mvpdl

#endif  // MVPDL_PROOF_HPP
