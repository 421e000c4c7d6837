#include "mvpdl/proof.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mvpdl/error.hpp"
#include "mvpdl/lukasiewicz.hpp"
#include "mvpdl/text.hpp"

namespace mvpdl {

namespace {

Formula p() { return var("p"); }
Formula q() { return var("q"); }
Program a() { return atomic("a"); }
Program b() { return atomic("b"); }

Formula schema_k(Resolution) {
  return implies(box(a(), implies(p(), q())), implies(box(a(), p()), box(a(), q())));
}
Formula schema_box_oplus(Resolution) {
  return iff(box(a(), oplus(p(), p())), oplus(box(a(), p()), box(a(), p())));
}
Formula schema_box_odot(Resolution) {
  return iff(box(a(), odot(p(), p())), odot(box(a(), p()), box(a(), p())));
}
Formula schema_union(Resolution) {
  return iff(box(choice(a(), b()), p()), land(box(a(), p()), box(b(), p())));
}
Formula schema_seq(Resolution) { return iff(box(seq(a(), b()), p()), box(a(), box(b(), p()))); }
Formula schema_test(Resolution n) {
  return iff(box(test(q()), p()), lor(neg(power(q(), n.steps())), p()));
}
Formula schema_star_fix(Resolution) {
  return iff(box(star(a()), p()), land(p(), box(a(), box(star(a()), p()))));
}
Formula schema_star_trans(Resolution) {
  return implies(box(star(a()), p()), box(star(a()), box(star(a()), p())));
}
Formula schema_induction(Resolution n) {
  Formula step = power(implies(p(), box(a(), p())), n.steps());
  return implies(land(p(), box(star(a()), step)), box(star(a()), p()));
}

// Replaces each maximal boxed subformula by a fresh variable; equal boxes
// share one variable. The names cannot collide with parsed identifiers.
Formula abstract_modalities(const Formula& f, std::map<Formula, Formula>& boxes) {
  switch (f.kind()) {
    case FormulaKind::Var:
    case FormulaKind::Zero:
      return f;
    case FormulaKind::Not:
      return neg(abstract_modalities(f.first(), boxes));
    case FormulaKind::Implies:
      return implies(abstract_modalities(f.first(), boxes), abstract_modalities(f.second(), boxes));
    case FormulaKind::Box: {
      auto it = boxes.find(f);
      if (it == boxes.end()) {
        it = boxes.emplace(f, var("#" + std::to_string(boxes.size()))).first;
      }
      return it->second;
    }
  }
  return f;
}

constexpr double kTruthTableLimit = 2e7;

std::optional<std::string> check_reference(std::size_t ref, std::size_t i) {
  if (ref >= i) return "forward reference to line " + std::to_string(ref + 1);
  return std::nullopt;
}

}  // namespace

const std::vector<AxiomSchema>& axiom_schemas() {
  static const std::vector<AxiomSchema> schemas = {
      {"K", {"p", "q"}, {"a"}, schema_k},
      {"box-oplus", {"p"}, {"a"}, schema_box_oplus},
      {"box-odot", {"p"}, {"a"}, schema_box_odot},
      {"union", {"p"}, {"a", "b"}, schema_union},
      {"seq", {"p"}, {"a", "b"}, schema_seq},
      {"test", {"p", "q"}, {}, schema_test},
      {"star-fix", {"p"}, {"a"}, schema_star_fix},
      {"star-trans", {"p"}, {"a"}, schema_star_trans},
      {"induction", {"p"}, {"a"}, schema_induction},
  };
  return schemas;
}

const AxiomSchema& axiom_schema(const std::string& id) {
  for (const auto& s : axiom_schemas()) {
    if (s.id == id) return s;
  }
  throw Error("unknown axiom schema '" + id + "'");
}

Formula instantiate_axiom(const AxiomSchema& schema, Resolution n, const FormulaSubstitution& fsub,
                          const ProgramSubstitution& psub) {
  for (const auto& slot : schema.formula_slots) {
    if (!fsub.count(slot)) throw Error("incomplete substitution: no formula for " + slot);
  }
  for (const auto& slot : schema.program_slots) {
    if (!psub.count(slot)) throw Error("incomplete substitution: no program for " + slot);
  }
  for (const auto& [key, f] : fsub) {
    if (!schema.formula_slots.count(key)) {
      throw Error("axiom " + schema.id + " has no formula slot " + key);
    }
  }
  for (const auto& [key, prog] : psub) {
    if (!schema.program_slots.count(key)) {
      throw Error("axiom " + schema.id + " has no program slot " + key);
    }
  }
  return substitute(schema.template_for(n), fsub, psub);
}

std::size_t Derivation::premise_count() const {
  std::size_t count = 0;
  for (const auto& line : lines) count += std::holds_alternative<Premise>(line.why) ? 1 : 0;
  return count;
}

bool Derivation::is_theorem_derivation() const {
  for (const auto& line : lines) {
    if (std::holds_alternative<Premise>(line.why) || std::holds_alternative<PowerRule>(line.why)) {
      return false;
    }
  }
  return true;
}

namespace {

// True when line i rests on a premise, directly or through cited lines.
bool depends_on_premise(const Derivation& d, std::size_t i) {
  std::vector<char> dep(i + 1, 0);
  for (std::size_t k = 0; k <= i; ++k) {
    const auto& why = d.lines[k].why;
    auto cited = [&](std::size_t j) { return j < k && dep[j]; };
    if (std::holds_alternative<Premise>(why)) {
      dep[k] = 1;
    } else if (const auto* mp = std::get_if<ModusPonens>(&why)) {
      dep[k] = cited(mp->minor) || cited(mp->major);
    } else if (const auto* nec = std::get_if<Necessitation>(&why)) {
      dep[k] = cited(nec->line);
    } else if (const auto* sub = std::get_if<UniformSubstitution>(&why)) {
      dep[k] = cited(sub->line);
    } else if (const auto* pw = std::get_if<PowerRule>(&why)) {
      dep[k] = cited(pw->line);
    }
  }
  return dep[i] != 0;
}

}  // namespace

std::optional<std::string> check_line(const Derivation& d, std::size_t i) {
  if (i >= d.lines.size()) return "no line " + std::to_string(i + 1);
  const Formula& here = d.lines[i].formula;
  const auto& why = d.lines[i].why;

  if (std::holds_alternative<Premise>(why)) return std::nullopt;

  if (const auto* ax = std::get_if<AxiomInstance>(&why)) {
    try {
      Formula expected = instantiate_axiom(axiom_schema(ax->schema), d.resolution, ax->fsub, ax->psub);
      if (expected != here) return "not the stated instance of axiom " + ax->schema;
    } catch (const Error& e) {
      return e.what();
    }
    return std::nullopt;
  }

  if (std::holds_alternative<LukTautology>(why)) {
    std::map<Formula, Formula> boxes;
    Formula shape = abstract_modalities(here, boxes);
    double rows = std::pow(d.resolution.value_count(), static_cast<double>(variables(shape).size()));
    if (rows > kTruthTableLimit) return "too many propositional atoms for a truth table";
    if (!is_tautology_prop(shape, d.resolution)) return "not a Łukasiewicz tautology";
    return std::nullopt;
  }

  if (const auto* mp = std::get_if<ModusPonens>(&why)) {
    if (auto bad = check_reference(mp->minor, i)) return bad;
    if (auto bad = check_reference(mp->major, i)) return bad;
    const Formula& major = d.lines[mp->major].formula;
    if (major.kind() != FormulaKind::Implies) return "major premise shape";
    if (major.first() != d.lines[mp->minor].formula) return "minor premise mismatch";
    if (major.second() != here) return "conclusion mismatch";
    return std::nullopt;
  }

  if (const auto* nec = std::get_if<Necessitation>(&why)) {
    if (auto bad = check_reference(nec->line, i)) return bad;
    if (box(nec->program, d.lines[nec->line].formula) != here) return "conclusion mismatch";
    return std::nullopt;
  }

  if (const auto* sub = std::get_if<UniformSubstitution>(&why)) {
    if (auto bad = check_reference(sub->line, i)) return bad;
    if (depends_on_premise(d, sub->line)) return "substitution into a line resting on premises";
    if (substitute(d.lines[sub->line].formula, sub->fsub, sub->psub) != here) {
      return "conclusion mismatch";
    }
    return std::nullopt;
  }

  if (const auto* pw = std::get_if<PowerRule>(&why)) {
    if (auto bad = check_reference(pw->line, i)) return bad;
    if (pw->exponent < 1) return "exponent must be positive";
    if (power(d.lines[pw->line].formula, pw->exponent) != here) return "conclusion mismatch";
    return std::nullopt;
  }
  return "unknown justification";
}

std::optional<Violation> check_derivation(const Derivation& d) {
  for (std::size_t i = 0; i < d.lines.size(); ++i) {
    if (auto reason = check_line(d, i)) return Violation{i, *reason};
  }
  return std::nullopt;
}

namespace {

void append_loop_invariance(Derivation& d, std::size_t premise, const Formula& phi,
                            const Program& alpha) {
  const int n = d.resolution.steps();
  Program loop = star(alpha);
  Formula step = power(implies(phi, box(alpha, phi)), n);
  Formula boxed_step = box(loop, step);
  Formula joined = land(phi, boxed_step);
  Formula goal = box(loop, phi);
  Formula t = var("t");
  Formula pv = var("p");
  Formula qv = var("q");
  auto add = [&](Formula f, Justification why) {
    d.lines.push_back({std::move(f), std::move(why)});
    return d.lines.size() - 1;
  };

  std::size_t l_nec = add(boxed_step, Necessitation{premise, loop});
  std::size_t l_pair = add(implies(pv, implies(t, land(t, pv))), LukTautology{});
  std::size_t l_pair_inst = add(implies(boxed_step, implies(phi, joined)),
                                UniformSubstitution{l_pair, {{"p", boxed_step}, {"t", phi}}, {}});
  std::size_t l_into = add(implies(phi, joined), ModusPonens{l_nec, l_pair_inst});
  std::size_t l_ind = add(implies(joined, goal), AxiomInstance{"induction", {{"p", phi}}, {{"a", alpha}}});
  std::size_t l_trans =
      add(implies(implies(pv, qv), implies(implies(qv, t), implies(pv, t))), LukTautology{});
  Formula chain = implies(implies(phi, joined), implies(implies(joined, goal), implies(phi, goal)));
  std::size_t l_trans_inst =
      add(chain, UniformSubstitution{l_trans, {{"p", phi}, {"q", joined}, {"t", goal}}, {}});
  std::size_t l_mid = add(chain.second(), ModusPonens{l_into, l_trans_inst});
  add(implies(phi, goal), ModusPonens{l_ind, l_mid});
}

}  // namespace

Derivation derive_loop_invariance(const Formula& phi, const Program& alpha, Resolution n) {
  Derivation d{n, {}};
  d.lines.push_back({power(implies(phi, box(alpha, phi)), n.steps()), Premise{}});
  append_loop_invariance(d, 0, phi, alpha);
  return d;
}

Derivation derive_loop_invariance_sharp(const Formula& phi, const Program& alpha, Resolution n) {
  Derivation d{n, {}};
  Formula hyp = implies(phi, box(alpha, phi));
  d.lines.push_back({hyp, Premise{}});
  d.lines.push_back({power(hyp, n.steps()), PowerRule{0, n.steps()}});
  append_loop_invariance(d, 1, phi, alpha);
  return d;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

class JustificationReader {
 public:
  JustificationReader(std::string_view text, std::size_t line_no) : text_(text), line_(line_no) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_' || text_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }
  long integer() {
    skip_space();
    long v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("expected an integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }
  std::size_t line_ref() {
    long v = integer();
    if (v < 1) fail("line numbers start at 1");
    return static_cast<std::size_t>(v - 1);
  }
  Formula formula() {
    skip_space();
    return parse_formula_prefix(text_, pos_);
  }
  Program program() {
    skip_space();
    return parse_program_prefix(text_, pos_);
  }
  // `; key := value` pairs up to the closing parenthesis.
  template <typename IsProgram>
  void bindings(FormulaSubstitution& fsub, ProgramSubstitution& psub, IsProgram is_program) {
    while (accept(';')) {
      std::string key = word();
      expect(':');
      expect('=');
      bool duplicate = is_program(key) ? !psub.emplace(key, program()).second
                                       : !fsub.emplace(key, formula()).second;
      if (duplicate) fail("'" + key + "' bound twice");
    }
    expect(')');
  }
  [[noreturn]] void fail(const std::string& message) { throw FormatError(line_, message); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

Justification parse_justification(std::string_view text, std::size_t line_no,
                                  const std::vector<ProofLine>& earlier) {
  JustificationReader in(text, line_no);
  std::string kind = in.word();
  Justification why;
  if (kind == "premise") {
    why = Premise{};
  } else if (kind == "luk") {
    why = LukTautology{};
  } else if (kind == "mp") {
    in.expect('(');
    std::size_t i = in.line_ref();
    in.expect(',');
    std::size_t j = in.line_ref();
    in.expect(')');
    why = ModusPonens{i, j};
  } else if (kind == "nec") {
    in.expect('(');
    std::size_t i = in.line_ref();
    in.expect(',');
    in.expect('[');
    Program prog = in.program();
    in.expect(']');
    in.expect(')');
    why = Necessitation{i, prog};
  } else if (kind == "pow") {
    in.expect('(');
    std::size_t i = in.line_ref();
    in.expect(',');
    long k = in.integer();
    in.expect(')');
    why = PowerRule{i, static_cast<int>(k)};
  } else if (kind == "axiom") {
    in.expect('(');
    AxiomInstance ax;
    ax.schema = in.word();
    const AxiomSchema& schema = axiom_schema(ax.schema);
    in.bindings(ax.fsub, ax.psub, [&](const std::string& key) { return schema.program_slots.count(key) > 0; });
    why = std::move(ax);
  } else if (kind == "sub") {
    in.expect('(');
    UniformSubstitution sub{in.line_ref(), {}, {}};
    std::set<std::string> vars;
    std::set<std::string> atoms;
    if (sub.line < earlier.size()) {
      vars = variables(earlier[sub.line].formula);
      atoms = atomic_programs(earlier[sub.line].formula);
    }
    in.bindings(sub.fsub, sub.psub,
                [&](const std::string& key) { return atoms.count(key) && !vars.count(key); });
    why = std::move(sub);
  } else {
    in.fail("unknown justification '" + kind + "'");
  }
  if (!in.at_end()) in.fail("trailing text after justification");
  return why;
}

void write_bindings(std::ostream& out, const FormulaSubstitution& fsub, const ProgramSubstitution& psub) {
  for (const auto& [key, f] : fsub) out << "; " << key << ":=" << to_string(f);
  for (const auto& [key, prog] : psub) out << "; " << key << ":=" << to_string(prog);
}

}  // namespace

Derivation parse_derivation(const std::string& text, std::optional<Resolution> default_n) {
  std::optional<Resolution> resolution;
  std::vector<ProofLine> lines;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool seen_content = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    try {
      if (!seen_content && line[0] == 'n' && line.find('=') != std::string::npos &&
          trim(std::string_view(line).substr(0, line.find('='))) == "n") {
        std::string digits = trim(std::string_view(line).substr(line.find('=') + 1));
        int steps = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), steps);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
          throw FormatError(line_no, "expected an integer after 'n ='");
        }
        resolution = Resolution(steps);
        seen_content = true;
        continue;
      }
      seen_content = true;

      std::size_t dot = line.find('.');
      std::size_t index = 0;
      auto [ptr, ec] = std::from_chars(line.data(), line.data() + (dot == std::string::npos ? 0 : dot), index);
      if (dot == std::string::npos || ec != std::errc() || ptr != line.data() + dot) {
        throw FormatError(line_no, "expected '<index>.' at start of line");
      }
      if (index != lines.size() + 1) {
        throw FormatError(line_no, "expected step " + std::to_string(lines.size() + 1) + ", found " +
                                       std::to_string(index));
      }
      std::string_view rest = std::string_view(line).substr(dot + 1);
      std::size_t offset = rest.find_first_not_of(" \t");
      if (offset == std::string_view::npos) throw FormatError(line_no, "missing formula");
      Formula f = parse_formula_prefix(rest, offset);
      while (offset < rest.size() && std::isspace(static_cast<unsigned char>(rest[offset]))) ++offset;
      if (offset >= rest.size() || rest[offset] != ';') {
        throw FormatError(line_no, "expected ';' before the justification");
      }
      Justification why = parse_justification(rest.substr(offset + 1), line_no, lines);
      lines.push_back({std::move(f), std::move(why)});
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(line_no, e.what());
    }
  }
  if (!resolution) resolution = default_n;
  if (!resolution) throw FormatError(line_no, "no resolution: add 'n = <int>' or pass one");
  return Derivation{*resolution, std::move(lines)};
}

Derivation read_derivation_file(const std::string& path, std::optional<Resolution> default_n) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_derivation(buffer.str(), default_n);
}

std::string format_derivation(const Derivation& d) {
  std::ostringstream out;
  out << "n = " << d.resolution.steps() << "\n";
  for (std::size_t i = 0; i < d.lines.size(); ++i) {
    const auto& line = d.lines[i];
    out << i + 1 << ". " << to_string(line.formula) << " ; ";
    std::visit(
        [&](const auto& why) {
          using T = std::decay_t<decltype(why)>;
          if constexpr (std::is_same_v<T, Premise>) {
            out << "premise";
          } else if constexpr (std::is_same_v<T, LukTautology>) {
            out << "luk";
          } else if constexpr (std::is_same_v<T, AxiomInstance>) {
            out << "axiom(" << why.schema;
            write_bindings(out, why.fsub, why.psub);
            out << ")";
          } else if constexpr (std::is_same_v<T, ModusPonens>) {
            out << "mp(" << why.minor + 1 << "," << why.major + 1 << ")";
          } else if constexpr (std::is_same_v<T, Necessitation>) {
            out << "nec(" << why.line + 1 << ",[" << to_string(why.program) << "])";
          } else if constexpr (std::is_same_v<T, UniformSubstitution>) {
            out << "sub(" << why.line + 1;
            write_bindings(out, why.fsub, why.psub);
            out << ")";
          } else if constexpr (std::is_same_v<T, PowerRule>) {
            out << "pow(" << why.line + 1 << "," << why.exponent << ")";
          }
        },
        line.why);
    out << "\n";
  }
  return out.str();
}

}  // namespace mvpdl
