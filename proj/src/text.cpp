#include "mvpdl/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "mvpdl/error.hpp"

namespace mvpdl {

namespace {

enum class Tok {
  Ident,
  BracedIdent,
  Number,
  Tilde,
  Dot,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Lt,
  Gt,
  Caret,
  Odot,
  Oplus,
  Amp,
  Bar,
  Arrow,
  Iff,
  Question,
  Star,
  Semi,
  Plus,
  Assign,
  Comma,
  End,
  Invalid,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::string describe(Tok kind) {
  switch (kind) {
    case Tok::Ident:
      return "identifier";
    case Tok::BracedIdent:
      return "question name";
    case Tok::Number:
      return "number";
    case Tok::Tilde:
      return "'~'";
    case Tok::Dot:
      return "'.'";
    case Tok::LParen:
      return "'('";
    case Tok::RParen:
      return "')'";
    case Tok::LBracket:
      return "'['";
    case Tok::RBracket:
      return "']'";
    case Tok::Lt:
      return "'<'";
    case Tok::Gt:
      return "'>'";
    case Tok::Caret:
      return "'^'";
    case Tok::Odot:
      return "'(.)'";
    case Tok::Oplus:
      return "'(+)'";
    case Tok::Amp:
      return "'&'";
    case Tok::Bar:
      return "'|'";
    case Tok::Arrow:
      return "'->'";
    case Tok::Iff:
      return "'<->'";
    case Tok::Question:
      return "'?'";
    case Tok::Star:
      return "'*'";
    case Tok::Semi:
      return "';'";
    case Tok::Plus:
      return "'+'";
    case Tok::Assign:
      return "':='";
    case Tok::Comma:
      return "','";
    case Tok::End:
      return "end of input";
    case Tok::Invalid:
      return "invalid character";
  }
  return "?";
}

// Tokens are produced on demand so that a prefix parse never chokes on
// trailing text it does not understand.
class Lexer {
 public:
  Lexer(std::string_view text, std::size_t start) : text_(text), cursor_(start) {}

  const Token& at(std::size_t i) {
    while (tokens_.size() <= i) tokens_.push_back(next());
    return tokens_[i];
  }

  std::string_view text() const { return text_; }

 private:
  Token next() {
    while (cursor_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[cursor_]))) {
      ++cursor_;
    }
    std::size_t start = cursor_;
    if (cursor_ >= text_.size()) return {Tok::End, "", start};
    auto rest = text_.substr(cursor_);
    auto take = [&](Tok kind, std::size_t len) {
      cursor_ += len;
      return Token{kind, std::string(rest.substr(0, len)), start};
    };
    char c = rest[0];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t len = 1;
      while (len < rest.size() &&
             (std::isalnum(static_cast<unsigned char>(rest[len])) || rest[len] == '_')) {
        ++len;
      }
      if (len < rest.size() && rest[len] == '{') {
        auto close = rest.find('}', len);
        if (close == std::string_view::npos) return take(Tok::Invalid, rest.size());
        std::string name;
        for (std::size_t i = 0; i <= close; ++i) {
          if (!std::isspace(static_cast<unsigned char>(rest[i]))) name.push_back(rest[i]);
        }
        cursor_ += close + 1;
        return {Tok::BracedIdent, name, start};
      }
      return take(Tok::Ident, len);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t len = 1;
      while (len < rest.size() && std::isdigit(static_cast<unsigned char>(rest[len]))) ++len;
      return take(Tok::Number, len);
    }
    if (rest.starts_with("(.)")) return take(Tok::Odot, 3);
    if (rest.starts_with("(+)")) return take(Tok::Oplus, 3);
    if (rest.starts_with("<->")) return take(Tok::Iff, 3);
    if (rest.starts_with("->")) return take(Tok::Arrow, 2);
    if (rest.starts_with(":=")) return take(Tok::Assign, 2);
    switch (c) {
      case '~':
        return take(Tok::Tilde, 1);
      case '.':
        return take(Tok::Dot, 1);
      case '(':
        return take(Tok::LParen, 1);
      case ')':
        return take(Tok::RParen, 1);
      case '[':
        return take(Tok::LBracket, 1);
      case ']':
        return take(Tok::RBracket, 1);
      case '<':
        return take(Tok::Lt, 1);
      case '>':
        return take(Tok::Gt, 1);
      case '^':
        return take(Tok::Caret, 1);
      case '&':
        return take(Tok::Amp, 1);
      case '|':
        return take(Tok::Bar, 1);
      case '?':
        return take(Tok::Question, 1);
      case '*':
        return take(Tok::Star, 1);
      case ';':
        return take(Tok::Semi, 1);
      case '+':
        return take(Tok::Plus, 1);
      case ',':
        return take(Tok::Comma, 1);
      default:
        break;
    }
    // one UTF-8 code point
    std::size_t len = 1;
    while (len < rest.size() && (static_cast<unsigned char>(rest[len]) & 0xC0) == 0x80) ++len;
    return take(Tok::Invalid, len);
  }

  std::string_view text_;
  std::size_t cursor_;
  std::vector<Token> tokens_;
};

struct ParseFail {};

class Parser {
 public:
  Parser(std::string_view text, std::size_t start, bool stop_at_assign)
      : lex_(text, start), stop_at_assign_(stop_at_assign) {}

  template <class F>
  auto run(F&& body) {
    try {
      return body(*this);
    } catch (const ParseFail&) {
      throw syntax_error();
    }
  }

  Formula formula() { return parse_iff(); }
  Program program() { return parse_union(); }

  void expect_end() { expect(Tok::End); }
  std::size_t offset() { return lex_.at(pos_).offset; }

 private:
  const Token& peek(std::size_t ahead = 0) { return lex_.at(pos_ + ahead); }

  bool accept(Tok kind) {
    if (peek().kind == kind) {
      ++pos_;
      return true;
    }
    note_expected(describe(kind));
    return false;
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail(describe(kind));
    return lex_.at(pos_++);
  }

  void note_expected(const std::string& what) {
    if (pos_ > farthest_) {
      farthest_ = pos_;
      expected_.clear();
    }
    if (pos_ == farthest_) expected_.insert(what);
  }

  [[noreturn]] void fail(const std::string& what) {
    note_expected(what);
    throw ParseFail{};
  }

  SyntaxError syntax_error() {
    const Token& tok = lex_.at(farthest_);
    std::size_t line = 1;
    std::size_t column = 1;
    auto text = lex_.text();
    for (std::size_t i = 0; i < tok.offset && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++column;
      }
    }
    std::string found = tok.kind == Tok::End ? "end of input" : "'" + tok.text + "'";
    return SyntaxError(line, column, {expected_.begin(), expected_.end()}, found);
  }

  int number(const Token& tok) {
    int k = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), k);
    if (ec != std::errc()) fail("number below 2^31");
    return k;
  }

  Formula parse_iff() {
    Formula lhs = parse_imp();
    while (accept(Tok::Iff)) lhs = iff(lhs, parse_imp());
    return lhs;
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (accept(Tok::Arrow)) return implies(lhs, parse_imp());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (accept(Tok::Bar)) lhs = lor(lhs, parse_and());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_oplus();
    while (accept(Tok::Amp)) lhs = land(lhs, parse_oplus());
    return lhs;
  }

  Formula parse_oplus() {
    Formula lhs = parse_odot();
    while (accept(Tok::Oplus)) lhs = oplus(lhs, parse_odot());
    return lhs;
  }

  Formula parse_odot() {
    Formula lhs = parse_prefix();
    while (accept(Tok::Odot)) lhs = odot(lhs, parse_prefix());
    return lhs;
  }

  Formula parse_prefix() {
    if (accept(Tok::Tilde)) return neg(parse_prefix());
    if (peek().kind == Tok::Number && peek(1).kind == Tok::Dot) {
      int k = number(peek());
      pos_ += 2;
      return times(k, parse_prefix());
    }
    if (accept(Tok::LBracket)) {
      Program p = parse_union();
      expect(Tok::RBracket);
      return box(p, parse_prefix());
    }
    if (accept(Tok::Lt)) {
      Program p = parse_union();
      expect(Tok::Gt);
      return diamond(p, parse_prefix());
    }
    return parse_postfix();
  }

  Formula parse_postfix() {
    Formula base = parse_primary();
    while (accept(Tok::Caret)) base = power(base, number(expect(Tok::Number)));
    return base;
  }

  Formula parse_primary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Ident:
        ++pos_;
        return var(tok.text);
      case Tok::Number:
        if (tok.text == "0") {
          ++pos_;
          return zero();
        }
        if (tok.text == "1") {
          ++pos_;
          return one();
        }
        fail("'.' after a multiplier");
      case Tok::LParen: {
        ++pos_;
        Formula f = parse_iff();
        expect(Tok::RParen);
        return f;
      }
      default:
        fail("formula");
    }
  }

  Program parse_union() {
    Program lhs = parse_seq();
    while (accept(Tok::Plus)) lhs = choice(lhs, parse_seq());
    return lhs;
  }

  Program parse_seq() {
    Program lhs = parse_star();
    while (peek().kind == Tok::Semi) {
      if (stop_at_assign_ && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Assign) break;
      ++pos_;
      lhs = seq(lhs, parse_star());
    }
    note_expected(describe(Tok::Semi));
    return lhs;
  }

  Program parse_star() {
    Program p = parse_program_primary();
    while (accept(Tok::Star)) p = star(p);
    return p;
  }

  Program parse_program_primary() {
    std::size_t save = pos_;
    try {
      Formula f = parse_iff();
      if (accept(Tok::Question)) return test(f);
    } catch (const ParseFail&) {
    }
    pos_ = save;
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Ident:
      case Tok::BracedIdent:
        ++pos_;
        return atomic(tok.text);
      case Tok::Tilde:
        if (peek(1).kind == Tok::Ident || peek(1).kind == Tok::BracedIdent) {
          std::string name = "~" + peek(1).text;
          pos_ += 2;
          return atomic(name);
        }
        break;
      case Tok::LParen: {
        ++pos_;
        Program p = parse_union();
        expect(Tok::RParen);
        return p;
      }
      default:
        break;
    }
    fail("program");
  }

  Lexer lex_;
  bool stop_at_assign_;
  std::size_t pos_ = 0;
  std::size_t farthest_ = 0;
  std::set<std::string> expected_;
};

// ---------------------------------------------------------------------------
// Printing

enum Level : int {
  kIff = 1,
  kImp,
  kOr,
  kAnd,
  kOplus,
  kOdot,
  kPrefix,
  kPostfix,
  kAtom,
};

enum ProgramLevel : int { kUnion = 1, kSeq, kStar, kProgramAtom };

bool is_not(const Formula& f) { return f.kind() == FormulaKind::Not; }
bool is_imp(const Formula& f) { return f.kind() == FormulaKind::Implies; }

// a (+) b  ==  ~a -> b
std::optional<std::pair<Formula, Formula>> match_oplus(const Formula& f) {
  if (is_imp(f) && is_not(f.first())) return std::pair{f.first().first(), f.second()};
  return std::nullopt;
}

// a (.) b  ==  ~(~~a -> ~b)
std::optional<std::pair<Formula, Formula>> match_odot(const Formula& f) {
  if (!is_not(f)) return std::nullopt;
  Formula x = f.first();
  if (!is_imp(x)) return std::nullopt;
  Formula l = x.first();
  Formula r = x.second();
  if (is_not(l) && is_not(l.first()) && is_not(r)) return std::pair{l.first().first(), r.first()};
  return std::nullopt;
}

// a | b  ==  (a -> b) -> b
std::optional<std::pair<Formula, Formula>> match_or(const Formula& f) {
  if (is_imp(f) && is_imp(f.first()) && f.first().second() == f.second()) {
    return std::pair{f.first().first(), f.second()};
  }
  return std::nullopt;
}

// a & b  ==  ~(~a | ~b)
std::optional<std::pair<Formula, Formula>> match_and(const Formula& f) {
  if (!is_not(f)) return std::nullopt;
  auto inner = match_or(f.first());
  if (inner && is_not(inner->first) && is_not(inner->second)) {
    return std::pair{inner->first.first(), inner->second.first()};
  }
  return std::nullopt;
}

// a <-> b  ==  (a -> b) (.) (b -> a)
std::optional<std::pair<Formula, Formula>> match_iff(const Formula& f) {
  auto m = match_odot(f);
  if (!m || !is_imp(m->first) || !is_imp(m->second)) return std::nullopt;
  Formula a = m->first.first();
  Formula b = m->first.second();
  if (m->second.first() == b && m->second.second() == a) return std::pair{a, b};
  return std::nullopt;
}

// Negations that print as something other than `~x`.
bool is_sugared_negation(const Formula& f) {
  if (!is_not(f)) return false;
  Formula x = f.first();
  if (x.kind() == FormulaKind::Zero) return true;
  if (x.kind() == FormulaKind::Box && is_not(x.first())) return true;
  return match_odot(f).has_value() || match_and(f).has_value();
}

template <class Matcher>
std::optional<std::pair<int, Formula>> match_repeat(const Formula& f, Matcher match) {
  auto m = match(f);
  if (!m) return std::nullopt;
  if (m->first == m->second) return std::pair{2, m->second};
  auto inner = match_repeat(m->first, match);
  if (inner && inner->second == m->second) return std::pair{inner->first + 1, m->second};
  return std::nullopt;
}

class Printer {
 public:
  std::string formula(const Formula& f, int min_level) {
    auto [text, level] = render(f);
    return level < min_level ? "(" + text + ")" : text;
  }

  std::string program(const Program& p, int min_level) {
    auto [text, level] = render(p);
    return level < min_level ? "(" + text + ")" : text;
  }

 private:
  std::pair<std::string, int> binary_left(const Formula& a, const char* op, const Formula& b,
                                          int level) {
    return {formula(a, level) + " " + op + " " + formula(b, level + 1), level};
  }

  std::pair<std::string, int> render(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Var:
        return {f.name(), kAtom};
      case FormulaKind::Zero:
        return {"0", kAtom};
      case FormulaKind::Box:
        return {"[" + program(f.program(), kUnion) + "]" + formula(f.first(), kPrefix), kPrefix};
      case FormulaKind::Not: {
        Formula x = f.first();
        if (x.kind() == FormulaKind::Zero) return {"1", kAtom};
        if (x.kind() == FormulaKind::Box && is_not(x.first())) {
          return {"<" + program(x.program(), kUnion) + ">" + formula(x.first().first(), kPrefix),
                  kPrefix};
        }
        if (auto m = match_iff(f)) return binary_left(m->first, "<->", m->second, kIff);
        if (auto m = match_repeat(f, match_odot)) {
          return {formula(m->second, kPostfix) + "^" + std::to_string(m->first), kPostfix};
        }
        if (auto m = match_odot(f)) return binary_left(m->first, "(.)", m->second, kOdot);
        if (auto m = match_and(f)) return binary_left(m->first, "&", m->second, kAnd);
        return {"~" + formula(x, kPrefix), kPrefix};
      }
      case FormulaKind::Implies: {
        if (auto m = match_or(f)) return binary_left(m->first, "|", m->second, kOr);
        if (is_sugared_negation(f.first())) {
          return {formula(f.first(), kImp + 1) + " -> " + formula(f.second(), kImp), kImp};
        }
        if (auto m = match_repeat(f, match_oplus)) {
          return {std::to_string(m->first) + "." + formula(m->second, kPrefix), kPrefix};
        }
        if (auto m = match_oplus(f)) return binary_left(m->first, "(+)", m->second, kOplus);
        return {formula(f.first(), kImp + 1) + " -> " + formula(f.second(), kImp), kImp};
      }
    }
    return {"?", kAtom};
  }

  std::pair<std::string, int> render(const Program& p) {
    switch (p.kind()) {
      case ProgramKind::Atomic:
        return {p.name(), kProgramAtom};
      case ProgramKind::Test:
        return {formula(p.test(), kPrefix) + "?", kProgramAtom};
      case ProgramKind::Star:
        return {program(p.first(), kStar) + "*", kStar};
      case ProgramKind::Seq:
        return {program(p.first(), kSeq) + ";" + program(p.second(), kSeq + 1), kSeq};
      case ProgramKind::Union:
        return {program(p.first(), kUnion) + " + " + program(p.second(), kUnion + 1), kUnion};
    }
    return {"?", kProgramAtom};
  }
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser parser(text, 0, false);
  return parser.run([](Parser& p) {
    Formula f = p.formula();
    p.expect_end();
    return f;
  });
}

Program parse_program(std::string_view text) {
  Parser parser(text, 0, false);
  return parser.run([](Parser& p) {
    Program prog = p.program();
    p.expect_end();
    return prog;
  });
}

Formula parse_formula_prefix(std::string_view text, std::size_t& offset) {
  Parser parser(text, offset, true);
  return parser.run([&](Parser& p) {
    Formula f = p.formula();
    offset = p.offset();
    return f;
  });
}

Program parse_program_prefix(std::string_view text, std::size_t& offset) {
  Parser parser(text, offset, true);
  return parser.run([&](Parser& p) {
    Program prog = p.program();
    offset = p.offset();
    return prog;
  });
}

std::string to_string(const Formula& f) { return Printer().formula(f, kIff); }
std::string to_string(const Program& p) { return Printer().program(p, kUnion); }

}  // namespace mvpdl
