#ifndef MVPDL_TEXT_HPP
#define MVPDL_TEXT_HPP

// Concrete ASCII syntax.
//
// Formulas, binding from tightest to loosest:
//   atoms       0  1  identifiers  ( f )
//   postfix     f^k
//   prefix      ~f   k.f   [prog]f   <prog>f
//   (.)  (+)  &  |        left associative
//   ->                    right associative
//   <->                   left associative
//
// Programs, tightest to loosest: atomic names, tests `f?`, parentheses;
// postfix `*`; `;`; `+`. Atomic program names may carry a brace suffix
// (`Q{1,3}`) and a leading `~`; both are opaque to the logic.

#include <cstddef>
#include <string>
#include <string_view>

#include "mvpdl/syntax.hpp"

namespace mvpdl {

Formula parse_formula(std::string_view text);
Program parse_program(std::string_view text);

/// Parses the longest formula starting at `offset` and advances `offset`
/// past it (and any trailing whitespace). Used by line-oriented file readers.
Formula parse_formula_prefix(std::string_view text, std::size_t& offset);
/// Same for programs. A `;` followed by `name :=` ends the program.
Program parse_program_prefix(std::string_view text, std::size_t& offset);

/// Canonical text. Sugar patterns are printed in sugared form; parsing the
/// output yields a structurally equal tree.
std::string to_string(const Formula& f);
std::string to_string(const Program& p);

}  // namespace mvpdl

#endif  // MVPDL_TEXT_HPP
