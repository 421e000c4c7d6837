#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "mvpdl/text.hpp"

namespace mvpdl {
namespace {

Formula F(const char* text) { return parse_formula(text); }

std::vector<std::string> texts(const ClosureSet& c) {
  std::vector<std::string> out;
  for (const auto& f : c) out.push_back(to_string(f));
  return out;
}

TEST(Syntax, SugarExpandsToCore) {
  Formula p = var("p");
  Formula q = var("q");
  EXPECT_EQ(oplus(p, q), implies(neg(p), q));
  EXPECT_EQ(lor(p, q), implies(implies(p, q), q));
  EXPECT_EQ(land(p, q), neg(lor(neg(p), neg(q))));
  EXPECT_EQ(odot(p, q), neg(oplus(neg(p), neg(q))));
  EXPECT_EQ(iff(p, q), odot(implies(p, q), implies(q, p)));
  EXPECT_EQ(diamond(atomic("a"), p), neg(box(atomic("a"), neg(p))));
  EXPECT_EQ(one(), neg(zero()));
  EXPECT_EQ(power(p, 0), one());
  EXPECT_EQ(times(0, p), zero());
  EXPECT_EQ(power(p, 3), odot(odot(p, p), p));
  EXPECT_EQ(times(3, p), oplus(oplus(p, p), p));
}

TEST(Syntax, EmptyMeetAndJoin) {
  EXPECT_EQ(land_all({}), one());
  EXPECT_EQ(lor_all({}), zero());
  EXPECT_EQ(land_all({var("p")}), var("p"));
}

TEST(Syntax, DepthCountsConstructors) {
  EXPECT_EQ(var("p").depth(), 0);
  EXPECT_EQ(neg(var("p")).depth(), 1);
  EXPECT_EQ(F("[a*]p").depth(), 2);
  EXPECT_EQ(F("[p?]p").depth(), 2);
}

TEST(Syntax, StructuralEqualityAndOrder) {
  EXPECT_EQ(F("[a;b]p"), box(seq(atomic("a"), atomic("b")), var("p")));
  EXPECT_NE(F("[a;b]p"), F("[b;a]p"));
  EXPECT_TRUE(F("p") < F("q") || F("q") < F("p"));
  EXPECT_FALSE(F("p") < F("p"));
}

TEST(Substitute, ReachesInsideTests) {
  Formula f = F("[q?]p");
  Formula g = substitute(f, {{"q", F("r (+) r")}});
  EXPECT_EQ(g, F("[(r (+) r)?]p"));
}

TEST(Substitute, ReplacesEveryOccurrenceSimultaneously) {
  EXPECT_EQ(substitute(F("p -> p"), {{"p", F("[a]q")}}), F("[a]q -> [a]q"));
  EXPECT_EQ(substitute(F("p -> q"), {{"p", F("q")}, {"q", F("p")}}), F("q -> p"));
}

TEST(Substitute, EmptyMapIsIdentity) {
  Formula f = F("[a*;p?](p -> <b>q)");
  EXPECT_EQ(substitute(f, {}), f);
}

TEST(Substitute, ProgramsToo) {
  Formula f = F("[a*]p -> [a]p");
  EXPECT_EQ(substitute(f, {}, {{"a", parse_program("b;c")}}), F("[(b;c)*]p -> [b;c]p"));
}

TEST(Variables, CollectsThroughTests) {
  EXPECT_EQ(variables(F("[q?;a]p")), (std::set<std::string>{"p", "q"}));
  EXPECT_EQ(atomic_programs(F("[q?;a]<b*>p")), (std::set<std::string>{"a", "b"}));
  EXPECT_TRUE(is_propositional(F("p (+) q")));
  EXPECT_FALSE(is_propositional(F("[a]p")));
}

TEST(FlClosure, Sequence) {
  auto c = fl_closure(F("[a;b]p"));
  EXPECT_EQ(texts(c), (std::vector<std::string>{"[a;b]p", "[a][b]p", "p", "[b]p"}));
}

TEST(FlClosure, Star) {
  auto c = fl_closure(F("[a*]p"));
  EXPECT_EQ(c.size(), 3U);
  EXPECT_TRUE(c.contains(F("[a*]p")));
  EXPECT_TRUE(c.contains(F("[a][a*]p")));
  EXPECT_TRUE(c.contains(F("p")));
}

TEST(FlClosure, ImplicationToZero) {
  auto c = fl_closure(F("p -> 0"));
  EXPECT_EQ(c.size(), 3U);
  EXPECT_TRUE(c.contains(F("p")));
  EXPECT_TRUE(c.contains(zero()));
}

TEST(FlClosure, UnionAndTest) {
  auto c = fl_closure(F("[a + q?]p"));
  EXPECT_TRUE(c.contains(F("[a]p")));
  EXPECT_TRUE(c.contains(F("[q?]p")));
  EXPECT_TRUE(c.contains(F("q")));
  EXPECT_TRUE(c.contains(F("p")));
  EXPECT_EQ(c.size(), 5U);
}

bool closed(const ClosureSet& c) {
  for (const auto& f : c) {
    switch (f.kind()) {
      case FormulaKind::Not:
        if (!c.contains(f.first())) return false;
        break;
      case FormulaKind::Implies:
        if (!c.contains(f.first()) || !c.contains(f.second())) return false;
        break;
      case FormulaKind::Box: {
        const Program a = f.program();
        const Formula body = f.first();
        if (!c.contains(body)) return false;
        switch (a.kind()) {
          case ProgramKind::Seq:
            if (!c.contains(box(a.first(), box(a.second(), body)))) return false;
            break;
          case ProgramKind::Union:
            if (!c.contains(box(a.first(), body)) || !c.contains(box(a.second(), body))) return false;
            break;
          case ProgramKind::Star:
            if (!c.contains(box(a.first(), f))) return false;
            break;
          case ProgramKind::Test:
            if (!c.contains(a.test())) return false;
            break;
          case ProgramKind::Atomic:
            break;
        }
        break;
      }
      default:
        break;
    }
  }
  return true;
}

TEST(FlClosure, RandomPropertiesHold) {
  testing::SyntaxGenerator gen(7, {"p", "q"}, {"a", "b"});
  for (int trial = 0; trial < 300; ++trial) {
    Formula f = gen.formula(5);
    Formula g = gen.formula(4);
    auto c = fl_closure(f);
    EXPECT_TRUE(c.contains(f));
    EXPECT_TRUE(closed(c)) << to_string(f);
    auto again = fl_closure(c.members());
    EXPECT_EQ(again.size(), c.size());
    auto both = fl_closure(std::vector<Formula>{f, g});
    for (const auto& m : c) EXPECT_TRUE(both.contains(m));
  }
}

TEST(FlClosure, OrderIsDeterministic) {
  Formula f = F("[(a;b)*](p -> [q?]p)");
  EXPECT_EQ(texts(fl_closure(f)), texts(fl_closure(f)));
}

TEST(AllFormulas, CountsDepthZeroAndOne) {
  auto d0 = testing::all_formulas(0, {"p"}, {"a"});
  EXPECT_EQ(d0.size(), 2U);
  // depth 1: 2 negations, 4 implications, 2 boxes over the atom
  auto d1 = testing::all_formulas(1, {"p"}, {"a"});
  EXPECT_EQ(d1.size(), 2U + 8U);
}

}  // namespace
}  // namespace mvpdl
