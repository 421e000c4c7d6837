#include <gtest/gtest.h>

#include "generators.hpp"
#include "mvpdl/error.hpp"
#include "mvpdl/kripke.hpp"
#include "mvpdl/lukasiewicz.hpp"
#include "mvpdl/proof.hpp"
#include "mvpdl/text.hpp"

namespace mvpdl {
namespace {

Formula F(const char* text) { return parse_formula(text); }
Program P(const char* text) { return parse_program(text); }

std::vector<std::string> as_vector(const std::set<std::string>& s) { return {s.begin(), s.end()}; }

KripkeModel model_for(const std::vector<Formula>& fs, Resolution r, std::uint64_t seed,
                      std::size_t worlds) {
  std::set<std::string> vars;
  std::set<std::string> atoms;
  for (const auto& f : fs) {
    auto v = variables(f);
    auto a = atomic_programs(f);
    vars.insert(v.begin(), v.end());
    atoms.insert(a.begin(), a.end());
  }
  return random_model(seed, r, worlds, as_vector(atoms), as_vector(vars), 0.35);
}

bool valid_in_random_models(const Formula& f, Resolution r, int count, std::uint64_t seed) {
  for (int k = 0; k < count; ++k) {
    KripkeModel m = model_for({f}, r, seed + static_cast<std::uint64_t>(k), 1 + k % 5);
    if (!globally_true(m, f)) return false;
  }
  return true;
}

TEST(InstantiateAxiom, TestSchema) {
  Formula got = instantiate_axiom(axiom_schema("test"), Resolution(3), {{"q", F("r")}, {"p", F("s")}}, {});
  EXPECT_EQ(got, F("[r?]s <-> (~r^3 | s)"));
}

TEST(InstantiateAxiom, InductionAtTwo) {
  Formula got = instantiate_axiom(axiom_schema("induction"), Resolution(2), {{"p", F("p")}}, {{"a", P("a")}});
  EXPECT_EQ(got, F("(p & [a*](p -> [a]p)^2) -> [a*]p"));
}

TEST(InstantiateAxiom, KWithCompositeProgram) {
  Formula got = instantiate_axiom(axiom_schema("K"), Resolution(2), {{"p", F("p")}, {"q", F("q")}},
                                  {{"a", P("a;b")}});
  EXPECT_EQ(got, F("[a;b](p -> q) -> ([a;b]p -> [a;b]q)"));
}

TEST(InstantiateAxiom, RemainingTemplates) {
  FormulaSubstitution fs{{"p", F("p")}};
  ProgramSubstitution one{{"a", P("a")}};
  ProgramSubstitution two{{"a", P("a")}, {"b", P("b")}};
  Resolution r(2);
  EXPECT_EQ(instantiate_axiom(axiom_schema("box-oplus"), r, fs, one), F("[a](p (+) p) <-> [a]p (+) [a]p"));
  EXPECT_EQ(instantiate_axiom(axiom_schema("box-odot"), r, fs, one), F("[a](p (.) p) <-> [a]p (.) [a]p"));
  EXPECT_EQ(instantiate_axiom(axiom_schema("union"), r, fs, two), F("[a + b]p <-> [a]p & [b]p"));
  EXPECT_EQ(instantiate_axiom(axiom_schema("seq"), r, fs, two), F("[a;b]p <-> [a][b]p"));
  EXPECT_EQ(instantiate_axiom(axiom_schema("star-fix"), r, fs, one), F("[a*]p <-> (p & [a][a*]p)"));
  EXPECT_EQ(instantiate_axiom(axiom_schema("star-trans"), r, fs, one), F("[a*]p -> [a*][a*]p"));
}

TEST(InstantiateAxiom, IncompleteOrForeignSubstitutionThrows) {
  EXPECT_THROW(instantiate_axiom(axiom_schema("K"), Resolution(2), {{"p", F("p")}}, {{"a", P("a")}}), Error);
  EXPECT_THROW(instantiate_axiom(axiom_schema("seq"), Resolution(2), {{"p", F("p")}}, {{"a", P("a")}}), Error);
  EXPECT_THROW(instantiate_axiom(axiom_schema("star-trans"), Resolution(2), {{"p", F("p")}, {"q", F("q")}},
                                 {{"a", P("a")}}),
               Error);
  EXPECT_THROW(axiom_schema("nope"), Error);
}

TEST(AxiomSchemas, InstancesAreValid) {
  testing::SyntaxGenerator gen(5, {"p", "q"}, {"a", "b"});
  for (const auto& schema : axiom_schemas()) {
    for (int n = 1; n <= 3; ++n) {
      for (int trial = 0; trial < 5; ++trial) {
        FormulaSubstitution fs;
        ProgramSubstitution ps;
        for (const auto& slot : schema.formula_slots) fs.emplace(slot, gen.formula(2));
        for (const auto& slot : schema.program_slots) ps.emplace(slot, gen.program(2));
        Formula inst = instantiate_axiom(schema, Resolution(n), fs, ps);
        EXPECT_TRUE(valid_in_random_models(inst, Resolution(n), 40, gen.next())) << schema.id;
      }
    }
  }
}

TEST(AxiomSchemas, NaiveInductionWithoutPowerIsNotAnInstance) {
  Derivation d{Resolution(4), {{F("(p & [a*](p -> [a]p)) -> [a*]p"),
                                AxiomInstance{"induction", {{"p", F("p")}}, {{"a", P("a")}}}}}};
  ASSERT_TRUE(check_line(d, 0).has_value());
}

TEST(CheckLine, ModusPonensAndNecessitation) {
  Derivation d{Resolution(2),
               {{F("p"), Premise{}},
                {F("p -> q"), Premise{}},
                {F("q"), ModusPonens{0, 1}},
                {F("[a*]q"), Necessitation{2, P("a*")}}}};
  EXPECT_FALSE(check_line(d, 2).has_value());
  EXPECT_FALSE(check_line(d, 3).has_value());
  EXPECT_FALSE(check_derivation(d).has_value());
  EXPECT_EQ(d.premise_count(), 2U);
  EXPECT_FALSE(d.is_theorem_derivation());
}

TEST(CheckLine, MajorPremiseShape) {
  Derivation d{Resolution(2), {{F("p"), Premise{}}, {F("q"), Premise{}}, {F("r"), ModusPonens{0, 1}}}};
  EXPECT_EQ(check_line(d, 2), std::optional<std::string>("major premise shape"));
}

TEST(CheckLine, MinorAndConclusionMismatch) {
  Derivation d{Resolution(2),
               {{F("p"), Premise{}},
                {F("q -> r"), Premise{}},
                {F("r"), ModusPonens{0, 1}},
                {F("[a]r"), Necessitation{0, P("a")}}}};
  EXPECT_EQ(check_line(d, 2), std::optional<std::string>("minor premise mismatch"));
  EXPECT_EQ(check_line(d, 3), std::optional<std::string>("conclusion mismatch"));
}

TEST(CheckLine, LukTautologyUsesModalAbstraction) {
  Resolution r(3);
  Derivation d{r,
               {{F("[a]p -> [a]p"), LukTautology{}},
                {F("[a]p (+) ~[a]p"), LukTautology{}},
                {F("[a]p (+) ~[b]p"), LukTautology{}},
                {F("p | ~p"), LukTautology{}},
                {F("[a*]p -> p"), LukTautology{}}}};
  EXPECT_FALSE(check_line(d, 0).has_value());
  EXPECT_FALSE(check_line(d, 1).has_value());
  EXPECT_TRUE(check_line(d, 2).has_value());
  EXPECT_TRUE(check_line(d, 3).has_value());  // excluded middle fails above n=1
  EXPECT_TRUE(check_line(d, 4).has_value());  // valid, but not propositionally
}

TEST(CheckLine, SubstitutionAndPower) {
  Derivation d{Resolution(2),
               {{F("p -> p"), LukTautology{}},
                {F("[a]q -> [a]q"), UniformSubstitution{0, {{"p", F("[a]q")}}, {}}},
                {F("q"), Premise{}},
                {F("r"), UniformSubstitution{2, {{"q", F("r")}}, {}}},
                {F("q^2"), PowerRule{2, 2}},
                {F("q^3"), PowerRule{2, 2}}}};
  EXPECT_FALSE(check_line(d, 1).has_value());
  EXPECT_TRUE(check_line(d, 3).has_value());
  EXPECT_FALSE(check_line(d, 4).has_value());
  EXPECT_TRUE(check_line(d, 5).has_value());
}

TEST(CheckDerivation, ForwardReferenceAndEmpty) {
  Derivation d{Resolution(2), {{F("q"), ModusPonens{1, 2}}, {F("p"), Premise{}}, {F("p -> q"), Premise{}}}};
  auto v = check_derivation(d);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->line, 0U);
  EXPECT_NE(v->reason.find("forward"), std::string::npos);
  EXPECT_FALSE(check_derivation(Derivation{Resolution(2), {}}).has_value());
}

TEST(LoopInvariance, BuiltInDerivationChecks) {
  for (int n = 1; n <= 4; ++n) {
    Derivation d = derive_loop_invariance(F("p"), P("a"), Resolution(n));
    EXPECT_FALSE(check_derivation(d).has_value()) << n;
    EXPECT_EQ(d.lines.size(), 10U);
    EXPECT_EQ(d.lines.front().formula, power(F("p -> [a]p"), n));
    EXPECT_EQ(d.lines.back().formula, F("p -> [a*]p"));
    EXPECT_EQ(d.premise_count(), 1U);
  }
}

TEST(LoopInvariance, CompositeArguments) {
  Derivation d = derive_loop_invariance(F("p & [b]q"), P("a;(q? + b)"), Resolution(3));
  EXPECT_FALSE(check_derivation(d).has_value());
  EXPECT_EQ(d.lines.back().formula, F("p & [b]q -> [(a;(q? + b))*](p & [b]q)"));
}

TEST(LoopInvariance, SharpVariantUsesPowerRule) {
  Derivation d = derive_loop_invariance_sharp(F("p"), P("a"), Resolution(3));
  EXPECT_FALSE(check_derivation(d).has_value());
  EXPECT_EQ(d.lines.size(), 11U);
  EXPECT_EQ(d.lines.front().formula, F("p -> [a]p"));
  EXPECT_TRUE(std::holds_alternative<PowerRule>(d.lines[1].why));
}

TEST(LoopInvariance, ConclusionHoldsWherePremiseHolds) {
  testing::SyntaxGenerator gen(13, {"p"}, {"a"});
  int premise_held = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Resolution r(1 + trial % 3);
    Formula phi = gen.formula(2);
    Derivation d = derive_loop_invariance(phi, P("a"), r);
    std::vector<Formula> all;
    for (const auto& line : d.lines) all.push_back(line.formula);
    KripkeModel m = model_for(all, r, gen.next(), 1 + gen.below(4));
    if (!globally_true(m, d.lines.front().formula)) continue;
    ++premise_held;
    for (const auto& line : d.lines) EXPECT_TRUE(globally_true(m, line.formula)) << to_string(line.formula);
  }
  EXPECT_GT(premise_held, 30);
}

TEST(Soundness, TheoremLinesAreValid) {
  testing::SyntaxGenerator gen(17, {"p", "q"}, {"a"});
  for (int trial = 0; trial < 20; ++trial) {
    Resolution r(1 + trial % 3);
    Formula phi = gen.formula(2);
    Formula psi = gen.formula(2);
    Program alpha = gen.program(1);
    Formula k = instantiate_axiom(axiom_schema("K"), r, {{"p", phi}, {"q", psi}}, {{"a", alpha}});
    Formula taut = implies(phi, phi);
    Derivation d{r,
                 {{k, AxiomInstance{"K", {{"p", phi}, {"q", psi}}, {{"a", alpha}}}},
                  {F("p -> p"), LukTautology{}},
                  {taut, UniformSubstitution{1, {{"p", phi}}, {}}},
                  {box(alpha, taut), Necessitation{2, alpha}},
                  {box(star(alpha), box(alpha, taut)), Necessitation{3, star(alpha)}}}};
    ASSERT_FALSE(check_derivation(d).has_value());
    ASSERT_TRUE(d.is_theorem_derivation());
    for (const auto& line : d.lines) {
      EXPECT_TRUE(valid_in_random_models(line.formula, r, 200, gen.next())) << to_string(line.formula);
    }
  }
}

TEST(Soundness, AcceptedLukLinesAreValid) {
  testing::SyntaxGenerator gen(19, {"p", "q"}, {"a", "b"});
  int accepted = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Resolution r(1 + trial % 3);
    Formula f = gen.formula(3);
    Derivation d{r, {{f, LukTautology{}}}};
    if (check_line(d, 0).has_value()) continue;
    ++accepted;
    EXPECT_TRUE(valid_in_random_models(f, r, 50, gen.next())) << to_string(f);
  }
  EXPECT_GT(accepted, 5);
}

TEST(Thresholds, BoxCommutesWithTau) {
  for (int n = 1; n <= 4; ++n) {
    Resolution r(n);
    for (int i = 1; i <= n; ++i) {
      Formula tau = synth_tau(i, r);
      Formula lhs = box(P("a"), apply_unary(tau, F("p")));
      Formula rhs = apply_unary(tau, F("[a]p"));
      EXPECT_TRUE(valid_in_random_models(iff(lhs, rhs), r, 200, 1000 + i)) << n << " " << i;
    }
  }
}

TEST(DerivationText, RoundTripsBuiltInDerivation) {
  Derivation d = derive_loop_invariance(F("p & q"), P("a;b*"), Resolution(2));
  std::string text = format_derivation(d);
  Derivation back = parse_derivation(text);
  EXPECT_EQ(format_derivation(back), text);
  EXPECT_FALSE(check_derivation(back).has_value());
  Derivation sharp = derive_loop_invariance_sharp(F("p"), P("a"), Resolution(3));
  EXPECT_EQ(format_derivation(parse_derivation(format_derivation(sharp))), format_derivation(sharp));
}

TEST(DerivationText, ProgramKeysInSubstitution) {
  Derivation d = parse_derivation(
      "n = 2\n"
      "1. [a]p -> [a]p ; luk\n"
      "2. [b;c]q -> [b;c]q ; sub(1; a:=b;c; p:=q)\n");
  ASSERT_EQ(d.lines.size(), 2U);
  const auto& sub = std::get<UniformSubstitution>(d.lines[1].why);
  EXPECT_EQ(sub.psub.at("a"), P("b;c"));
  EXPECT_EQ(sub.fsub.at("p"), F("q"));
  EXPECT_FALSE(check_derivation(d).has_value());
}

TEST(DerivationText, DefaultResolutionAndErrors) {
  EXPECT_EQ(parse_derivation("1. p ; premise\n", Resolution(3)).resolution.steps(), 3);
  EXPECT_THROW(parse_derivation("1. p ; premise\n"), FormatError);
  try {
    parse_derivation("n = 2\n1. p ; premise\n3. p ; premise\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3U);
  }
  EXPECT_THROW(parse_derivation("n = 2\n1. p ; bogus\n"), FormatError);
  EXPECT_THROW(parse_derivation("n = 2\n1. p ; mp(1)\n"), FormatError);
  EXPECT_THROW(parse_derivation("n = 2\n1. p -> ; premise\n"), FormatError);
  EXPECT_THROW(parse_derivation("n = 2\n1. p ; axiom(nope; p:=p)\n"), FormatError);
}

}  // namespace
}  // namespace mvpdl
