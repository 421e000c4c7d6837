#include <gtest/gtest.h>

#include <thread>

#include "generators.hpp"
#include "mvpdl/error.hpp"
#include "mvpdl/lukasiewicz.hpp"
#include "mvpdl/text.hpp"

namespace mvpdl {
namespace {

Formula F(const char* text) { return parse_formula(text); }

int eval_at(const Formula& f, int x, int n) {
  Assignment a{Resolution(n)};
  a.set("p", TruthValue(x, Resolution(n)));
  return eval_propositional(f, a).numerator();
}

TEST(EvalPropositional, ExcludedMiddleStrong) {
  for (int x = 0; x <= 5; ++x) EXPECT_EQ(eval_at(F("p (+) ~p"), x, 5), 5);
}

TEST(EvalPropositional, PowerOfAlmostTopVanishes) {
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(eval_at(power(var("p"), n), n - 1, n), 0);
}

TEST(EvalPropositional, UnboundVariableThrows) {
  Assignment a{Resolution(2)};
  a.set("p", TruthValue(1, Resolution(2)));
  EXPECT_THROW(eval_propositional(F("p -> q"), a), UnboundVariable);
}

TEST(EvalPropositional, RejectsModalities) {
  Assignment a{Resolution(2)};
  a.set("p", TruthValue(1, Resolution(2)));
  EXPECT_THROW(eval_propositional(F("[a]p"), a), Error);
}

TEST(EvalPropositional, ZeroWithoutVariables) {
  Assignment a{Resolution(3)};
  EXPECT_EQ(eval_propositional(zero(), a).numerator(), 0);
  EXPECT_EQ(eval_propositional(one(), a).numerator(), 3);
}

TEST(IsTautologyProp, KnownCases) {
  for (int n = 1; n <= 4; ++n) {
    EXPECT_TRUE(is_tautology_prop(F("(p (.) (p -> q)) -> q"), Resolution(n)));
    EXPECT_TRUE(is_tautology_prop(F("(p -> q) -> ((q -> t) -> (p -> t))"), Resolution(n)));
    EXPECT_TRUE(is_tautology_prop(F("0 -> p"), Resolution(n)));
  }
  EXPECT_TRUE(is_tautology_prop(F("p | ~p"), Resolution(1)));
  EXPECT_FALSE(is_tautology_prop(F("p | ~p"), Resolution(2)));
}

TEST(IsTautologyProp, CounterAssignmentIsReported) {
  auto counter = find_counter_assignment(F("p | ~p"), Resolution(2));
  ASSERT_TRUE(counter.has_value());
  EXPECT_EQ(counter->find("p")->numerator(), 1);
}

TEST(Powers, StabilizeFromN) {
  for (int n = 1; n <= 6; ++n) {
    for (int k = n; k <= n + 2; ++k) {
      for (int x = 0; x <= n; ++x) {
        EXPECT_EQ(eval_at(power(var("p"), k + 1), x, n), eval_at(power(var("p"), k), x, n));
      }
    }
  }
}

TEST(SynthTau, SmallCases) {
  // n = 2: thresholds at 1/2 and 1
  EXPECT_EQ(eval_at(synth_tau(1, Resolution(2)), 0, 2), 0);
  EXPECT_EQ(eval_at(synth_tau(1, Resolution(2)), 1, 2), 2);
  EXPECT_EQ(eval_at(synth_tau(1, Resolution(2)), 2, 2), 2);
  EXPECT_EQ(eval_at(synth_tau(2, Resolution(2)), 1, 2), 0);
  EXPECT_EQ(eval_at(synth_tau(2, Resolution(2)), 2, 2), 2);
  EXPECT_EQ(synth_tau(1, Resolution(1)), var("p"));
}

TEST(SynthTau, MatchesThresholdExhaustively) {
  for (int n = 1; n <= 8; ++n) {
    for (int i = 0; i <= n + 1; ++i) {
      Formula tau = synth_tau(i, Resolution(n));
      for (int x = 0; x <= n; ++x) {
        int expected = i == n + 1 ? 0 : (x >= i ? n : 0);
        EXPECT_EQ(eval_at(tau, x, n), expected) << "n=" << n << " i=" << i << " x=" << x;
      }
    }
  }
}

TEST(SynthTau, UsesOnlyDoublingAndSquaring) {
  // a chain of p(+)p / p(.)p steps, each applied to two copies of one term
  for (int n = 1; n <= 6; ++n) {
    for (int i = 1; i <= n; ++i) {
      Formula f = synth_tau(i, Resolution(n));
      while (f != var("p")) {
        if (f.kind() == FormulaKind::Implies) {
          ASSERT_EQ(f.first().kind(), FormulaKind::Not);
          ASSERT_EQ(f.first().first(), f.second());
          f = f.second();
        } else {
          ASSERT_EQ(f.kind(), FormulaKind::Not);
          Formula inner = f.first();
          ASSERT_EQ(inner.kind(), FormulaKind::Implies);
          ASSERT_EQ(inner.first().kind(), FormulaKind::Not);
          ASSERT_EQ(inner.second().kind(), FormulaKind::Not);
          ASSERT_EQ(inner.first().first(), inner.second());
          f = inner.second().first();
        }
      }
    }
  }
}

TEST(SynthTau, FixedAcrossCallsAndThreads) {
  Formula first = synth_tau(3, Resolution(7));
  std::vector<std::thread> threads;
  std::vector<Formula> seen(4, zero());
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] { seen[t] = synth_tau(3, Resolution(7)); });
  }
  for (auto& th : threads) th.join();
  for (const auto& f : seen) EXPECT_EQ(f, first);
}

TEST(SynthTau, RejectsOutOfRange) {
  EXPECT_THROW(synth_tau(-1, Resolution(3)), Error);
  EXPECT_THROW(synth_tau(5, Resolution(3)), Error);
}

TEST(SynthIndicator, CharacteristicFunctions) {
  for (int n = 1; n <= 8; ++n) {
    for (int i = 0; i <= n; ++i) {
      Formula ind = synth_indicator(i, Resolution(n));
      for (int x = 0; x <= n; ++x) EXPECT_EQ(eval_at(ind, x, n), x == i ? n : 0);
    }
  }
  EXPECT_THROW(synth_indicator(4, Resolution(3)), Error);
}

TEST(ApplyUnary, SubstitutesArgument) {
  Formula tau = synth_tau(2, Resolution(2));
  EXPECT_EQ(apply_unary(tau, F("[a]q")), odot(F("[a]q"), F("[a]q")));
}

TEST(MvEquations, HoldExhaustively) {
  Formula x = var("x");
  Formula y = var("y");
  Formula z = var("z");
  for (int n = 1; n <= 8; ++n) {
    Resolution r(n);
    EXPECT_TRUE(is_tautology_prop(iff(implies(one(), x), x), r));
    EXPECT_TRUE(is_tautology_prop(implies(implies(x, y), implies(implies(y, z), implies(x, z))), r));
    EXPECT_TRUE(is_tautology_prop(iff(implies(implies(x, y), y), implies(implies(y, x), x)), r));
    EXPECT_TRUE(is_tautology_prop(implies(implies(neg(x), neg(y)), implies(y, x)), r));
  }
}

TEST(MvEquations, LiteralFirstEquationFails) {
  // x -> 1 = x does not hold; 1 -> x = x does
  EXPECT_FALSE(is_tautology_prop(iff(implies(var("x"), one()), var("x")), Resolution(2)));
}

TEST(Desugaring, MatchesDirectArithmetic) {
  for (int n = 1; n <= 5; ++n) {
    Resolution r(n);
    for (int x = 0; x <= n; ++x) {
      for (int y = 0; y <= n; ++y) {
        Assignment a(r);
        a.set("p", TruthValue(x, r));
        a.set("q", TruthValue(y, r));
        TruthValue vx(x, r);
        TruthValue vy(y, r);
        EXPECT_EQ(eval_propositional(F("p | q"), a), join(vx, vy));
        EXPECT_EQ(eval_propositional(F("p & q"), a), meet(vx, vy));
        EXPECT_EQ(eval_propositional(F("p (+) q"), a), oplus(vx, vy));
        EXPECT_EQ(eval_propositional(F("p (.) q"), a), odot(vx, vy));
        EXPECT_EQ(eval_propositional(F("p <-> q"), a), equiv(vx, vy));
        EXPECT_EQ(eval_propositional(F("3.p"), a), oplus(oplus(vx, vx), vx));
        EXPECT_EQ(eval_propositional(F("p^3"), a), odot(odot(vx, vx), vx));
        EXPECT_EQ(eval_propositional(F("0.p"), a).numerator(), 0);
        EXPECT_EQ(eval_propositional(F("p^0"), a).numerator(), n);
      }
    }
  }
}

}  // namespace
}  // namespace mvpdl
