#include "naive.hpp"

#include <algorithm>

namespace mvpdl::testing {

namespace {

PairSet compose(const PairSet& r, const PairSet& s) {
  PairSet out;
  for (auto [u, v] : r) {
    for (auto [x, w] : s) {
      if (x == v) out.emplace(u, w);
    }
  }
  return out;
}

}  // namespace

PairSet naive_relation(const KripkeModel& m, const Program& p) {
  const int n = m.resolution().steps();
  switch (p.kind()) {
    case ProgramKind::Atomic: {
      PairSet out;
      if (const Relation* r = m.find_relation(p.name())) {
        for (auto e : r->pairs()) out.insert(e);
      }
      return out;
    }
    case ProgramKind::Test: {
      PairSet out;
      for (std::size_t w = 0; w < m.world_count(); ++w) {
        if (naive_value(m, w, p.test()) == n) out.emplace(w, w);
      }
      return out;
    }
    case ProgramKind::Seq:
      return compose(naive_relation(m, p.first()), naive_relation(m, p.second()));
    case ProgramKind::Union: {
      PairSet out = naive_relation(m, p.first());
      PairSet b = naive_relation(m, p.second());
      out.insert(b.begin(), b.end());
      return out;
    }
    case ProgramKind::Star: {
      PairSet base = naive_relation(m, p.first());
      PairSet power;
      for (std::size_t w = 0; w < m.world_count(); ++w) power.emplace(w, w);
      PairSet out = power;
      for (std::size_t k = 1; k <= m.world_count(); ++k) {
        power = compose(power, base);
        out.insert(power.begin(), power.end());
      }
      return out;
    }
  }
  return {};
}

int naive_value(const KripkeModel& m, std::size_t world, const Formula& f) {
  const int n = m.resolution().steps();
  switch (f.kind()) {
    case FormulaKind::Var:
      return m.atomic_value(f.name(), world).numerator();
    case FormulaKind::Zero:
      return 0;
    case FormulaKind::Not:
      return n - naive_value(m, world, f.first());
    case FormulaKind::Implies:
      return std::min(n, n - naive_value(m, world, f.first()) + naive_value(m, world, f.second()));
    case FormulaKind::Box: {
      int meet = n;
      for (auto [u, v] : naive_relation(m, f.program())) {
        if (u == world) meet = std::min(meet, naive_value(m, v, f.first()));
      }
      return meet;
    }
  }
  return 0;
}

}  // namespace mvpdl::testing
