#include "mvpdl/satisfiability.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include "mvpdl/error.hpp"

namespace mvpdl {

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t size = 0) : words_((size + 63) / 64, 0) {}

  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  friend bool operator==(const Bitset& a, const Bitset& b) { return a.words_ == b.words_; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      for (std::uint64_t bits = words_[k]; bits != 0; bits &= bits - 1) {
        f(k * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

enum class PosKind { Var, Zero, Not, Implies, AtomBox, StarBox, TestBox, SeqBox, UnionBox };

// One member of FL(phi) and the members its value depends on.
//   Not a | Implies a b | AtomBox: atom, body a | StarBox: body a, [alpha][alpha*] b
//   TestBox: body a, test b | SeqBox: [alpha][beta] a | UnionBox: [alpha] a, [beta] b
struct Position {
  PosKind kind = PosKind::Zero;
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t atom = 0;
};

std::uint64_t saturating_power(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out *= base;
  }
  return out;
}

class AtomDecider {
 public:
  AtomDecider(const Formula& phi, Resolution r, std::uint64_t budget, SatStatistics& stats)
      : phi_(phi), fl_(fl_closure(phi)), resolution_(r), n_(r.steps()), budget_(budget), stats_(stats) {
    L_ = fl_.size();
    stats_.closure_size = L_;
    classify();
  }

  std::uint64_t completeness_bound() const {
    return saturating_power(static_cast<std::uint64_t>(n_) + 1, L_);
  }

  void generate() {
    std::vector<int> digits(free_.size(), 0);
    std::vector<std::uint8_t> row(L_, 0);
    while (true) {
      spend(1);
      ++stats_.candidates_enumerated;
      for (std::size_t k = 0; k < free_.size(); ++k) row[free_[k]] = static_cast<std::uint8_t>(digits[k]);
      for (std::size_t i : order_) row[i] = static_cast<std::uint8_t>(determine(i, row));
      if (star_consistent(row)) data_.insert(data_.end(), row.begin(), row.end());

      std::size_t k = 0;
      for (; k < digits.size(); ++k) {
        if (digits[k] < n_) {
          ++digits[k];
          break;
        }
        digits[k] = 0;
      }
      if (k == digits.size()) break;
    }
    count_ = data_.size() / std::max<std::size_t>(L_, 1);
    stats_.atoms_generated = count_;
  }

  Bitset eliminate() {
    Bitset alive(count_);
    for (std::size_t s = 0; s < count_; ++s) alive.set(s);
    bool changed = true;
    while (changed) {
      ++stats_.elimination_rounds;
      changed = sweep(alive, true);
    }
    stats_.atoms_surviving = alive.count();
    return alive;
  }

  bool root_ok(std::size_t s, bool want_true) const {
    int v = val(s, root_);
    return want_true ? v == n_ : v < n_;
  }

  std::vector<std::size_t> roots(const Bitset& alive, bool want_true) const {
    std::vector<std::size_t> out;
    alive.for_each([&](std::size_t s) {
      if (root_ok(s, want_true)) out.push_back(s);
    });
    return out;
  }

  /// Atoms reachable from root by the maximal relations inside alive.
  std::vector<std::size_t> generated(std::size_t root, const Bitset& alive) {
    std::vector<std::size_t> out{root};
    Bitset seen(count_);
    seen.set(root);
    for (std::size_t head = 0; head < out.size(); ++head) {
      std::size_t s = out[head];
      alive.for_each([&](std::size_t t) {
        if (!seen.test(t) && any_edge(s, t)) {
          seen.set(t);
          out.push_back(t);
        }
      });
      spend(1);
    }
    return out;
  }

  /// Smallest self-sustaining atom set (containing a root) of size <= limit,
  /// searched by iterative deepening.
  std::optional<std::vector<std::size_t>> smallest(const std::vector<std::size_t>& roots,
                                                   const Bitset& alive, std::size_t limit) {
    for (std::size_t k = 1; k <= limit; ++k) {
      std::set<std::vector<std::size_t>> visited;
      for (std::size_t r : roots) {
        std::vector<std::size_t> current{r};
        if (auto found = extend(current, alive, k, visited)) return found;
      }
    }
    return std::nullopt;
  }

  KripkeModel build(const std::vector<std::size_t>& atoms) const {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < atoms.size(); ++i) names.push_back("s" + std::to_string(i));
    KripkeModel m(resolution_, names);
    for (std::size_t a = 0; a < atom_names_.size(); ++a) {
      m.declare_program(atom_names_[a]);
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = 0; j < atoms.size(); ++j) {
          if (edge(a, atoms[i], atoms[j])) m.add_edge(atom_names_[a], i, j);
        }
      }
    }
    for (std::size_t i = 0; i < L_; ++i) {
      if (pos_[i].kind != PosKind::Var) continue;
      std::vector<int> row;
      for (std::size_t s : atoms) row.push_back(val(s, i));
      m.set_valuation(fl_.members()[i].name(), std::move(row));
    }
    return m;
  }

 private:
  int val(std::size_t s, std::size_t i) const { return data_[s * L_ + i]; }

  void spend(std::uint64_t units) {
    used_ += units;
    if (used_ > budget_) {
      throw ResourceLimitExceeded("satisfiability search exceeded its budget of " +
                                  std::to_string(budget_) + " states");
    }
  }

  std::size_t atom_index(const std::string& name) {
    auto [it, fresh] = atom_ids_.try_emplace(name, atom_names_.size());
    if (fresh) {
      atom_names_.push_back(name);
      atom_boxes_.emplace_back();
    }
    return it->second;
  }

  void classify() {
    const auto& members = fl_.members();
    pos_.resize(L_);
    programs_.resize(L_);
    root_ = fl_.index_of(phi_);
    for (std::size_t i = 0; i < L_; ++i) {
      const Formula& f = members[i];
      Position& p = pos_[i];
      switch (f.kind()) {
        case FormulaKind::Var:
          p.kind = PosKind::Var;
          free_.push_back(i);
          break;
        case FormulaKind::Zero:
          p.kind = PosKind::Zero;
          break;
        case FormulaKind::Not:
          p.kind = PosKind::Not;
          p.a = fl_.index_of(f.first());
          break;
        case FormulaKind::Implies:
          p.kind = PosKind::Implies;
          p.a = fl_.index_of(f.first());
          p.b = fl_.index_of(f.second());
          break;
        case FormulaKind::Box: {
          const Program alpha = f.program();
          const Formula body = f.first();
          programs_[i] = alpha;
          p.a = fl_.index_of(body);
          switch (alpha.kind()) {
            case ProgramKind::Atomic:
              p.kind = PosKind::AtomBox;
              p.atom = atom_index(alpha.name());
              atom_boxes_[p.atom].emplace_back(i, p.a);
              free_.push_back(i);
              demands_.push_back(i);
              break;
            case ProgramKind::Star:
              p.kind = PosKind::StarBox;
              p.b = fl_.index_of(box(alpha.first(), f));
              free_.push_back(i);
              demands_.push_back(i);
              break;
            case ProgramKind::Test:
              p.kind = PosKind::TestBox;
              p.b = fl_.index_of(alpha.test());
              break;
            case ProgramKind::Seq:
              p.kind = PosKind::SeqBox;
              p.a = fl_.index_of(box(alpha.first(), box(alpha.second(), body)));
              break;
            case ProgramKind::Union:
              p.kind = PosKind::UnionBox;
              p.a = fl_.index_of(box(alpha.first(), body));
              p.b = fl_.index_of(box(alpha.second(), body));
              break;
          }
          break;
        }
      }
    }
    // every atomic program of phi gets a relation, even without boxes
    for (const auto& name : atomic_programs(phi_)) atom_index(name);
    topological_order();
  }

  std::vector<std::size_t> dependencies(std::size_t i) const {
    const Position& p = pos_[i];
    switch (p.kind) {
      case PosKind::Not:
      case PosKind::SeqBox:
        return {p.a};
      case PosKind::Implies:
      case PosKind::TestBox:
      case PosKind::UnionBox:
        return {p.a, p.b};
      default:
        return {};
    }
  }

  bool is_free(std::size_t i) const {
    auto k = pos_[i].kind;
    return k == PosKind::Var || k == PosKind::AtomBox || k == PosKind::StarBox;
  }

  void topological_order() {
    std::vector<int> state(L_, 0);
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
      if (state[i] == 2 || is_free(i)) return;
      if (state[i] == 1) throw std::logic_error("cyclic dependency among closure members");
      state[i] = 1;
      for (std::size_t d : dependencies(i)) visit(d);
      state[i] = 2;
      order_.push_back(i);
    };
    for (std::size_t i = 0; i < L_; ++i) visit(i);
  }

  int determine(std::size_t i, const std::vector<std::uint8_t>& row) const {
    const Position& p = pos_[i];
    switch (p.kind) {
      case PosKind::Zero:
        return 0;
      case PosKind::Not:
        return luk::neg(row[p.a], n_);
      case PosKind::Implies:
        return luk::implies(row[p.a], row[p.b], n_);
      case PosKind::TestBox:
        return row[p.b] == n_ ? row[p.a] : n_;
      case PosKind::SeqBox:
        return row[p.a];
      case PosKind::UnionBox:
        return std::min(row[p.a], row[p.b]);
      default:
        return row[i];
    }
  }

  bool star_consistent(const std::vector<std::uint8_t>& row) const {
    for (std::size_t i : demands_) {
      const Position& p = pos_[i];
      if (p.kind == PosKind::StarBox && row[i] != std::min(row[p.a], row[p.b])) return false;
    }
    return true;
  }

  bool edge(std::size_t atom, std::size_t s, std::size_t t) const {
    for (auto [boxed, body] : atom_boxes_[atom]) {
      if (val(s, boxed) > val(t, body)) return false;
    }
    return true;
  }

  bool any_edge(std::size_t s, std::size_t t) const {
    for (std::size_t a = 0; a < atom_names_.size(); ++a) {
      if (edge(a, s, t)) return true;
    }
    return false;
  }

  // Members of `within` with an edge of `atom` into T.
  Bitset pre_atomic(std::size_t atom, const Bitset& T, const Bitset& within) {
    Bitset out(count_);
    if (!T.any()) return out;
    const auto& boxes = atom_boxes_[atom];
    if (boxes.empty()) return within;

    const std::size_t m = boxes.size();
    const std::uint64_t grid = saturating_power(static_cast<std::uint64_t>(n_) + 1, m);
    const std::uint64_t pairs = static_cast<std::uint64_t>(T.count()) * within.count();
    if (grid <= (std::uint64_t{1} << 18) && grid <= pairs) {
      // mark successor profiles, close downwards, then look up each source
      std::vector<std::uint8_t> cells(grid, 0);
      std::vector<std::uint64_t> stride(m);
      for (std::size_t k = 0; k < m; ++k) stride[k] = k == 0 ? 1 : stride[k - 1] * (n_ + 1);
      T.for_each([&](std::size_t t) {
        std::uint64_t idx = 0;
        for (std::size_t k = 0; k < m; ++k) idx += val(t, boxes[k].second) * stride[k];
        cells[idx] = 1;
      });
      for (std::size_t k = 0; k < m; ++k) {
        for (std::uint64_t idx = grid; idx-- > 0;) {
          if (!cells[idx] && (idx / stride[k]) % (n_ + 1) < static_cast<std::uint64_t>(n_) &&
              cells[idx + stride[k]]) {
            cells[idx] = 1;
          }
        }
      }
      within.for_each([&](std::size_t s) {
        std::uint64_t idx = 0;
        for (std::size_t k = 0; k < m; ++k) idx += val(s, boxes[k].first) * stride[k];
        if (cells[idx]) out.set(s);
      });
      return out;
    }
    within.for_each([&](std::size_t s) {
      bool hit = false;
      T.for_each([&](std::size_t t) {
        if (!hit && edge(atom, s, t)) hit = true;
      });
      if (hit) out.set(s);
    });
    return out;
  }

  Bitset pre(const Program& alpha, const Bitset& T, const Bitset& within) {
    switch (alpha.kind()) {
      case ProgramKind::Atomic:
        return pre_atomic(atom_ids_.at(alpha.name()), T, within);
      case ProgramKind::Test: {
        std::size_t psi = fl_.index_of(alpha.test());
        Bitset out(count_);
        T.for_each([&](std::size_t s) {
          if (within.test(s) && val(s, psi) == n_) out.set(s);
        });
        return out;
      }
      case ProgramKind::Seq:
        return pre(alpha.first(), pre(alpha.second(), T, within), within);
      case ProgramKind::Union: {
        Bitset out = pre(alpha.first(), T, within);
        out |= pre(alpha.second(), T, within);
        return out;
      }
      case ProgramKind::Star: {
        Bitset x(count_);
        T.for_each([&](std::size_t s) {
          if (within.test(s)) x.set(s);
        });
        while (true) {
          Bitset next = x;
          next |= pre(alpha.first(), x, within);
          if (next == x) return x;
          x = std::move(next);
        }
      }
    }
    return Bitset(count_);
  }

  // One pass over every box demand. With prune, failing atoms leave `alive`
  // and the return value reports a change; without, returns whether every
  // demand is met.
  bool sweep(Bitset& alive, bool prune) {
    bool changed = false;
    for (std::size_t i : demands_) {
      const Position& p = pos_[i];
      for (int v = 0; v < n_; ++v) {
        std::vector<std::size_t> demanding;
        alive.for_each([&](std::size_t s) {
          if (val(s, i) == v) demanding.push_back(s);
        });
        if (demanding.empty()) continue;
        Bitset targets(count_);
        alive.for_each([&](std::size_t t) {
          if (val(t, p.a) <= v) targets.set(t);
        });
        Bitset ok = pre(*programs_[i], targets, alive);
        for (std::size_t s : demanding) {
          if (ok.test(s)) continue;
          if (!prune) return false;
          alive.reset(s);
          changed = true;
        }
      }
    }
    return prune ? changed : true;
  }

  std::optional<std::vector<std::size_t>> extend(std::vector<std::size_t>& current, const Bitset& alive,
                                                 std::size_t limit,
                                                 std::set<std::vector<std::size_t>>& visited) {
    spend(1);
    ++stats_.nodes_explored;
    std::vector<std::size_t> key = current;
    std::sort(key.begin(), key.end());
    if (!visited.insert(key).second) return std::nullopt;

    Bitset members(count_);
    for (std::size_t s : current) members.set(s);
    if (sweep(members, false)) return current;
    if (current.size() >= limit) return std::nullopt;

    // a witness path leaving the set enters it through a successor
    std::vector<std::size_t> frontier;
    alive.for_each([&](std::size_t t) {
      if (members.test(t)) return;
      for (std::size_t s : current) {
        if (any_edge(s, t)) {
          frontier.push_back(t);
          return;
        }
      }
    });
    for (std::size_t t : frontier) {
      current.push_back(t);
      auto found = extend(current, alive, limit, visited);
      current.pop_back();
      if (found) return found;
    }
    return std::nullopt;
  }

  Formula phi_;
  ClosureSet fl_;
  Resolution resolution_;
  int n_;
  std::size_t L_ = 0;
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
  SatStatistics& stats_;

  std::vector<Position> pos_;
  std::vector<std::optional<Program>> programs_;
  std::size_t root_ = 0;
  std::vector<std::size_t> free_;
  std::vector<std::size_t> demands_;
  std::vector<std::size_t> order_;
  std::map<std::string, std::size_t> atom_ids_;
  std::vector<std::string> atom_names_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> atom_boxes_;

  std::vector<std::uint8_t> data_;
  std::size_t count_ = 0;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Shared driver: want_true selects satisfiability (phi = 1 at the root) or
// refutation (phi < 1 at the root).
SatResult decide(const Formula& phi, Resolution r, const SatOptions& options, bool want_true) {
  if (options.max_worlds < 1) throw Error("max_worlds must be at least 1");
  auto start = std::chrono::steady_clock::now();
  SatResult result{UnsatisfiableWithinBound{0, false}, {}};
  AtomDecider decider(phi, r, options.state_budget, result.stats);
  decider.generate();
  Bitset alive = decider.eliminate();
  auto roots = decider.roots(alive, want_true);

  if (roots.empty()) {
    result.verdict = UnsatisfiableWithinBound{decider.completeness_bound(), true};
  } else {
    auto fallback = decider.generated(roots.front(), alive);
    std::size_t limit = std::min(options.max_worlds, fallback.size() - 1);
    auto chosen = decider.smallest(roots, alive, limit);
    if (!chosen && fallback.size() <= options.max_worlds) chosen = fallback;
    if (chosen) {
      KripkeModel witness = decider.build(*chosen);
      int at_root = value(witness, 0, phi).numerator();
      if (want_true ? at_root != r.steps() : at_root == r.steps()) {
        throw std::logic_error("satisfiability witness failed verification");
      }
      result.verdict = Satisfiable{std::move(witness), 0};
    } else {
      result.verdict = UnsatisfiableWithinBound{options.max_worlds, false};
      result.stats.satisfiable_beyond_bound = true;
    }
  }

  if (options.cross_check_with_oracle && options.max_worlds <= 3) {
    Formula target = want_true ? phi : neg(power(phi, r.steps()));
    std::optional<SatResult> oracle;
    for (std::size_t k = 1; k <= options.max_worlds && !oracle; ++k) {
      auto attempt = enumerate_oracle(target, r, k);
      if (attempt.satisfiable()) oracle = std::move(attempt);
    }
    if (oracle.has_value() != result.satisfiable()) {
      result.stats.oracle_disagreement = true;
      if (oracle) {
        result.verdict = std::move(oracle->verdict);
      } else {
        result.verdict = UnsatisfiableWithinBound{options.max_worlds, false};
      }
    }
  }
  result.stats.wall_time_ms = elapsed_ms(start);
  return result;
}

}  // namespace

SatResult decide_sat(const Formula& phi, Resolution n, const SatOptions& options) {
  return decide(phi, n, options, true);
}

SatResult decide_sat(const Formula& phi, Resolution n, std::size_t max_worlds) {
  SatOptions options;
  options.max_worlds = max_worlds;
  return decide_sat(phi, n, options);
}

SatResult decide_valid(const Formula& phi, Resolution n, const SatOptions& options) {
  return decide(phi, n, options, false);
}

SatResult decide_valid(const Formula& phi, Resolution n, std::size_t max_worlds) {
  SatOptions options;
  options.max_worlds = max_worlds;
  return decide_valid(phi, n, options);
}

SatResult enumerate_oracle(const Formula& phi, Resolution r, std::size_t exact_worlds,
                           std::size_t guard) {
  if (exact_worlds == 0) throw Error("a model needs at least one world");
  if (exact_worlds > guard) {
    throw Error("enumeration over " + std::to_string(exact_worlds) +
                " worlds exceeds the guard of " + std::to_string(guard));
  }
  auto start = std::chrono::steady_clock::now();
  const std::size_t k = exact_worlds;
  const int n = r.steps();
  EvaluationPlan plan({phi});
  EvaluationPlan::Workspace ws;

  RawModel raw;
  raw.worlds = k;
  raw.steps = n;
  raw.atoms.assign(plan.atoms().size(), Relation(k));
  raw.variables.assign(plan.variables().size(), std::vector<int>(k, 0));

  // digits: one bit per (atom, u, v), then one Ł_n value per (variable, world)
  struct Digit {
    bool edge;
    std::size_t which;
    std::size_t u;
    std::size_t v;
  };
  std::vector<Digit> digits;
  for (std::size_t a = 0; a < raw.atoms.size(); ++a) {
    for (std::size_t u = 0; u < k; ++u) {
      for (std::size_t v = 0; v < k; ++v) digits.push_back({true, a, u, v});
    }
  }
  for (std::size_t x = 0; x < raw.variables.size(); ++x) {
    for (std::size_t w = 0; w < k; ++w) digits.push_back({false, x, w, 0});
  }
  std::vector<int> state(digits.size(), 0);

  SatResult result{UnsatisfiableWithinBound{0, false}, {}};
  result.stats.closure_size = fl_closure(phi).size();
  while (true) {
    ++result.stats.candidates_enumerated;
    plan.run(raw, ws);
    auto vs = plan.values(ws, 0);
    for (std::size_t w = 0; w < k; ++w) {
      if (vs[w] != n) continue;
      std::vector<std::string> names;
      for (std::size_t i = 0; i < k; ++i) names.push_back("w" + std::to_string(i));
      KripkeModel m(r, names);
      for (std::size_t a = 0; a < raw.atoms.size(); ++a) m.set_relation(plan.atoms()[a], raw.atoms[a]);
      for (std::size_t x = 0; x < raw.variables.size(); ++x) {
        m.set_valuation(plan.variables()[x], raw.variables[x]);
      }
      result.verdict = Satisfiable{std::move(m), w};
      result.stats.wall_time_ms = elapsed_ms(start);
      return result;
    }

    std::size_t i = 0;
    for (; i < digits.size(); ++i) {
      const Digit& d = digits[i];
      int top = d.edge ? 1 : n;
      bool carry = state[i] == top;
      state[i] = carry ? 0 : state[i] + 1;
      if (d.edge) {
        if (state[i]) {
          raw.atoms[d.which].insert(d.u, d.v);
        } else {
          raw.atoms[d.which].erase(d.u, d.v);
        }
      } else {
        raw.variables[d.which][d.u] = state[i];
      }
      if (!carry) break;
    }
    if (i == digits.size()) break;
  }
  std::uint64_t bound = saturating_power(static_cast<std::uint64_t>(n) + 1, result.stats.closure_size);
  result.verdict = UnsatisfiableWithinBound{k, k >= bound};
  result.stats.wall_time_ms = elapsed_ms(start);
  return result;
}

}  // namespace mvpdl
