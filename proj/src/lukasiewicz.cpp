#include "mvpdl/lukasiewicz.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mvpdl/error.hpp"

namespace mvpdl {

void Assignment::set(const std::string& name, TruthValue v) {
  if (!(v.resolution() == resolution_)) {
    throw ResolutionMismatch(resolution_.steps(), v.resolution().steps());
  }
  values_[name] = v.numerator();
}

std::optional<TruthValue> Assignment::find(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) return std::nullopt;
  return TruthValue(it->second, resolution_);
}

namespace {

// Box-free formula flattened into a topologically ordered instruction list.
class PropositionalPlan {
 public:
  explicit PropositionalPlan(const Formula& f) { root_ = add(f); }

  const std::vector<std::string>& variables() const { return var_names_; }

  int evaluate(const std::vector<int>& var_values, int n, std::vector<int>& scratch) const {
    scratch.resize(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      const Op& op = ops_[i];
      switch (op.kind) {
        case FormulaKind::Var:
          scratch[i] = var_values[op.a];
          break;
        case FormulaKind::Zero:
          scratch[i] = 0;
          break;
        case FormulaKind::Not:
          scratch[i] = luk::neg(scratch[op.a], n);
          break;
        case FormulaKind::Implies:
          scratch[i] = luk::implies(scratch[op.a], scratch[op.b], n);
          break;
        case FormulaKind::Box:
          break;
      }
    }
    return scratch[root_];
  }

 private:
  struct Op {
    FormulaKind kind;
    std::size_t a = 0;
    std::size_t b = 0;
  };

  std::size_t add(const Formula& f) {
    auto it = seen_.find(f.identity());
    if (it != seen_.end()) return it->second;
    Op op{f.kind()};
    switch (f.kind()) {
      case FormulaKind::Var: {
        auto v = var_index_.find(f.name());
        if (v == var_index_.end()) {
          v = var_index_.emplace(f.name(), var_names_.size()).first;
          var_names_.push_back(f.name());
        }
        op.a = v->second;
        break;
      }
      case FormulaKind::Zero:
        break;
      case FormulaKind::Not:
        op.a = add(f.first());
        break;
      case FormulaKind::Implies:
        op.a = add(f.first());
        op.b = add(f.second());
        break;
      case FormulaKind::Box:
        throw Error("formula contains a modality; propositional evaluation is undefined");
    }
    ops_.push_back(op);
    seen_.emplace(f.identity(), ops_.size() - 1);
    return ops_.size() - 1;
  }

  std::vector<Op> ops_;
  std::unordered_map<const void*, std::size_t> seen_;
  std::unordered_map<std::string, std::size_t> var_index_;
  std::vector<std::string> var_names_;
  std::size_t root_ = 0;
};

}  // namespace

TruthValue eval_propositional(const Formula& f, const Assignment& a) {
  PropositionalPlan plan(f);
  std::vector<int> values;
  for (const auto& name : plan.variables()) {
    auto v = a.find(name);
    if (!v) throw UnboundVariable(name);
    values.push_back(v->numerator());
  }
  std::vector<int> scratch;
  int n = a.resolution().steps();
  return TruthValue(plan.evaluate(values, n, scratch), a.resolution());
}

std::optional<Assignment> find_counter_assignment(const Formula& f, Resolution r) {
  PropositionalPlan plan(f);
  std::vector<std::string> names = plan.variables();
  // odometer over variables in name order for a reproducible counterexample
  std::vector<std::size_t> order(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return names[x] < names[y]; });

  int n = r.steps();
  std::vector<int> values(names.size(), 0);
  std::vector<int> scratch;
  while (true) {
    if (plan.evaluate(values, n, scratch) != n) {
      Assignment counter(r);
      for (std::size_t i = 0; i < names.size(); ++i) counter.set(names[i], TruthValue(values[i], r));
      return counter;
    }
    std::size_t k = order.size();
    while (k > 0) {
      std::size_t slot = order[k - 1];
      if (values[slot] < n) {
        ++values[slot];
        break;
      }
      values[slot] = 0;
      --k;
    }
    if (k == 0) return std::nullopt;
  }
}

bool is_tautology_prop(const Formula& f, Resolution n) {
  return !find_counter_assignment(f, n).has_value();
}

namespace {

// Breadth-first search over unary maps Ł_n -> Ł_n reachable from the
// identity by post-composing x (+) x and x (.) x. The map space is finite,
// so the search terminates; the first formula reaching each threshold wins.
std::vector<Formula> search_thresholds(int n) {
  using Table = std::vector<int>;
  struct TableHash {
    std::size_t operator()(const Table& t) const {
      std::size_t h = 0;
      for (int v : t) h = h * 31 + static_cast<std::size_t>(v);
      return h;
    }
  };

  std::vector<std::optional<Formula>> found(n + 1);
  int missing = n;
  auto record = [&](const Table& t, const Formula& f) {
    for (int i = 1; i <= n; ++i) {
      if (found[i]) continue;
      bool match = true;
      for (int x = 0; x <= n && match; ++x) match = t[x] == (x >= i ? n : 0);
      if (match) {
        found[i] = f;
        --missing;
      }
    }
  };

  Table identity(n + 1);
  for (int x = 0; x <= n; ++x) identity[x] = x;
  Formula p = var(kUnaryVariable);

  std::unordered_map<Table, bool, TableHash> visited{{identity, true}};
  std::deque<std::pair<Table, Formula>> queue{{identity, p}};
  record(identity, p);
  while (!queue.empty() && missing > 0) {
    auto [table, formula] = std::move(queue.front());
    queue.pop_front();
    for (int op = 0; op < 2; ++op) {
      Table next(n + 1);
      for (int x = 0; x <= n; ++x) {
        next[x] = op == 0 ? luk::oplus(table[x], table[x], n) : luk::odot(table[x], table[x], n);
      }
      if (!visited.emplace(next, true).second) continue;
      Formula composed = op == 0 ? oplus(formula, formula) : odot(formula, formula);
      record(next, composed);
      queue.emplace_back(std::move(next), composed);
    }
  }
  if (missing > 0) {
    throw std::logic_error("no threshold composition found for n=" + std::to_string(n));
  }
  std::vector<Formula> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) out.push_back(*found[i]);
  return out;
}

std::shared_mutex threshold_mutex;
std::unordered_map<int, std::vector<Formula>> threshold_cache;

const std::vector<Formula>& thresholds(int n) {
  {
    std::shared_lock lock(threshold_mutex);
    auto it = threshold_cache.find(n);
    if (it != threshold_cache.end()) return it->second;
  }
  auto computed = search_thresholds(n);
  std::unique_lock lock(threshold_mutex);
  // unordered_map references stay valid across rehashing
  return threshold_cache.try_emplace(n, std::move(computed)).first->second;
}

}  // namespace

Formula synth_tau(int i, Resolution r) {
  int n = r.steps();
  if (i < 0 || i > n + 1) {
    throw Error("threshold index " + std::to_string(i) + " outside 0.." + std::to_string(n + 1));
  }
  Formula p = var(kUnaryVariable);
  if (i == 0) return oplus(p, neg(p));
  if (i == n + 1) return neg(oplus(p, neg(p)));
  return thresholds(n)[i - 1];
}

Formula synth_indicator(int i, Resolution r) {
  if (i < 0 || i > r.steps()) {
    throw Error("indicator index " + std::to_string(i) + " outside 0.." +
                std::to_string(r.steps()));
  }
  return land(synth_tau(i, r), neg(synth_tau(i + 1, r)));
}

Formula apply_unary(const Formula& unary, const Formula& arg) {
  return substitute(unary, {{kUnaryVariable, arg}});
}

}  // namespace mvpdl
