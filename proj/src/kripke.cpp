#include "mvpdl/kripke.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "mvpdl/error.hpp"

namespace mvpdl {

Relation::Relation(std::size_t size)
    : size_(size), words_((size + 63) / 64), bits_(size * ((size + 63) / 64), 0) {}

Relation Relation::identity(std::size_t size) {
  Relation r(size);
  for (std::size_t u = 0; u < size; ++u) r.insert(u, u);
  return r;
}

bool Relation::empty() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t Relation::pair_count() const {
  std::size_t count = 0;
  for (auto w : bits_) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

std::vector<std::size_t> Relation::successors(std::size_t u) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < size_; ++v) {
    if (contains(u, v)) out.push_back(v);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> Relation::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < size_; ++u) {
    for (std::size_t v = 0; v < size_; ++v) {
      if (contains(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

Relation Relation::compose(const Relation& s) const {
  Relation out(size_);
  for (std::size_t u = 0; u < size_; ++u) {
    std::uint64_t* dst = out.mutable_row(u);
    for (std::size_t v = 0; v < size_; ++v) {
      if (!contains(u, v)) continue;
      const std::uint64_t* src = s.row(v);
      for (std::size_t k = 0; k < words_; ++k) dst[k] |= src[k];
    }
  }
  return out;
}

Relation Relation::unite(const Relation& s) const {
  Relation out = *this;
  for (std::size_t k = 0; k < bits_.size(); ++k) out.bits_[k] |= s.bits_[k];
  return out;
}

Relation Relation::reflexive_transitive_closure() const {
  Relation out = unite(identity(size_));
  // Warshall over bit rows
  for (std::size_t k = 0; k < size_; ++k) {
    const std::uint64_t* via = out.row(k);
    for (std::size_t u = 0; u < size_; ++u) {
      if (u == k || !out.contains(u, k)) continue;
      std::uint64_t* dst = out.mutable_row(u);
      for (std::size_t w = 0; w < words_; ++w) dst[w] |= via[w];
    }
  }
  return out;
}

bool Relation::subset_of(const Relation& s) const {
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k] & ~s.bits_[k]) return false;
  }
  return true;
}

KripkeModel::KripkeModel(Resolution resolution, std::vector<std::string> worlds)
    : resolution_(resolution), worlds_(std::move(worlds)) {
  if (worlds_.empty()) throw Error("a model needs at least one world");
  for (std::size_t i = 0; i < worlds_.size(); ++i) {
    if (!index_.emplace(worlds_[i], i).second) throw Error("duplicate world '" + worlds_[i] + "'");
  }
}

std::size_t KripkeModel::world_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw UnknownWorld(name);
  return it->second;
}

std::optional<std::size_t> KripkeModel::find_world(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void KripkeModel::declare_program(const std::string& atom) {
  relations_.try_emplace(atom, worlds_.size());
}

void KripkeModel::add_edge(const std::string& atom, std::size_t u, std::size_t v) {
  if (u >= worlds_.size() || v >= worlds_.size()) throw Error("edge endpoint out of range");
  relations_.try_emplace(atom, worlds_.size()).first->second.insert(u, v);
}

void KripkeModel::add_edge(const std::string& atom, const std::string& u, const std::string& v) {
  add_edge(atom, world_index(u), world_index(v));
}

void KripkeModel::set_relation(const std::string& atom, Relation r) {
  if (r.size() != worlds_.size()) throw Error("relation size differs from world count");
  relations_.insert_or_assign(atom, std::move(r));
}

void KripkeModel::set_value(const std::string& variable, std::size_t world, TruthValue v) {
  if (!(v.resolution() == resolution_)) {
    throw ResolutionMismatch(resolution_.steps(), v.resolution().steps());
  }
  if (world >= worlds_.size()) throw Error("world index out of range");
  auto& row = valuation_.try_emplace(variable, std::vector<int>(worlds_.size(), -1)).first->second;
  row[world] = v.numerator();
}

void KripkeModel::set_valuation(const std::string& variable, std::vector<int> numerators) {
  if (numerators.size() != worlds_.size()) throw Error("valuation size differs from world count");
  for (int x : numerators) {
    if (x < 0 || x > resolution_.steps()) throw Error("valuation numerator out of range");
  }
  valuation_.insert_or_assign(variable, std::move(numerators));
}

const Relation* KripkeModel::find_relation(const std::string& atom) const {
  auto it = relations_.find(atom);
  return it == relations_.end() ? nullptr : &it->second;
}

TruthValue KripkeModel::atomic_value(const std::string& variable, std::size_t world) const {
  auto it = valuation_.find(variable);
  if (it == valuation_.end()) throw UnboundVariable(variable);
  if (world >= worlds_.size()) throw Error("world index out of range");
  if (it->second[world] < 0) {
    throw Error("variable '" + variable + "' has no value at world '" + worlds_[world] + "'");
  }
  return TruthValue(it->second[world], resolution_);
}

void KripkeModel::validate() const {
  for (const auto& [name, row] : valuation_) {
    for (std::size_t w = 0; w < row.size(); ++w) {
      if (row[w] < 0) {
        throw Error("variable '" + name + "' has no value at world '" + worlds_[w] + "'");
      }
    }
  }
}

EvaluationPlan::EvaluationPlan(const std::vector<Formula>& formulas,
                               const std::vector<Program>& programs) {
  for (const auto& f : formulas) formula_roots_.push_back(compile(f));
  for (const auto& p : programs) program_roots_.push_back(compile(p));
  formula_slot_of_.clear();
  program_slot_of_.clear();
}

std::size_t EvaluationPlan::compile(const Formula& f) {
  auto it = formula_slot_of_.find(f);
  if (it != formula_slot_of_.end()) return it->second;
  Step step{Op::Zero, 0};
  switch (f.kind()) {
    case FormulaKind::Var: {
      step.op = Op::Var;
      auto [v, fresh] = variable_index_.try_emplace(f.name(), variable_names_.size());
      if (fresh) variable_names_.push_back(f.name());
      step.a = v->second;
      break;
    }
    case FormulaKind::Zero:
      break;
    case FormulaKind::Not:
      step.op = Op::Not;
      step.a = compile(f.first());
      break;
    case FormulaKind::Implies:
      step.op = Op::Implies;
      step.a = compile(f.first());
      step.b = compile(f.second());
      break;
    case FormulaKind::Box:
      step.op = Op::Box;
      step.a = compile(f.program());
      step.b = compile(f.first());
      break;
  }
  step.out = formula_slots_++;
  steps_.push_back(step);
  formula_slot_of_.emplace(f, step.out);
  return step.out;
}

std::size_t EvaluationPlan::compile(const Program& p) {
  auto it = program_slot_of_.find(p);
  if (it != program_slot_of_.end()) return it->second;
  Step step{Op::Atom, 0};
  switch (p.kind()) {
    case ProgramKind::Atomic: {
      auto [a, fresh] = atom_index_.try_emplace(p.name(), atom_names_.size());
      if (fresh) atom_names_.push_back(p.name());
      step.a = a->second;
      break;
    }
    case ProgramKind::Test:
      step.op = Op::Test;
      step.a = compile(p.test());
      break;
    case ProgramKind::Seq:
      step.op = Op::Seq;
      step.a = compile(p.first());
      step.b = compile(p.second());
      break;
    case ProgramKind::Union:
      step.op = Op::Union;
      step.a = compile(p.first());
      step.b = compile(p.second());
      break;
    case ProgramKind::Star:
      step.op = Op::Star;
      step.a = compile(p.first());
      break;
  }
  step.out = program_slots_++;
  steps_.push_back(step);
  program_slot_of_.emplace(p, step.out);
  return step.out;
}

RawModel EvaluationPlan::bind(const KripkeModel& m) const {
  RawModel raw;
  raw.worlds = m.world_count();
  raw.steps = m.resolution().steps();
  for (const auto& name : atom_names_) {
    const Relation* r = m.find_relation(name);
    raw.atoms.push_back(r ? *r : Relation(raw.worlds));
  }
  for (const auto& name : variable_names_) {
    auto it = m.valuation().find(name);
    if (it == m.valuation().end()) throw UnboundVariable(name);
    for (std::size_t w = 0; w < raw.worlds; ++w) {
      if (it->second[w] < 0) {
        throw Error("variable '" + name + "' has no value at world '" + m.worlds()[w] + "'");
      }
    }
    raw.variables.push_back(it->second);
  }
  return raw;
}

void EvaluationPlan::run(const RawModel& m, Workspace& ws) const {
  const std::size_t n_worlds = m.worlds;
  const int n = m.steps;
  ws.worlds = n_worlds;
  ws.values.resize(formula_slots_ * n_worlds);
  ws.relations.resize(program_slots_);
  int* vals = ws.values.data();
  for (const Step& s : steps_) {
    switch (s.op) {
      case Op::Var:
        std::copy(m.variables[s.a].begin(), m.variables[s.a].end(), vals + s.out * n_worlds);
        break;
      case Op::Zero:
        std::fill_n(vals + s.out * n_worlds, n_worlds, 0);
        break;
      case Op::Not: {
        const int* x = vals + s.a * n_worlds;
        int* out = vals + s.out * n_worlds;
        for (std::size_t w = 0; w < n_worlds; ++w) out[w] = luk::neg(x[w], n);
        break;
      }
      case Op::Implies: {
        const int* x = vals + s.a * n_worlds;
        const int* y = vals + s.b * n_worlds;
        int* out = vals + s.out * n_worlds;
        for (std::size_t w = 0; w < n_worlds; ++w) out[w] = luk::implies(x[w], y[w], n);
        break;
      }
      case Op::Box: {
        const Relation& r = ws.relations[s.a];
        const int* body = vals + s.b * n_worlds;
        int* out = vals + s.out * n_worlds;
        for (std::size_t w = 0; w < n_worlds; ++w) {
          int meet = n;
          const std::uint64_t* row = r.row(w);
          for (std::size_t k = 0; k < r.words(); ++k) {
            for (std::uint64_t bits = row[k]; bits != 0; bits &= bits - 1) {
              std::size_t v = k * 64 + static_cast<std::size_t>(std::countr_zero(bits));
              meet = std::min(meet, body[v]);
            }
          }
          out[w] = meet;
        }
        break;
      }
      case Op::Atom:
        ws.relations[s.out] = m.atoms[s.a];
        break;
      case Op::Test: {
        const int* x = vals + s.a * n_worlds;
        Relation r(n_worlds);
        for (std::size_t w = 0; w < n_worlds; ++w) {
          if (x[w] == n) r.insert(w, w);
        }
        ws.relations[s.out] = std::move(r);
        break;
      }
      case Op::Seq:
        ws.relations[s.out] = ws.relations[s.a].compose(ws.relations[s.b]);
        break;
      case Op::Union:
        ws.relations[s.out] = ws.relations[s.a].unite(ws.relations[s.b]);
        break;
      case Op::Star:
        ws.relations[s.out] = ws.relations[s.a].reflexive_transitive_closure();
        break;
    }
  }
}

std::span<const int> EvaluationPlan::values(const Workspace& ws, std::size_t i) const {
  return {ws.values.data() + formula_roots_.at(i) * ws.worlds, ws.worlds};
}

const Relation& EvaluationPlan::relation(const Workspace& ws, std::size_t i) const {
  return ws.relations.at(program_roots_.at(i));
}

Relation relation_of(const KripkeModel& m, const Program& alpha) {
  EvaluationPlan plan({}, {alpha});
  EvaluationPlan::Workspace ws;
  plan.run(plan.bind(m), ws);
  return plan.relation(ws, 0);
}

std::vector<int> values(const KripkeModel& m, const Formula& f) {
  EvaluationPlan plan({f});
  EvaluationPlan::Workspace ws;
  plan.run(plan.bind(m), ws);
  auto span = plan.values(ws, 0);
  return {span.begin(), span.end()};
}

TruthValue value(const KripkeModel& m, std::size_t world, const Formula& f) {
  if (world >= m.world_count()) throw UnknownWorld("#" + std::to_string(world));
  return TruthValue(values(m, f)[world], m.resolution());
}

TruthValue value(const KripkeModel& m, const std::string& world, const Formula& f) {
  return value(m, m.world_index(world), f);
}

bool satisfies(const KripkeModel& m, std::size_t world, const Formula& f) {
  return value(m, world, f).is_top();
}

std::optional<std::size_t> find_falsifying_world(const KripkeModel& m, const Formula& f) {
  auto vs = values(m, f);
  for (std::size_t w = 0; w < vs.size(); ++w) {
    if (vs[w] != m.resolution().steps()) return w;
  }
  return std::nullopt;
}

bool globally_true(const KripkeModel& m, const Formula& f) {
  return !find_falsifying_world(m, f).has_value();
}

KripkeModel random_model(std::uint64_t seed, Resolution resolution, std::size_t world_count,
                         const std::vector<std::string>& atoms,
                         const std::vector<std::string>& variables, double edge_density) {
  if (world_count == 0) throw Error("a model needs at least one world");
  // raw engine output only: library distributions differ between vendors
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const auto values = static_cast<std::uint64_t>(resolution.value_count());

  std::vector<std::string> names;
  for (std::size_t i = 0; i < world_count; ++i) names.push_back("w" + std::to_string(i));
  KripkeModel m(resolution, names);
  for (const auto& atom : atoms) {
    m.declare_program(atom);
    for (std::size_t u = 0; u < world_count; ++u) {
      for (std::size_t v = 0; v < world_count; ++v) {
        if (unit() < edge_density) m.add_edge(atom, u, v);
      }
    }
  }
  for (const auto& var : variables) {
    std::vector<int> row(world_count);
    for (auto& x : row) x = static_cast<int>(rng() % values);
    m.set_valuation(var, std::move(row));
  }
  return m;
}

}  // namespace mvpdl
