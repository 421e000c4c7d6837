#include "mvpdl/filtration.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mvpdl/error.hpp"
#include "mvpdl/lukasiewicz.hpp"

namespace mvpdl {

Partition equivalence_classes(const KripkeModel& m, const Formula& seed) {
  Partition out{fl_closure(seed), {}, {}, {}};
  EvaluationPlan plan(out.closure.members());
  EvaluationPlan::Workspace ws;
  plan.run(plan.bind(m), ws);

  std::map<std::vector<int>, std::vector<std::size_t>> groups;
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    std::vector<int> key;
    key.reserve(out.closure.size());
    for (std::size_t i = 0; i < out.closure.size(); ++i) key.push_back(plan.values(ws, i)[w]);
    groups[std::move(key)].push_back(w);
  }
  out.class_of.resize(m.world_count());
  for (auto& [key, members] : groups) {
    for (std::size_t w : members) out.class_of[w] = out.classes.size();
    out.keys.push_back(key);
    out.classes.push_back(std::move(members));
  }
  return out;
}

FiltrationResult filter_model(const KripkeModel& m, const Formula& seed) {
  Partition partition = equivalence_classes(m, seed);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < partition.classes.size(); ++c) names.push_back("c" + std::to_string(c));
  KripkeModel quotient(m.resolution(), names);

  for (const auto& [atom, r] : m.relations()) {
    quotient.declare_program(atom);
    for (auto [u, v] : r.pairs()) {
      quotient.add_edge(atom, partition.class_of[u], partition.class_of[v]);
    }
  }
  for (const auto& [variable, row] : m.valuation()) {
    std::vector<int> joined(partition.classes.size(), 0);
    for (std::size_t w = 0; w < row.size(); ++w) {
      auto& slot = joined[partition.class_of[w]];
      slot = std::max(slot, row[w]);
    }
    quotient.set_valuation(variable, std::move(joined));
  }
  return {std::move(quotient), std::move(partition), seed};
}

Formula characteristic_formula(const KripkeModel& m, const Formula& seed,
                               const std::vector<std::size_t>& worlds) {
  Partition partition = equivalence_classes(m, seed);
  std::set<std::size_t> chosen(worlds.begin(), worlds.end());
  for (std::size_t w : chosen) {
    if (w >= m.world_count()) throw UnknownWorld("#" + std::to_string(w));
  }

  const Resolution r = m.resolution();
  std::vector<Formula> disjuncts;
  for (std::size_t c = 0; c < partition.classes.size(); ++c) {
    const auto& members = partition.classes[c];
    auto inside = std::count_if(members.begin(), members.end(),
                                [&](std::size_t w) { return chosen.count(w) != 0; });
    if (inside == 0) continue;
    if (static_cast<std::size_t>(inside) != members.size()) {
      throw Error("world set is not a union of equivalence classes");
    }
    std::vector<Formula> conjuncts;
    const auto& fl = partition.closure.members();
    for (std::size_t i = 0; i < fl.size(); ++i) {
      conjuncts.push_back(apply_unary(synth_indicator(partition.keys[c][i], r), fl[i]));
    }
    disjuncts.push_back(land_all(conjuncts));
  }
  return lor_all(disjuncts);
}

}  // namespace mvpdl
