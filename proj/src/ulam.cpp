#include "mvpdl/ulam.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include "mvpdl/error.hpp"
#include "mvpdl/lukasiewicz.hpp"

namespace mvpdl::ulam {

namespace {

constexpr std::size_t kMaxElements = 16;
constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

void check_size(std::size_t m) {
  if (m < 1 || m > kMaxElements) {
    throw Error("search space size must be in 1.." + std::to_string(kMaxElements));
  }
}

std::string variable_name(std::size_t element) { return "p_" + std::to_string(element); }

}  // namespace

KnowledgeState::KnowledgeState(Resolution n, std::vector<int> numerators)
    : resolution_(n), numerators_(std::move(numerators)) {
  for (int v : numerators_) {
    if (v < 0 || v > n.steps()) throw Error("knowledge value out of range");
  }
}

KnowledgeState KnowledgeState::initial(Resolution n, std::size_t m) {
  return KnowledgeState(n, std::vector<int>(m, n.steps()));
}

TruthValue KnowledgeState::at(std::size_t element) const {
  if (element < 1 || element > numerators_.size()) throw Error("no element " + std::to_string(element));
  return TruthValue(numerators_[element - 1], resolution_);
}

std::string KnowledgeState::name() const {
  std::string out = "f";
  for (std::size_t i = 0; i < numerators_.size(); ++i) {
    if (i) out += '_';
    out += std::to_string(numerators_[i]);
  }
  return out;
}

Question Question::complement(std::size_t m) const {
  std::uint64_t all = m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  return Question{~members & all};
}

std::string Question::name() const {
  std::string out = "Q{";
  bool first = true;
  for (std::size_t e = 1; e <= 64; ++e) {
    if (!contains(e)) continue;
    if (!first) out += ',';
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

Question parse_question(const std::string& text, std::size_t m) {
  std::string_view s = text;
  bool negated = !s.empty() && s.front() == '~';
  if (negated) s.remove_prefix(1);
  if (s.size() < 3 || s.substr(0, 2) != "Q{" || s.back() != '}') {
    throw Error("unknown question '" + text + "'");
  }
  s = s.substr(2, s.size() - 3);
  Question q;
  std::size_t pos = 0;
  while (!s.empty() && pos <= s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string_view::npos) end = s.size();
    std::string item(s.substr(pos, end - pos));
    if (item.empty() || !std::all_of(item.begin(), item.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw Error("unknown question '" + text + "'");
    }
    std::size_t e = std::stoul(item);
    if (e < 1 || e > m) throw Error("question '" + text + "' names an element outside 1.." + std::to_string(m));
    q.members |= std::uint64_t{1} << (e - 1);
    pos = end + 1;
  }
  return negated ? q.complement(m) : q;
}

KnowledgeState GameConfig::start() const {
  check_size(m);
  if (!initial) return KnowledgeState::initial(n, m);
  if (initial->size() != m) throw Error("initial state does not cover the search space");
  if (!(initial->resolution() == n)) throw ResolutionMismatch(n.steps(), initial->resolution().steps());
  return *initial;
}

KnowledgeState positive_answer(Question q, std::size_t m, Resolution n) {
  std::vector<int> values(m);
  for (std::size_t e = 1; e <= m; ++e) values[e - 1] = q.contains(e) ? n.steps() : n.steps() - 1;
  return KnowledgeState(n, std::move(values));
}

KnowledgeState update_state(const KnowledgeState& f, Question q, bool positive) {
  Resolution n = f.resolution();
  KnowledgeState answer = positive_answer(positive ? q : q.complement(f.size()), f.size(), n);
  std::vector<int> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = luk::odot(f.numerators()[i], answer.numerators()[i], n.steps());
  }
  return KnowledgeState(n, std::move(out));
}

namespace {

struct StateSpace {
  std::vector<KnowledgeState> states;
  std::vector<std::size_t> distance;
  std::map<std::vector<int>, std::size_t> index;

  std::size_t add(KnowledgeState s, std::size_t d, std::size_t cap) {
    auto [it, fresh] = index.emplace(s.numerators(), states.size());
    if (fresh) {
      if (states.size() >= cap) throw ResourceLimitExceeded("game model exceeds " + std::to_string(cap) + " states");
      states.push_back(std::move(s));
      distance.push_back(d);
    }
    return it->second;
  }
};

// Breadth-first over all questions; max_depth of kUnreached explores the
// whole reachable closure.
StateSpace explore(const KnowledgeState& start, std::size_t m, std::size_t max_depth, std::size_t cap) {
  StateSpace space;
  space.add(start, 0, cap);
  std::uint64_t questions = std::uint64_t{1} << m;
  for (std::size_t next = 0; next < space.states.size(); ++next) {
    std::size_t d = space.distance[next];
    if (d >= max_depth) continue;
    for (std::uint64_t bits = 0; bits < questions; ++bits) {
      for (bool positive : {true, false}) {
        space.add(update_state(space.states[next], Question{bits}, positive), d + 1, cap);
      }
    }
  }
  return space;
}

std::vector<std::size_t> distances_from(const std::vector<KnowledgeState>& states,
                                        const std::map<std::vector<int>, std::size_t>& index,
                                        std::size_t start, std::size_t m) {
  std::vector<std::size_t> dist(states.size(), kUnreached);
  std::deque<std::size_t> queue{start};
  dist[start] = 0;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
      for (bool positive : {true, false}) {
        auto it = index.find(update_state(states[u], Question{bits}, positive).numerators());
        if (it != index.end() && dist[it->second] == kUnreached) {
          dist[it->second] = dist[u] + 1;
          queue.push_back(it->second);
        }
      }
    }
  }
  return dist;
}

// Kripke model over the given states with edges for the listed questions.
GameModel assemble(StateSpace space, std::size_t m, Resolution n, const std::vector<Question>& questions) {
  std::vector<std::string> names;
  names.reserve(space.states.size());
  for (const auto& s : space.states) names.push_back(s.name());
  GameModel out{KripkeModel(n, std::move(names)), {}, {}, true};
  for (Question q : questions) {
    Relation rel(space.states.size());
    for (std::size_t u = 0; u < space.states.size(); ++u) {
      for (bool positive : {true, false}) {
        auto it = space.index.find(update_state(space.states[u], q, positive).numerators());
        if (it == space.index.end()) {
          out.closed = false;
        } else {
          rel.insert(u, it->second);
        }
      }
    }
    out.model.set_relation(q.name(), std::move(rel));
  }
  for (std::size_t e = 1; e <= m; ++e) {
    std::vector<int> row(space.states.size());
    for (std::size_t w = 0; w < space.states.size(); ++w) row[w] = space.states[w].numerators()[e - 1];
    out.model.set_valuation(variable_name(e), std::move(row));
  }
  out.states = std::move(space.states);
  out.distance = std::move(space.distance);
  return out;
}

std::vector<Question> all_questions(std::size_t m) {
  std::vector<Question> qs;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) qs.push_back(Question{bits});
  return qs;
}

StateSpace full_space(std::size_t m, Resolution n, std::size_t cap) {
  StateSpace space;
  std::vector<int> digits(m, 0);
  while (true) {
    space.add(KnowledgeState(n, digits), kUnreached, cap);
    std::size_t i = 0;
    while (i < m && digits[i] == n.steps()) digits[i++] = 0;
    if (i == m) break;
    ++digits[i];
  }
  return space;
}

}  // namespace

GameModel build_game_model(const GameConfig& cfg) {
  KnowledgeState start = cfg.start();
  StateSpace space;
  if (cfg.full_space) {
    space = full_space(cfg.m, cfg.n, cfg.state_cap);
    space.distance = distances_from(space.states, space.index, space.index.at(start.numerators()), cfg.m);
  } else {
    space = explore(start, cfg.m, cfg.depth, cfg.state_cap);
  }
  return assemble(std::move(space), cfg.m, cfg.n, all_questions(cfg.m));
}

std::optional<std::size_t> is_final(const KnowledgeState& f) {
  std::optional<std::size_t> found;
  for (std::size_t e = 1; e <= f.size(); ++e) {
    if (f.numerators()[e - 1] == 0) continue;
    if (found) return std::nullopt;
    found = e;
  }
  return found;
}

SpecResult check_spec(const GameConfig& cfg, const Formula& phi) {
  KnowledgeState start = cfg.start();
  ProgramSubstitution rename;
  std::vector<Question> used;
  for (const auto& atom : atomic_programs(phi)) {
    Question q = parse_question(atom, cfg.m);
    rename.emplace(atom, atomic(q.name()));
    if (std::find(used.begin(), used.end(), q) == used.end()) used.push_back(q);
  }
  Formula canonical = substitute(phi, {}, rename);

  StateSpace space = explore(start, cfg.m, kUnreached, cfg.state_cap);
  std::vector<std::size_t> within = space.distance;
  GameModel game = assemble(std::move(space), cfg.m, cfg.n, used);
  std::vector<int> vs = values(game.model, canonical);

  SpecResult result;
  for (std::size_t w = 0; w < vs.size(); ++w) {
    if (within[w] > cfg.depth) continue;
    ++result.states_checked;
    if (vs[w] != cfg.n.steps() && result.holds) {
      result.holds = false;
      result.counterexample = game.states[w];
    }
  }
  return result;
}

Formula threshold_on(int i, std::size_t element, Resolution n) {
  if (i <= 0) return one();
  return apply_unary(synth_tau(i, n), var(variable_name(element)));
}

Trajectory run(const GameConfig& cfg, const std::vector<Question>& questions, const std::string& answers) {
  if (questions.size() != answers.size()) throw Error("need one answer per question");
  Trajectory t;
  t.states.push_back(cfg.start());
  for (std::size_t k = 0; k < questions.size(); ++k) {
    if (answers[k] != '+' && answers[k] != '-') throw Error("answers are '+' or '-'");
    t.states.push_back(update_state(t.states.back(), questions[k], answers[k] == '+'));
  }
  t.final_element = is_final(t.states.back());
  return t;
}

}  // namespace mvpdl::ulam
