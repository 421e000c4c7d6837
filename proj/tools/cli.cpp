#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "mvpdl/error.hpp"
#include "mvpdl/filtration.hpp"
#include "mvpdl/kripke.hpp"
#include "mvpdl/lukasiewicz.hpp"
#include "mvpdl/proof.hpp"
#include "mvpdl/satisfiability.hpp"
#include "mvpdl/text.hpp"
#include "mvpdl/ulam.hpp"

namespace mvpdl::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Globals {
  std::optional<int> n;
  std::uint64_t seed = 1;
  bool json = false;
};

class Session {
 public:
  Session(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  Globals globals;

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  void emit(const Json& j) { out_ << j.dump(2) << "\n"; }

  Resolution require_n(const char* command) const {
    if (!globals.n) throw Error(std::string(command) + " needs --n");
    return Resolution(*globals.n);
  }

  KripkeModel load_model(const std::string& path) const {
    KripkeModel m = read_model_file(path);
    if (globals.n && *globals.n != m.resolution().steps()) {
      throw ResolutionMismatch(*globals.n, m.resolution().steps());
    }
    return m;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string world;
  std::string formula;
};

int cmd_eval(Session& s, const EvalArgs& a) {
  KripkeModel m = s.load_model(a.model);
  Formula phi = parse_formula(a.formula);
  TruthValue v = value(m, a.world, phi);
  if (s.globals.json) {
    s.emit(Json{{"world", a.world}, {"formula", to_string(phi)}, {"value", v.to_string()}});
  } else {
    s.out() << v.to_string() << "\n";
  }
  return kYes;
}

int cmd_check(Session& s, const EvalArgs& a) {
  KripkeModel m = s.load_model(a.model);
  Formula phi = parse_formula(a.formula);
  auto bad = find_falsifying_world(m, phi);
  if (s.globals.json) {
    Json j{{"formula", to_string(phi)}, {"globally_true", !bad}};
    if (bad) {
      j["world"] = m.worlds()[*bad];
      j["value"] = value(m, *bad, phi).to_string();
    }
    s.emit(j);
  } else if (bad) {
    s.out() << "not globally true: " << m.worlds()[*bad] << " has value " << value(m, *bad, phi) << "\n";
  } else {
    s.out() << "globally true\n";
  }
  return bad ? kNo : kYes;
}

int cmd_taut(Session& s, const std::string& text) {
  Resolution n = s.require_n("taut");
  Formula phi = parse_formula(text);
  auto counter = find_counter_assignment(phi, n);
  if (s.globals.json) {
    Json j{{"formula", to_string(phi)}, {"n", n.steps()}, {"tautology", !counter}};
    if (counter) {
      Json assignment = Json::object();
      for (const auto& [name, num] : counter->numerators()) {
        assignment[name] = TruthValue(num, n).to_string();
      }
      j["counter_assignment"] = assignment;
      j["value"] = eval_propositional(phi, *counter).to_string();
    }
    s.emit(j);
  } else if (counter) {
    s.out() << "not a tautology:";
    for (const auto& [name, num] : counter->numerators()) s.out() << " " << name << "=" << TruthValue(num, n);
    s.out() << " gives " << eval_propositional(phi, *counter) << "\n";
  } else {
    s.out() << "tautology\n";
  }
  return counter ? kNo : kYes;
}

int cmd_flclosure(Session& s, const std::string& text) {
  ClosureSet closure = fl_closure(parse_formula(text));
  if (s.globals.json) {
    Json list = Json::array();
    for (const auto& f : closure) list.push_back(to_string(f));
    s.emit(Json{{"size", closure.size()}, {"closure", list}});
  } else {
    for (const auto& f : closure) s.out() << to_string(f) << "\n";
  }
  return kYes;
}

struct FilterArgs {
  std::string model;
  std::string formula;
  std::string out;
};

int cmd_filter(Session& s, const FilterArgs& a) {
  KripkeModel m = s.load_model(a.model);
  FiltrationResult r = filter_model(m, parse_formula(a.formula));
  std::ostringstream text;
  text << format_model(r.quotient);
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    text << "# class " << m.worlds()[w] << " -> " << r.quotient.worlds()[r.partition.class_of[w]] << "\n";
  }
  if (!a.out.empty()) write_text(a.out, text.str());
  if (s.globals.json) {
    Json classes = Json::object();
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      classes[m.worlds()[w]] = r.quotient.worlds()[r.partition.class_of[w]];
    }
    s.emit(Json{{"closure_size", r.partition.closure.size()},
                {"classes", r.quotient.world_count()},
                {"class_of", classes},
                {"model", format_model(r.quotient)}});
  } else if (a.out.empty()) {
    s.out() << text.str();
  } else {
    s.out() << r.quotient.world_count() << " classes written to " << a.out << "\n";
  }
  return kYes;
}

struct DecideArgs {
  std::string formula;
  std::size_t max_worlds = 8;
  std::uint64_t budget = 1'000'000;
  bool cross_check = false;
};

Json statistics_json(const SatStatistics& st) {
  return Json{{"atoms_generated", st.atoms_generated},
              {"atoms_surviving", st.atoms_surviving},
              {"candidates_enumerated", st.candidates_enumerated},
              {"nodes_explored", st.nodes_explored},
              {"elimination_rounds", st.elimination_rounds},
              {"closure_size", st.closure_size},
              {"wall_time_ms", st.wall_time_ms},
              {"satisfiable_beyond_bound", st.satisfiable_beyond_bound},
              {"oracle_disagreement", st.oracle_disagreement}};
}

int cmd_decide(Session& s, const DecideArgs& a, bool validity) {
  Resolution n = s.require_n(validity ? "valid" : "sat");
  Formula phi = parse_formula(a.formula);
  SatOptions options;
  options.max_worlds = a.max_worlds;
  options.state_budget = a.budget;
  options.cross_check_with_oracle = a.cross_check;
  SatResult r = validity ? decide_valid(phi, n, options) : decide_sat(phi, n, options);

  // For validity, a model is a refutation.
  bool has_model = r.satisfiable() || r.stats.satisfiable_beyond_bound;
  bool yes = validity ? !has_model : has_model;
  std::string verdict;
  if (validity) {
    verdict = r.satisfiable() ? "refuted" : (r.stats.satisfiable_beyond_bound ? "refuted_beyond_bound" : "valid");
  } else {
    verdict = r.satisfiable() ? "satisfiable"
                              : (r.stats.satisfiable_beyond_bound ? "satisfiable_beyond_bound" : "unsatisfiable");
  }

  if (s.globals.json) {
    Json j{{"verdict", verdict}, {"formula", to_string(phi)}, {"n", n.steps()}};
    if (r.satisfiable()) {
      j["bound_used"] = r.model().witness.world_count();
      j["complete"] = true;
      j["witness"] = format_model(r.model().witness);
      j["world"] = r.model().witness.worlds()[r.model().world];
    } else {
      j["bound_used"] = r.unsat().bound_used;
      j["complete"] = r.unsat().complete;
      j["witness"] = nullptr;
    }
    j["statistics"] = statistics_json(r.stats);
    s.emit(j);
    return yes ? kYes : kNo;
  }

  if (r.satisfiable()) {
    const auto& w = r.model();
    s.out() << verdict << " at " << w.witness.worlds()[w.world] << " (value "
            << value(w.witness, w.world, phi) << ")\n"
            << format_model(w.witness);
  } else if (r.stats.satisfiable_beyond_bound) {
    s.out() << verdict << ": no " << (validity ? "countermodel" : "model") << " with at most "
            << r.unsat().bound_used << " worlds, but a larger one exists\n";
  } else {
    s.out() << verdict << "\n";
  }
  return yes ? kYes : kNo;
}

int cmd_prove(Session& s, const std::string& path) {
  std::optional<Resolution> fallback;
  if (s.globals.n) fallback = Resolution(*s.globals.n);
  Derivation d = read_derivation_file(path, fallback);
  if (s.globals.n && *s.globals.n != d.resolution.steps()) {
    throw ResolutionMismatch(*s.globals.n, d.resolution.steps());
  }
  auto violation = check_derivation(d);
  if (s.globals.json) {
    Json j{{"ok", !violation}, {"lines", d.lines.size()}, {"premises", d.premise_count()},
           {"theorem", !violation && d.is_theorem_derivation()}};
    if (violation) {
      j["line"] = violation->line + 1;
      j["reason"] = violation->reason;
    }
    s.emit(j);
  } else if (violation) {
    s.out() << "line " << violation->line + 1 << ": " << violation->reason << "\n";
  } else {
    s.out() << "checked " << d.lines.size() << " lines";
    if (d.is_theorem_derivation()) {
      s.out() << "; theorem\n";
    } else {
      s.out() << " from " << d.premise_count() << " premise" << (d.premise_count() == 1 ? "" : "s") << "\n";
    }
  }
  return violation ? kNo : kYes;
}

struct LiArgs {
  std::string formula;
  std::string program;
  bool sharp = false;
  std::string out;
};

int cmd_li(Session& s, const LiArgs& a) {
  Resolution n = s.require_n("li");
  Formula phi = parse_formula(a.formula);
  Program alpha = parse_program(a.program);
  Derivation d = a.sharp ? derive_loop_invariance_sharp(phi, alpha, n) : derive_loop_invariance(phi, alpha, n);
  std::string text = format_derivation(d);
  if (!a.out.empty()) write_text(a.out, text);
  if (s.globals.json) {
    s.emit(Json{{"lines", d.lines.size()}, {"derivation", text}});
  } else if (a.out.empty()) {
    s.out() << text;
  }
  return kYes;
}

struct RandomArgs {
  std::size_t worlds = 3;
  std::string atoms = "a";
  std::string vars = "p";
  double density = 0.3;
};

int cmd_random(Session& s, const RandomArgs& a) {
  Resolution n = s.require_n("random");
  KripkeModel m = random_model(s.globals.seed, n, a.worlds, split(a.atoms, ','), split(a.vars, ','), a.density);
  if (s.globals.json) {
    s.emit(Json{{"seed", s.globals.seed}, {"model", format_model(m)}});
  } else {
    s.out() << format_model(m);
  }
  return kYes;
}

struct UlamArgs {
  std::size_t m = 3;
  std::size_t depth = 4;
  bool full = false;
  std::size_t cap = 200'000;
  std::string out;
  std::string spec;
  std::string questions;
  std::string answers;

  ulam::GameConfig config(const Globals& g) const {
    ulam::GameConfig cfg;
    cfg.m = m;
    cfg.n = Resolution(g.n.value_or(2));
    cfg.depth = depth;
    cfg.full_space = full;
    cfg.state_cap = cap;
    return cfg;
  }
};

std::string state_values(const ulam::KnowledgeState& f) {
  std::string out = "(";
  for (std::size_t e = 1; e <= f.size(); ++e) {
    if (e > 1) out += ", ";
    out += f.at(e).to_string();
  }
  return out + ")";
}

int cmd_ulam_build(Session& s, const UlamArgs& a) {
  ulam::GameModel game = ulam::build_game_model(a.config(s.globals));
  std::string text = format_model(game.model);
  if (!a.out.empty()) write_text(a.out, text);
  if (s.globals.json) {
    Json j{{"states", game.model.world_count()}, {"questions", game.model.relations().size()}, {"closed", game.closed}};
    if (a.out.empty()) j["model"] = text;
    s.emit(j);
  } else if (a.out.empty()) {
    s.out() << text;
  } else {
    s.out() << game.model.world_count() << " states, " << game.model.relations().size() << " questions"
            << (game.closed ? "" : ", frontier truncated") << "; written to " << a.out << "\n";
  }
  return kYes;
}

int cmd_ulam_check(Session& s, const UlamArgs& a) {
  ulam::SpecResult r = ulam::check_spec(a.config(s.globals), parse_formula(a.spec));
  if (s.globals.json) {
    Json j{{"holds", r.holds}, {"states_checked", r.states_checked}};
    if (r.counterexample) {
      j["counterexample"] = r.counterexample->name();
      j["values"] = state_values(*r.counterexample);
    }
    s.emit(j);
  } else if (r.holds) {
    s.out() << "holds on " << r.states_checked << " states\n";
  } else {
    s.out() << "fails at " << r.counterexample->name() << " " << state_values(*r.counterexample) << "\n";
  }
  return r.holds ? kYes : kNo;
}

int cmd_ulam_run(Session& s, const UlamArgs& a) {
  ulam::GameConfig cfg = a.config(s.globals);
  std::vector<ulam::Question> questions;
  for (const auto& q : split(a.questions, ';')) questions.push_back(ulam::parse_question(q, cfg.m));
  ulam::Trajectory t = ulam::run(cfg, questions, a.answers);
  if (s.globals.json) {
    Json states = Json::array();
    for (const auto& f : t.states) states.push_back(Json{{"name", f.name()}, {"values", state_values(f)}});
    Json j{{"states", states}};
    j["final"] = t.final_element ? Json(*t.final_element) : Json(nullptr);
    s.emit(j);
  } else {
    for (std::size_t k = 0; k < t.states.size(); ++k) {
      s.out() << k;
      if (k > 0) s.out() << " " << questions[k - 1].name() << " " << a.answers[k - 1];
      s.out() << " " << t.states[k].name() << " " << state_values(t.states[k]) << "\n";
    }
    if (t.final_element) {
      s.out() << "final: " << *t.final_element << "\n";
    } else {
      s.out() << "not final\n";
    }
  }
  return t.final_element ? kYes : kNo;
}

void report_error(Session& s, const std::string& kind, const std::string& message, Json extra = Json::object()) {
  if (s.globals.json) {
    Json j{{"error", kind}, {"message", message}};
    for (auto& [key, v] : extra.items()) j[key] = v;
    s.emit(j);
  } else {
    s.err() << "error: " << message << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Session session(out, err);
  Globals& g = session.globals;

  CLI::App app{"Many-valued propositional dynamic logic toolkit", "mvpdl"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--n", g.n, "Resolution: truth values 0/n .. n/n")->check(CLI::Range(1, 1'000'000));
  app.add_option("--seed", g.seed, "Seed for random generation");
  app.add_flag("--json", g.json, "Machine-readable output");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Value of a formula at a world");
  eval->add_option("--model", eval_args.model, "Model file")->required();
  eval->add_option("--world", eval_args.world, "World name")->required();
  eval->add_option("formula", eval_args.formula)->required();

  EvalArgs check_args;
  auto* check = app.add_subcommand("check", "Is a formula true at every world of a model");
  check->add_option("--model", check_args.model, "Model file")->required();
  check->add_option("formula", check_args.formula)->required();

  std::string taut_formula;
  auto* taut = app.add_subcommand("taut", "Propositional tautology test over the n+1 truth values");
  taut->add_option("formula", taut_formula)->required();

  std::string fl_formula;
  auto* fl = app.add_subcommand("flclosure", "Fischer-Ladner closure");
  fl->add_option("formula", fl_formula)->required();

  FilterArgs filter_args;
  auto* filter = app.add_subcommand("filter", "Quotient of a model by a formula's closure");
  filter->add_option("--model", filter_args.model, "Model file")->required();
  filter->add_option("--out", filter_args.out, "Write the quotient here");
  filter->add_option("formula", filter_args.formula)->required();

  DecideArgs sat_args;
  DecideArgs valid_args;
  auto* sat = app.add_subcommand("sat", "Satisfiability");
  auto* valid = app.add_subcommand("valid", "Validity");
  for (auto [cmd, a] : {std::pair{sat, &sat_args}, std::pair{valid, &valid_args}}) {
    cmd->add_option("formula", a->formula)->required();
    cmd->add_option("--max-worlds", a->max_worlds, "Largest witness searched for")->capture_default_str();
    cmd->add_option("--budget", a->budget, "State budget")->capture_default_str();
    cmd->add_flag("--cross-check", a->cross_check, "Confirm with exhaustive enumeration (max-worlds <= 3)");
  }

  std::string prove_path;
  auto* prove = app.add_subcommand("prove", "Check a derivation file");
  prove->add_option("file", prove_path)->required();

  LiArgs li_args;
  auto* li = app.add_subcommand("li", "Emit the loop-invariance derivation");
  li->add_option("formula", li_args.formula)->required();
  li->add_option("program", li_args.program)->required();
  li->add_flag("--sharp", li_args.sharp, "Start from phi -> [alpha]phi via the power rule");
  li->add_option("--out", li_args.out, "Write the derivation here");

  RandomArgs random_args;
  auto* random = app.add_subcommand("random", "Random model from --seed");
  random->add_option("--worlds", random_args.worlds)->capture_default_str();
  random->add_option("--atoms", random_args.atoms, "Comma-separated program names")->capture_default_str();
  random->add_option("--vars", random_args.vars, "Comma-separated variable names")->capture_default_str();
  random->add_option("--density", random_args.density)->check(CLI::Range(0.0, 1.0))->capture_default_str();

  UlamArgs ulam_args;
  auto* ulam_cmd = app.add_subcommand("ulam", "Searching games with lies");
  ulam_cmd->require_subcommand(1);
  auto add_game_options = [&](CLI::App* cmd) {
    cmd->add_option("--m", ulam_args.m, "Search space size")->capture_default_str();
    cmd->add_option("--depth", ulam_args.depth, "Question rounds")->capture_default_str();
    cmd->add_option("--cap", ulam_args.cap, "State cap")->capture_default_str();
  };
  auto* ulam_build = ulam_cmd->add_subcommand("build", "Game model in the model file format");
  add_game_options(ulam_build);
  ulam_build->add_flag("--full", ulam_args.full, "All of the state space, not just reachable states");
  ulam_build->add_option("--out", ulam_args.out, "Write the model here");
  auto* ulam_check = ulam_cmd->add_subcommand("check", "Check a specification on reachable states");
  add_game_options(ulam_check);
  ulam_check->add_option("--spec", ulam_args.spec)->required();
  auto* ulam_run = ulam_cmd->add_subcommand("run", "Play questions and answers");
  add_game_options(ulam_run);
  ulam_run->add_option("--questions", ulam_args.questions, "e.g. \"Q{1};Q{2}\"")->required();
  ulam_run->add_option("--answers", ulam_args.answers, "e.g. \"+-\"")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  for (auto* sub : ulam_cmd->get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kYes : kError;
  }

  try {
    if (*eval) return cmd_eval(session, eval_args);
    if (*check) return cmd_check(session, check_args);
    if (*taut) return cmd_taut(session, taut_formula);
    if (*fl) return cmd_flclosure(session, fl_formula);
    if (*filter) return cmd_filter(session, filter_args);
    if (*sat) return cmd_decide(session, sat_args, false);
    if (*valid) return cmd_decide(session, valid_args, true);
    if (*prove) return cmd_prove(session, prove_path);
    if (*li) return cmd_li(session, li_args);
    if (*random) return cmd_random(session, random_args);
    if (*ulam_build) return cmd_ulam_build(session, ulam_args);
    if (*ulam_check) return cmd_ulam_check(session, ulam_args);
    if (*ulam_run) return cmd_ulam_run(session, ulam_args);
  } catch (const SyntaxError& e) {
    report_error(session, "syntax", e.what(), Json{{"line", e.line()}, {"column", e.column()}});
    return kError;
  } catch (const FormatError& e) {
    report_error(session, "format", e.what(), Json{{"line", e.line()}});
    return kError;
  } catch (const ResolutionMismatch& e) {
    report_error(session, "resolution", e.what(), Json{{"expected", e.expected()}, {"found", e.found()}});
    return kError;
  } catch (const ResourceLimitExceeded& e) {
    report_error(session, "resource_limit", e.what());
    return kError;
  } catch (const Error& e) {
    report_error(session, "error", e.what());
    return kError;
  }
  return kError;
}

}  // namespace mvpdl::cli
