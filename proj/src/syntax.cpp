#include "mvpdl/syntax.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_set>

#include "mvpdl/error.hpp"

namespace mvpdl {

namespace detail {

using FormulaPtr = std::shared_ptr<const FormulaNode>;
using ProgramPtr = std::shared_ptr<const ProgramNode>;

struct FormulaNode {
  FormulaKind kind;
  std::size_t hash;
  int depth;
  std::string name;
  FormulaPtr a;
  FormulaPtr b;
  ProgramPtr prog;
};

struct ProgramNode {
  ProgramKind kind;
  std::size_t hash;
  int depth;
  std::string name;
  FormulaPtr test;
  ProgramPtr a;
  ProgramPtr b;
};

struct NodeAccess {
  static const FormulaPtr& node(const Formula& f) { return f.node_; }
  static const ProgramPtr& node(const Program& p) { return p.node_; }
  static Formula wrap(FormulaPtr n) { return Formula(std::move(n)); }
  static Program wrap(ProgramPtr n) { return Program(std::move(n)); }
};

}  // namespace detail

namespace {

using detail::FormulaNode;
using detail::FormulaPtr;
using detail::NodeAccess;
using detail::ProgramNode;
using detail::ProgramPtr;

std::size_t mix(std::size_t seed, std::size_t v) {
  // 64-bit variant of boost::hash_combine
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4);
  return seed;
}

Formula make(FormulaKind kind, std::string name, FormulaPtr a, FormulaPtr b, ProgramPtr prog) {
  std::size_t h = mix(0x51ed27u, static_cast<std::size_t>(kind));
  int depth = 0;
  if (kind == FormulaKind::Var) h = mix(h, std::hash<std::string>{}(name));
  if (a) {
    h = mix(h, a->hash);
    depth = std::max(depth, a->depth + 1);
  }
  if (b) {
    h = mix(h, b->hash);
    depth = std::max(depth, b->depth + 1);
  }
  if (prog) {
    h = mix(h, prog->hash);
    depth = std::max(depth, prog->depth + 1);
  }
  return NodeAccess::wrap(std::make_shared<const FormulaNode>(
      FormulaNode{kind, h, depth, std::move(name), std::move(a), std::move(b), std::move(prog)}));
}

Program make(ProgramKind kind, std::string name, FormulaPtr test, ProgramPtr a, ProgramPtr b) {
  std::size_t h = mix(0x7a3c1u, static_cast<std::size_t>(kind));
  int depth = 0;
  if (kind == ProgramKind::Atomic) h = mix(h, std::hash<std::string>{}(name));
  if (test) {
    h = mix(h, test->hash);
    depth = std::max(depth, test->depth + 1);
  }
  if (a) {
    h = mix(h, a->hash);
    depth = std::max(depth, a->depth + 1);
  }
  if (b) {
    h = mix(h, b->hash);
    depth = std::max(depth, b->depth + 1);
  }
  return NodeAccess::wrap(std::make_shared<const ProgramNode>(
      ProgramNode{kind, h, depth, std::move(name), std::move(test), std::move(a), std::move(b)}));
}

bool equal_nodes(const ProgramNode* x, const ProgramNode* y);

bool equal_nodes(const FormulaNode* x, const FormulaNode* y) {
  if (x == y) return true;
  if (x->hash != y->hash || x->kind != y->kind) return false;
  switch (x->kind) {
    case FormulaKind::Var:
      return x->name == y->name;
    case FormulaKind::Zero:
      return true;
    case FormulaKind::Not:
      return equal_nodes(x->a.get(), y->a.get());
    case FormulaKind::Implies:
      return equal_nodes(x->a.get(), y->a.get()) && equal_nodes(x->b.get(), y->b.get());
    case FormulaKind::Box:
      return equal_nodes(x->prog.get(), y->prog.get()) && equal_nodes(x->a.get(), y->a.get());
  }
  return false;
}

bool equal_nodes(const ProgramNode* x, const ProgramNode* y) {
  if (x == y) return true;
  if (x->hash != y->hash || x->kind != y->kind) return false;
  switch (x->kind) {
    case ProgramKind::Atomic:
      return x->name == y->name;
    case ProgramKind::Test:
      return equal_nodes(x->test.get(), y->test.get());
    case ProgramKind::Star:
      return equal_nodes(x->a.get(), y->a.get());
    case ProgramKind::Seq:
    case ProgramKind::Union:
      return equal_nodes(x->a.get(), y->a.get()) && equal_nodes(x->b.get(), y->b.get());
  }
  return false;
}

int compare_nodes(const ProgramNode* x, const ProgramNode* y);

int compare_nodes(const FormulaNode* x, const FormulaNode* y) {
  if (x == y) return 0;
  if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
  switch (x->kind) {
    case FormulaKind::Var:
      return x->name.compare(y->name);
    case FormulaKind::Zero:
      return 0;
    case FormulaKind::Not:
      return compare_nodes(x->a.get(), y->a.get());
    case FormulaKind::Implies:
      if (int c = compare_nodes(x->a.get(), y->a.get())) return c;
      return compare_nodes(x->b.get(), y->b.get());
    case FormulaKind::Box:
      if (int c = compare_nodes(x->prog.get(), y->prog.get())) return c;
      return compare_nodes(x->a.get(), y->a.get());
  }
  return 0;
}

int compare_nodes(const ProgramNode* x, const ProgramNode* y) {
  if (x == y) return 0;
  if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
  switch (x->kind) {
    case ProgramKind::Atomic:
      return x->name.compare(y->name);
    case ProgramKind::Test:
      return compare_nodes(x->test.get(), y->test.get());
    case ProgramKind::Star:
      return compare_nodes(x->a.get(), y->a.get());
    case ProgramKind::Seq:
    case ProgramKind::Union:
      if (int c = compare_nodes(x->a.get(), y->a.get())) return c;
      return compare_nodes(x->b.get(), y->b.get());
  }
  return 0;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::logic_error(what);
}

}  // namespace

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const {
  require(node_->kind == FormulaKind::Var, "Formula::name on a non-variable");
  return node_->name;
}
Formula Formula::first() const {
  require(node_->a != nullptr, "Formula::first on an atom");
  return Formula(node_->a);
}
Formula Formula::second() const {
  require(node_->kind == FormulaKind::Implies, "Formula::second on a non-implication");
  return Formula(node_->b);
}
Program Formula::program() const {
  require(node_->kind == FormulaKind::Box, "Formula::program on a non-box");
  return NodeAccess::wrap(node_->prog);
}
std::size_t Formula::hash() const { return node_->hash; }
int Formula::depth() const { return node_->depth; }

bool operator==(const Formula& a, const Formula& b) {
  return equal_nodes(a.node_.get(), b.node_.get());
}
bool operator<(const Formula& a, const Formula& b) {
  return compare_nodes(a.node_.get(), b.node_.get()) < 0;
}

ProgramKind Program::kind() const { return node_->kind; }
const std::string& Program::name() const {
  require(node_->kind == ProgramKind::Atomic, "Program::name on a non-atomic program");
  return node_->name;
}
Formula Program::test() const {
  require(node_->kind == ProgramKind::Test, "Program::test on a non-test");
  return NodeAccess::wrap(node_->test);
}
Program Program::first() const {
  require(node_->a != nullptr, "Program::first on an atomic program or test");
  return Program(node_->a);
}
Program Program::second() const {
  require(node_->b != nullptr, "Program::second on a unary program");
  return Program(node_->b);
}
std::size_t Program::hash() const { return node_->hash; }
int Program::depth() const { return node_->depth; }

bool operator==(const Program& a, const Program& b) {
  return equal_nodes(a.node_.get(), b.node_.get());
}
bool operator<(const Program& a, const Program& b) {
  return compare_nodes(a.node_.get(), b.node_.get()) < 0;
}

Formula var(std::string name) {
  return make(FormulaKind::Var, std::move(name), nullptr, nullptr, nullptr);
}
Formula zero() {
  static const Formula z = make(FormulaKind::Zero, {}, nullptr, nullptr, nullptr);
  return z;
}
Formula neg(Formula f) {
  return make(FormulaKind::Not, {}, NodeAccess::node(f), nullptr, nullptr);
}
Formula implies(Formula a, Formula b) {
  return make(FormulaKind::Implies, {}, NodeAccess::node(a), NodeAccess::node(b), nullptr);
}
Formula box(Program p, Formula f) {
  return make(FormulaKind::Box, {}, NodeAccess::node(f), nullptr, NodeAccess::node(p));
}

Program atomic(std::string name) {
  return make(ProgramKind::Atomic, std::move(name), nullptr, nullptr, nullptr);
}
Program test(Formula f) {
  return make(ProgramKind::Test, {}, NodeAccess::node(f), nullptr, nullptr);
}
Program seq(Program a, Program b) {
  return make(ProgramKind::Seq, {}, nullptr, NodeAccess::node(a), NodeAccess::node(b));
}
Program choice(Program a, Program b) {
  return make(ProgramKind::Union, {}, nullptr, NodeAccess::node(a), NodeAccess::node(b));
}
Program star(Program a) {
  return make(ProgramKind::Star, {}, nullptr, NodeAccess::node(a), nullptr);
}

Formula one() {
  static const Formula o = neg(zero());
  return o;
}
Formula lor(Formula a, Formula b) { return implies(implies(a, b), b); }
Formula land(Formula a, Formula b) { return neg(lor(neg(a), neg(b))); }
Formula oplus(Formula a, Formula b) { return implies(neg(a), b); }
Formula odot(Formula a, Formula b) { return neg(oplus(neg(a), neg(b))); }
Formula iff(Formula a, Formula b) { return odot(implies(a, b), implies(b, a)); }
Formula diamond(Program p, Formula f) { return neg(box(std::move(p), neg(std::move(f)))); }

Formula times(int k, Formula f) {
  if (k < 0) throw Error("multiple k.f needs k >= 0");
  if (k == 0) return zero();
  Formula acc = f;
  for (int i = 1; i < k; ++i) acc = oplus(acc, f);
  return acc;
}

Formula power(Formula f, int k) {
  if (k < 0) throw Error("power f^k needs k >= 0");
  if (k == 0) return one();
  Formula acc = f;
  for (int i = 1; i < k; ++i) acc = odot(acc, f);
  return acc;
}

Formula land_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return one();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = land(acc, fs[i]);
  return acc;
}

Formula lor_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return zero();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = lor(acc, fs[i]);
  return acc;
}

namespace {

class Substituter {
 public:
  Substituter(const FormulaSubstitution& fsub, const ProgramSubstitution& psub)
      : fsub_(fsub), psub_(psub) {}

  Formula run(const Formula& f) {
    auto it = formulas_.find(f.identity());
    if (it != formulas_.end()) return it->second;
    Formula out = f;
    switch (f.kind()) {
      case FormulaKind::Var: {
        auto hit = fsub_.find(f.name());
        if (hit != fsub_.end()) out = hit->second;
        break;
      }
      case FormulaKind::Zero:
        break;
      case FormulaKind::Not: {
        Formula a = run(f.first());
        if (a.identity() != f.first().identity()) out = neg(a);
        break;
      }
      case FormulaKind::Implies: {
        Formula a = run(f.first());
        Formula b = run(f.second());
        if (a.identity() != f.first().identity() || b.identity() != f.second().identity()) {
          out = implies(a, b);
        }
        break;
      }
      case FormulaKind::Box: {
        Program p = run(f.program());
        Formula a = run(f.first());
        if (p.identity() != f.program().identity() || a.identity() != f.first().identity()) {
          out = box(p, a);
        }
        break;
      }
    }
    formulas_.emplace(f.identity(), out);
    return out;
  }

  Program run(const Program& p) {
    auto it = programs_.find(p.identity());
    if (it != programs_.end()) return it->second;
    Program out = p;
    switch (p.kind()) {
      case ProgramKind::Atomic: {
        auto hit = psub_.find(p.name());
        if (hit != psub_.end()) out = hit->second;
        break;
      }
      case ProgramKind::Test: {
        Formula t = run(p.test());
        if (t.identity() != p.test().identity()) out = test(t);
        break;
      }
      case ProgramKind::Star: {
        Program a = run(p.first());
        if (a.identity() != p.first().identity()) out = star(a);
        break;
      }
      case ProgramKind::Seq:
      case ProgramKind::Union: {
        Program a = run(p.first());
        Program b = run(p.second());
        if (a.identity() != p.first().identity() || b.identity() != p.second().identity()) {
          out = p.kind() == ProgramKind::Seq ? seq(a, b) : choice(a, b);
        }
        break;
      }
    }
    programs_.emplace(p.identity(), out);
    return out;
  }

 private:
  const FormulaSubstitution& fsub_;
  const ProgramSubstitution& psub_;
  std::unordered_map<const void*, Formula> formulas_;
  std::unordered_map<const void*, Program> programs_;
};

// Visits every distinct node once, so DAG-shaped formulas stay cheap.
class Collector {
 public:
  std::set<std::string> vars;
  std::set<std::string> atoms;
  bool has_box = false;

  void visit(const Formula& f) {
    if (!seen_.insert(f.identity()).second) return;
    switch (f.kind()) {
      case FormulaKind::Var:
        vars.insert(f.name());
        break;
      case FormulaKind::Zero:
        break;
      case FormulaKind::Not:
        visit(f.first());
        break;
      case FormulaKind::Implies:
        visit(f.first());
        visit(f.second());
        break;
      case FormulaKind::Box:
        has_box = true;
        visit(f.program());
        visit(f.first());
        break;
    }
  }

  void visit(const Program& p) {
    if (!seen_.insert(p.identity()).second) return;
    switch (p.kind()) {
      case ProgramKind::Atomic:
        atoms.insert(p.name());
        break;
      case ProgramKind::Test:
        visit(p.test());
        break;
      case ProgramKind::Star:
        visit(p.first());
        break;
      case ProgramKind::Seq:
      case ProgramKind::Union:
        visit(p.first());
        visit(p.second());
        break;
    }
  }

 private:
  std::unordered_set<const void*> seen_;
};

}  // namespace

Formula substitute(const Formula& f, const FormulaSubstitution& fsub,
                   const ProgramSubstitution& psub) {
  if (fsub.empty() && psub.empty()) return f;
  return Substituter(fsub, psub).run(f);
}

Program substitute(const Program& p, const FormulaSubstitution& fsub,
                   const ProgramSubstitution& psub) {
  if (fsub.empty() && psub.empty()) return p;
  return Substituter(fsub, psub).run(p);
}

std::set<std::string> variables(const Formula& f) {
  Collector c;
  c.visit(f);
  return std::move(c.vars);
}

std::set<std::string> atomic_programs(const Formula& f) {
  Collector c;
  c.visit(f);
  return std::move(c.atoms);
}

std::set<std::string> atomic_programs(const Program& p) {
  Collector c;
  c.visit(p);
  return std::move(c.atoms);
}

bool is_propositional(const Formula& f) {
  Collector c;
  c.visit(f);
  return !c.has_box;
}

bool ClosureSet::insert(const Formula& f) {
  if (index_.count(f)) return false;
  index_.emplace(f, members_.size());
  members_.push_back(f);
  return true;
}

ClosureSet fl_closure(const std::vector<Formula>& seed) {
  ClosureSet out;
  std::deque<Formula> work;
  auto add = [&](const Formula& f) {
    if (out.insert(f)) work.push_back(f);
  };
  for (const auto& f : seed) add(f);
  while (!work.empty()) {
    Formula f = work.front();
    work.pop_front();
    switch (f.kind()) {
      case FormulaKind::Var:
      case FormulaKind::Zero:
        break;
      case FormulaKind::Not:
        add(f.first());
        break;
      case FormulaKind::Implies:
        add(f.first());
        add(f.second());
        break;
      case FormulaKind::Box: {
        Program a = f.program();
        Formula body = f.first();
        switch (a.kind()) {
          case ProgramKind::Atomic:
            break;
          case ProgramKind::Seq:
            add(box(a.first(), box(a.second(), body)));
            break;
          case ProgramKind::Union:
            add(box(a.first(), body));
            add(box(a.second(), body));
            break;
          case ProgramKind::Star:
            add(box(a.first(), f));
            break;
          case ProgramKind::Test:
            add(a.test());
            break;
        }
        add(body);
        break;
      }
    }
  }
  return out;
}

}  // namespace mvpdl
