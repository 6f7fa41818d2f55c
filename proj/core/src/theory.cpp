#include "algproc/theory.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace algproc {

std::size_t BinaryOp::hash() const {
  std::size_t h = static_cast<std::size_t>(kind) * 0x9e3779b97f4a7c15ULL;
  h ^= std::hash<std::uint64_t>{}(guard) + 0x9e3779b9 + (h << 6) + (h >> 2);
  if (kind == OpKind::kProb) h ^= prob.hash() + 0x9e3779b9 + (h << 6) + (h >> 2);
  return h;
}

namespace {

// Small builders for the schematic axioms.
ParamPtr pvar(std::string name) {
  auto p = std::make_shared<ParamExpr>();
  p->kind = ParamExpr::Kind::kVar;
  p->var = std::move(name);
  return p;
}
ParamPtr ptop() {
  auto p = std::make_shared<ParamExpr>();
  p->kind = ParamExpr::Kind::kTop;
  return p;
}
ParamPtr pnot(ParamPtr a) {
  auto p = std::make_shared<ParamExpr>();
  p->kind = ParamExpr::Kind::kNot;
  p->lhs = std::move(a);
  return p;
}
ParamPtr pmeet(ParamPtr a, ParamPtr b) {
  auto p = std::make_shared<ParamExpr>();
  p->kind = ParamExpr::Kind::kMeet;
  p->lhs = std::move(a);
  p->rhs = std::move(b);
  return p;
}
ParamPtr pdiv(ParamPtr a, ParamPtr b) {
  auto p = std::make_shared<ParamExpr>();
  p->kind = ParamExpr::Kind::kDiv;
  p->lhs = std::move(a);
  p->rhs = std::move(b);
  return p;
}

SchemaPtr meta(std::string name) {
  auto t = std::make_shared<SchemaTerm>();
  t->kind = SchemaTerm::Kind::kMeta;
  t->meta = std::move(name);
  return t;
}
SchemaPtr zero() {
  auto t = std::make_shared<SchemaTerm>();
  t->kind = SchemaTerm::Kind::kZero;
  return t;
}
SchemaPtr node(OpKind family, ParamPtr param, SchemaPtr l, SchemaPtr r) {
  auto t = std::make_shared<SchemaTerm>();
  t->kind = SchemaTerm::Kind::kNode;
  t->family = family;
  t->param = std::move(param);
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}
SchemaPtr plus(SchemaPtr l, SchemaPtr r) { return node(OpKind::kPlus, nullptr, std::move(l), std::move(r)); }
SchemaPtr gsum(ParamPtr b, SchemaPtr l, SchemaPtr r) {
  return node(OpKind::kGuarded, std::move(b), std::move(l), std::move(r));
}
SchemaPtr psum(ParamPtr p, SchemaPtr l, SchemaPtr r) {
  return node(OpKind::kProb, std::move(p), std::move(l), std::move(r));
}

void collect_meta(const SchemaPtr& t, std::vector<std::string>& out) {
  if (t->kind == SchemaTerm::Kind::kMeta) {
    if (std::find(out.begin(), out.end(), t->meta) == out.end()) out.push_back(t->meta);
  } else if (t->kind == SchemaTerm::Kind::kNode) {
    collect_meta(t->left, out);
    collect_meta(t->right, out);
  }
}

void collect_params(const ParamPtr& p, std::vector<std::string>& out) {
  if (!p) return;
  if (p->kind == ParamExpr::Kind::kVar) {
    if (std::find(out.begin(), out.end(), p->var) == out.end()) out.push_back(p->var);
  }
  collect_params(p->lhs, out);
  collect_params(p->rhs, out);
}

void collect_params(const SchemaPtr& t, std::vector<std::string>& out) {
  if (t->kind != SchemaTerm::Kind::kNode) return;
  collect_params(t->param, out);
  collect_params(t->left, out);
  collect_params(t->right, out);
}

Axiom axiom(std::string name, SchemaPtr lhs, SchemaPtr rhs) {
  Axiom a{std::move(name), std::move(lhs), std::move(rhs), {}, {}};
  collect_meta(a.lhs, a.metavariables);
  collect_meta(a.rhs, a.metavariables);
  collect_params(a.lhs, a.parameters);
  collect_params(a.rhs, a.parameters);
  return a;
}

std::vector<Axiom> semilattice_axioms() {
  auto x = meta("x"), y = meta("y"), z = meta("z");
  return {
      axiom("SL1", plus(x, zero()), x),
      axiom("SL2", plus(x, x), x),
      axiom("SL3", plus(x, y), plus(y, x)),
      axiom("SL4", plus(x, plus(y, z)), plus(plus(x, y), z)),
  };
}

std::vector<Axiom> monoid_axioms() {
  auto x = meta("x"), y = meta("y"), z = meta("z");
  return {
      axiom("CM1", plus(x, zero()), x),
      axiom("CM2", plus(x, y), plus(y, x)),
      axiom("CM3", plus(x, plus(y, z)), plus(plus(x, y), z)),
  };
}

std::vector<Axiom> guarded_axioms() {
  auto x = meta("x"), y = meta("y"), z = meta("z");
  auto b = pvar("b"), c = pvar("c");
  return {
      axiom("GS1", gsum(b, x, x), x),
      axiom("GS2", gsum(ptop(), x, y), x),
      axiom("GS3", gsum(b, x, y), gsum(pnot(b), y, x)),
      axiom("GS4", gsum(c, gsum(b, x, y), z), gsum(pmeet(b, c), x, gsum(c, y, z))),
  };
}

std::vector<Axiom> convex_axioms() {
  auto x = meta("x"), y = meta("y"), z = meta("z");
  auto p = pvar("p"), q = pvar("q");
  // (x +_p y) +_q z = x +_{pq} (y +_{q(1-p)/(1-pq)} z), pq != 1
  auto inner = pdiv(pmeet(q, pnot(p)), pnot(pmeet(p, q)));
  return {
      axiom("CA1", psum(p, x, x), x),
      axiom("CA2", psum(ptop(), x, y), x),
      axiom("CA3", psum(p, x, y), psum(pnot(p), y, x)),
      axiom("CA4", psum(q, psum(p, x, y), z), psum(pmeet(p, q), x, psum(inner, y, z))),
  };
}

std::vector<Axiom> convex_semilattice_axioms() {
  auto axioms = semilattice_axioms();
  auto ca = convex_axioms();
  axioms.insert(axioms.end(), ca.begin(), ca.end());
  auto x = meta("x"), y = meta("y"), z = meta("z");
  auto p = pvar("p");
  axioms.push_back(axiom("D", psum(p, plus(x, y), z), plus(psum(p, x, z), psum(p, y, z))));
  return axioms;
}

std::optional<GuardMask> eval_guard(const ParamExpr& e, const ParamEnv& env, GuardMask top) {
  switch (e.kind) {
    case ParamExpr::Kind::kVar: {
      auto it = env.guards.find(e.var);
      if (it == env.guards.end()) return std::nullopt;
      return it->second & top;
    }
    case ParamExpr::Kind::kTop:
      return top;
    case ParamExpr::Kind::kNot: {
      auto a = eval_guard(*e.lhs, env, top);
      if (!a) return std::nullopt;
      return top & ~*a;
    }
    case ParamExpr::Kind::kMeet: {
      auto a = eval_guard(*e.lhs, env, top);
      auto b = eval_guard(*e.rhs, env, top);
      if (!a || !b) return std::nullopt;
      return *a & *b;
    }
    case ParamExpr::Kind::kDiv:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Rational> eval_prob(const ParamExpr& e, const ParamEnv& env) {
  switch (e.kind) {
    case ParamExpr::Kind::kVar: {
      auto it = env.probs.find(e.var);
      if (it == env.probs.end()) return std::nullopt;
      return it->second;
    }
    case ParamExpr::Kind::kTop:
      return Rational(1);
    case ParamExpr::Kind::kNot: {
      auto a = eval_prob(*e.lhs, env);
      if (!a) return std::nullopt;
      return Rational(1) - *a;
    }
    case ParamExpr::Kind::kMeet: {
      auto a = eval_prob(*e.lhs, env);
      auto b = eval_prob(*e.rhs, env);
      if (!a || !b) return std::nullopt;
      return *a * *b;
    }
    case ParamExpr::Kind::kDiv: {
      auto a = eval_prob(*e.lhs, env);
      auto b = eval_prob(*e.rhs, env);
      if (!a || !b || b->is_zero()) return std::nullopt;
      return *a / *b;
    }
  }
  return std::nullopt;
}

}  // namespace

TheorySpec TheorySpec::make(TheoryId id, std::vector<std::string> atoms) {
  TheorySpec th;
  th.id_ = id;
  if (id == TheoryId::kGS) {
    if (atoms.empty()) throw TheoryError("guarded semilattices need a nonempty atom list (--atoms)");
    if (atoms.size() > 64) throw TheoryError("at most 64 atoms are supported");
    std::set<std::string> seen;
    for (const auto& a : atoms)
      if (!seen.insert(a).second) throw TheoryError("duplicate atom '" + a + "'");
    th.atoms_ = std::move(atoms);
  }
  th.operations_.push_back({"0", 0, ParamKind::kNone});
  switch (id) {
    case TheoryId::kSL:
      th.operations_.push_back({"+", 2, ParamKind::kNone});
      th.axioms_ = semilattice_axioms();
      break;
    case TheoryId::kCM:
      th.operations_.push_back({"+", 2, ParamKind::kNone});
      th.axioms_ = monoid_axioms();
      break;
    case TheoryId::kGS:
      th.operations_.push_back({"+", 2, ParamKind::kGuard});
      th.axioms_ = guarded_axioms();
      break;
    case TheoryId::kCA:
      th.operations_.push_back({"+", 2, ParamKind::kProbability});
      th.axioms_ = convex_axioms();
      break;
    case TheoryId::kCS:
      th.operations_.push_back({"+", 2, ParamKind::kNone});
      th.operations_.push_back({"+", 2, ParamKind::kProbability});
      th.axioms_ = convex_semilattice_axioms();
      break;
  }
  return th;
}

TheorySpec TheorySpec::from_name(std::string_view name, std::vector<std::string> atoms) {
  if (name == "sl") return make(TheoryId::kSL);
  if (name == "cm") return make(TheoryId::kCM);
  if (name == "gs") return make(TheoryId::kGS, std::move(atoms));
  if (name == "ca") return make(TheoryId::kCA);
  if (name == "cs") return make(TheoryId::kCS);
  throw TheoryError("unknown theory '" + std::string(name) + "' (expected sl, cm, gs, ca or cs)");
}

std::string_view TheorySpec::name() const {
  switch (id_) {
    case TheoryId::kSL: return "sl";
    case TheoryId::kCM: return "cm";
    case TheoryId::kGS: return "gs";
    case TheoryId::kCA: return "ca";
    case TheoryId::kCS: return "cs";
  }
  return "?";
}

GuardMask TheorySpec::all_atoms() const {
  if (atoms_.size() >= 64) return ~GuardMask{0};
  return (GuardMask{1} << atoms_.size()) - 1;
}

std::optional<std::size_t> TheorySpec::atom_index(std::string_view atom) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i] == atom) return i;
  return std::nullopt;
}

GuardMask TheorySpec::parse_guard(std::string_view text) const {
  GuardMask mask = 0;
  std::istringstream in{std::string(text)};
  std::string atom;
  while (in >> atom) {
    auto idx = atom_index(atom);
    if (!idx) throw TheoryError("guard mentions undeclared atom '" + atom + "'");
    mask |= GuardMask{1} << *idx;
  }
  return mask;
}

std::string TheorySpec::format_guard(GuardMask mask) const {
  std::string out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (mask & (GuardMask{1} << i)) {
      if (!out.empty()) out += ' ';
      out += atoms_[i];
    }
  }
  return out;
}

bool TheorySpec::allows(OpKind kind) const {
  switch (id_) {
    case TheoryId::kSL:
    case TheoryId::kCM:
      return kind == OpKind::kPlus;
    case TheoryId::kGS:
      return kind == OpKind::kGuarded;
    case TheoryId::kCA:
      return kind == OpKind::kProb;
    case TheoryId::kCS:
      return kind == OpKind::kPlus || kind == OpKind::kProb;
  }
  return false;
}

void TheorySpec::validate(const BinaryOp& op) const {
  if (!allows(op.kind)) {
    const char* what = op.kind == OpKind::kPlus      ? "plain choice '+'"
                       : op.kind == OpKind::kGuarded ? "guarded choice"
                                                     : "probabilistic choice";
    throw TheoryError(std::string(what) + " is not an operation of theory " + std::string(name()));
  }
  if (op.kind == OpKind::kGuarded && (op.guard & ~all_atoms()) != 0)
    throw TheoryError("guard is not a subset of the declared atoms");
  if (op.kind == OpKind::kProb && (op.prob.sign() < 0 || op.prob > Rational(1)))
    throw TheoryError("probability " + op.prob.str() + " outside [0,1]");
}

std::string TheorySpec::format_op(const BinaryOp& op) const {
  switch (op.kind) {
    case OpKind::kPlus:
      return "+";
    case OpKind::kGuarded:
      return "+[" + format_guard(op.guard) + "]";
    case OpKind::kProb:
      return "+[" + op.prob.fraction_str() + "]";
  }
  return "+";
}

BinaryOp TheorySpec::parse_op(std::string_view param, bool bracketed) const {
  BinaryOp op;
  if (!bracketed) {
    op = BinaryOp::plus();
  } else if (id_ == TheoryId::kGS) {
    op = BinaryOp::guarded(parse_guard(param));
  } else if (id_ == TheoryId::kCA || id_ == TheoryId::kCS) {
    std::string trimmed;
    for (char ch : param)
      if (ch != ' ' && ch != '\t') trimmed += ch;
    try {
      op = BinaryOp::probabilistic(Rational::parse(trimmed));
    } catch (const std::exception&) {
      throw TheoryError("bad probability literal '" + std::string(param) + "'");
    }
  } else {
    throw TheoryError("theory " + std::string(name()) + " has no parametrised choice");
  }
  validate(op);
  return op;
}

const Axiom* TheorySpec::find_axiom(std::string_view name) const {
  for (const auto& a : axioms_)
    if (a.name == name) return &a;
  return nullptr;
}

std::optional<BinaryOp> TheorySpec::resolve(OpKind family, const ParamPtr& param,
                                            const ParamEnv& env) const {
  switch (family) {
    case OpKind::kPlus:
      return BinaryOp::plus();
    case OpKind::kGuarded: {
      auto g = eval_guard(*param, env, all_atoms());
      if (!g) return std::nullopt;
      return BinaryOp::guarded(*g);
    }
    case OpKind::kProb: {
      auto p = eval_prob(*param, env);
      if (!p || p->sign() < 0 || *p > Rational(1)) return std::nullopt;
      return BinaryOp::probabilistic(*p);
    }
  }
  return std::nullopt;
}

namespace {

// Matches F1(x, F2(y, z)) with distinct metavariables; reports (F1, F2).
std::optional<std::pair<OpKind, OpKind>> right_nested(const SchemaPtr& t) {
  if (t->kind != SchemaTerm::Kind::kNode) return std::nullopt;
  const auto& inner = t->right;
  if (t->left->kind != SchemaTerm::Kind::kMeta || inner->kind != SchemaTerm::Kind::kNode)
    return std::nullopt;
  if (inner->left->kind != SchemaTerm::Kind::kMeta || inner->right->kind != SchemaTerm::Kind::kMeta)
    return std::nullopt;
  const auto& x = t->left->meta;
  const auto& y = inner->left->meta;
  const auto& z = inner->right->meta;
  if (x == y || y == z || x == z) return std::nullopt;
  return std::make_pair(t->family, inner->family);
}

// Checks that `t` is F3(F4(x, y), z) for the metavariables of `r` in order.
bool left_nested_matches(const SchemaPtr& t, const SchemaPtr& r) {
  if (t->kind != SchemaTerm::Kind::kNode) return false;
  const auto& inner = t->left;
  if (inner->kind != SchemaTerm::Kind::kNode || t->right->kind != SchemaTerm::Kind::kMeta) return false;
  if (inner->left->kind != SchemaTerm::Kind::kMeta || inner->right->kind != SchemaTerm::Kind::kMeta)
    return false;
  return inner->left->meta == r->left->meta && inner->right->meta == r->right->left->meta &&
         t->right->meta == r->right->right->meta;
}

}  // namespace

bool is_skew_associative(const TheorySpec& theory) {
  std::vector<OpKind> families;
  for (const auto& op : theory.operations()) {
    if (op.arity > 2)
      throw TheoryError("skew-associativity is only defined for constants and binary operations");
    if (op.arity != 2) continue;
    OpKind k = op.param == ParamKind::kGuard         ? OpKind::kGuarded
               : op.param == ParamKind::kProbability ? OpKind::kProb
                                                     : OpKind::kPlus;
    if (std::find(families.begin(), families.end(), k) == families.end()) families.push_back(k);
  }
  std::set<std::pair<OpKind, OpKind>> provided;
  for (const auto& ax : theory.axioms()) {
    for (int orient = 0; orient < 2; ++orient) {
      const auto& a = orient == 0 ? ax.lhs : ax.rhs;
      const auto& b = orient == 0 ? ax.rhs : ax.lhs;
      auto shape = right_nested(a);
      if (shape && left_nested_matches(b, a)) provided.insert(*shape);
    }
  }
  for (auto f1 : families)
    for (auto f2 : families)
      if (!provided.count({f1, f2})) return false;
  return true;
}

}  // namespace algproc
