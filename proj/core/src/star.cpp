#include "algproc/star.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "algproc/solver.hpp"
#include "algproc/substitution.hpp"

namespace algproc {
namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const std::string& unit_name() {
  static const std::string kName(kUnitVar);
  return kName;
}

}  // namespace

// ---------------------------------------------------------------------------
// SExp

SExp::SExp() : SExp(zero()) {}

SExp SExp::finish(Node n) {
  std::size_t h = mix(0x5e, static_cast<std::size_t>(n.kind));
  h = mix(h, std::hash<std::string>{}(n.action));
  if (n.kind == Kind::kChoice || n.kind == Kind::kStar) h = mix(h, n.op.hash());
  for (const auto& c : n.children) {
    h = mix(h, c.hash());
    n.size += c.size();
  }
  n.hash = h;
  return SExp(std::make_shared<const Node>(std::move(n)));
}

SExp SExp::zero() {
  static const SExp kZero = finish(Node{});
  return kZero;
}

SExp SExp::one() {
  static const SExp kOne = [] {
    Node n;
    n.kind = Kind::kOne;
    return finish(std::move(n));
  }();
  return kOne;
}

SExp SExp::act(std::string action) {
  Node n;
  n.kind = Kind::kAct;
  n.action = std::move(action);
  return finish(std::move(n));
}

SExp SExp::choice(BinaryOp op, SExp l, SExp r) {
  Node n;
  n.kind = Kind::kChoice;
  n.op = std::move(op);
  n.children = {std::move(l), std::move(r)};
  return finish(std::move(n));
}

SExp SExp::seq(SExp l, SExp r) {
  Node n;
  n.kind = Kind::kSeq;
  n.children = {std::move(l), std::move(r)};
  return finish(std::move(n));
}

SExp SExp::star(BinaryOp op, SExp body) {
  Node n;
  n.kind = Kind::kStar;
  n.op = std::move(op);
  n.children = {std::move(body)};
  return finish(std::move(n));
}

SExp SExp::test(GuardMask b) { return choice(BinaryOp::guarded(b), one(), zero()); }

bool operator==(const SExp& a, const SExp& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return SExp::compare(a, b) == 0;
}

int SExp::compare(const SExp& a, const SExp& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.action().compare(b.action())) return c < 0 ? -1 : 1;
  if (a.kind() == Kind::kChoice || a.kind() == Kind::kStar) {
    auto c = a.op() <=> b.op();
    if (c != 0) return c < 0 ? -1 : 1;
  }
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (int c = compare(ca[i], cb[i])) return c;
  return 0;
}

// ---------------------------------------------------------------------------
// Translation

Exp translate(const SExp& s) {
  switch (s.kind()) {
    case SExp::Kind::kZero:
      return Exp::zero();
    case SExp::Kind::kOne:
      return Exp::var(unit_name());
    case SExp::Kind::kAct:
      return Exp::prefix(s.action(), Exp::var(unit_name()));
    case SExp::Kind::kChoice:
      return Exp::op(s.op(), translate(s.left()), translate(s.right()));
    case SExp::Kind::kSeq:
      return substitute(translate(s.left()), {{unit_name(), translate(s.right())}});
    case SExp::Kind::kStar: {
      Exp body = translate(s.body());
      std::set<std::string> avoid = all_var_names(body);
      avoid.insert(unit_name());
      std::string v = fresh_name(avoid);
      Exp looped = substitute(body, {{unit_name(), Exp::var(v)}});
      return Exp::mu(v, Exp::op(s.op(), looped, Exp::var(unit_name())));
    }
  }
  return Exp::zero();
}

// ---------------------------------------------------------------------------
// ℓ-semantics

namespace {

SExp seq_target(const SExp& l, const SExp& r, const StarOptions& opts) {
  if (opts.simplify && l.kind() == SExp::Kind::kOne) return r;
  return SExp::seq(l, r);
}

}  // namespace

LBranching lstep(const SExp& s, const TheorySpec& th, const StarOptions& opts) {
  const Backend be = th.backend();
  switch (s.kind()) {
    case SExp::Kind::kZero:
      return LBranching::zero(be);
    case SExp::Kind::kOne:
      return LBranching::unit(be, LTransition::tick());
    case SExp::Kind::kAct:
      return LBranching::unit(be, LTransition::step(s.action(), SExp::one()));
    case SExp::Kind::kChoice:
      th.validate(s.op());
      return LBranching::combine(s.op(), lstep(s.left(), th, opts), lstep(s.right(), th, opts));
    case SExp::Kind::kSeq: {
      const SExp& f = s.right();
      return lstep(s.left(), th, opts).bind([&](const LTransition& t) {
        if (t.is_tick()) return lstep(f, th, opts);
        return LBranching::unit(be, LTransition::step(t.name, seq_target(t.target, f, opts)));
      });
    }
    case SExp::Kind::kStar: {
      th.validate(s.op());
      LBranching loop = lstep(s.body(), th, opts).bind([&](const LTransition& t) {
        if (t.is_tick()) return LBranching::zero(be);
        return LBranching::unit(be, LTransition::step(t.name, seq_target(t.target, s, opts)));
      });
      return LBranching::combine(s.op(), loop, LBranching::unit(be, LTransition::tick()));
    }
  }
  throw InternalError("unknown star expression kind");
}

StarCoalgebra star_reachable(const SExp& s, const TheorySpec& th, const StarOptions& opts, std::size_t cap) {
  StarCoalgebra out{Coalgebra{th, {}, {}, {}}, {}};
  std::map<SExp, std::size_t> index;
  std::deque<SExp> frontier;
  auto intern = [&](const SExp& x) {
    auto [it, fresh] = index.emplace(x, out.labels.size());
    if (fresh) {
      if (out.labels.size() >= cap)
        throw InternalError("reachable state space exceeds the cap of " + std::to_string(cap) + " states");
      out.labels.push_back(x);
      frontier.push_back(x);
    }
    return it->second;
  };
  intern(s);
  std::vector<LBranching> raw;
  while (!frontier.empty()) {
    SExp x = frontier.front();
    frontier.pop_front();
    LBranching nf = lstep(x, th, opts);
    for (const auto& t : nf.support())
      if (t.is_step()) intern(t.target);
    raw.push_back(std::move(nf));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.coalgebra.names.push_back("s" + std::to_string(i));
    out.coalgebra.structure.push_back(raw[i].map([&](const LTransition& t) {
      return t.retarget([&](const SExp& target) { return index.at(target); });
    }));
  }
  return out;
}

Equivalence star_equivalent(const SExp& a, const SExp& b, const TheorySpec& th, const StarOptions& opts,
                            std::size_t cap) {
  Coalgebra ca = star_reachable(a, th, opts, cap).coalgebra;
  Coalgebra cb = star_reachable(b, th, opts, cap).coalgebra;
  const std::size_t offset = ca.size();
  return states_equivalent(disjoint_union(ca, cb), 0, offset);
}

Coalgebra identify_unit(const Coalgebra& c) {
  Coalgebra out = c;
  for (auto& nf : out.structure)
    nf = nf.map([](const StateTransition& t) {
      if (t.is_output() && t.name == unit_name()) return StateTransition::tick();
      return t;
    });
  return out;
}

bool is_guarded_star(const SExp& s) { return is_guarded(unit_name(), translate(s)); }

Rational tick_mass(const SExp& s, const TheorySpec& th) {
  const LBranching nf = lstep(s, th);
  switch (th.id()) {
    case TheoryId::kCA: {
      auto it = nf.subdist().find(LTransition::tick());
      return it == nf.subdist().end() ? Rational(0) : it->second;
    }
    case TheoryId::kCS: {
      Rational best;
      for (const auto& d : nf.convex()) {
        auto it = d.find(LTransition::tick());
        if (it != d.end() && best < it->second) best = it->second;
      }
      return best;
    }
    default:
      throw TheoryError("tick mass is defined for probabilistic theories only");
  }
}

// ---------------------------------------------------------------------------
// E* instances

std::optional<EStarAxiom> estar_axiom_from_name(std::string_view name) {
  static const std::pair<std::string_view, EStarAxiom> kNames[] = {
      {"E1", EStarAxiom::kE1}, {"E2", EStarAxiom::kE2}, {"E3", EStarAxiom::kE3},
      {"E4", EStarAxiom::kE4}, {"E5", EStarAxiom::kE5}, {"E6", EStarAxiom::kE6},
  };
  for (const auto& [n, ax] : kNames)
    if (n == name) return ax;
  return std::nullopt;
}

std::string_view estar_axiom_name(EStarAxiom ax) {
  switch (ax) {
    case EStarAxiom::kE1: return "E1";
    case EStarAxiom::kE2: return "E2";
    case EStarAxiom::kE3: return "E3";
    case EStarAxiom::kE4: return "E4";
    case EStarAxiom::kE5: return "E5";
    case EStarAxiom::kE6: return "E6";
  }
  return "?";
}

EStarCheck check_estar_instance(EStarAxiom ax, const EStarInstance& in, const TheorySpec& th,
                                bool ignore_side_conditions) {
  using S = SExp;
  EStarCheck out;
  auto verdict = [&](const SExp& l, const SExp& r) {
    out.lhs = l;
    out.rhs = r;
    const bool same = star_equivalent(l, r, th).equivalent;
    out.status = same ? EStarCheck::Status::kHolds : EStarCheck::Status::kFails;
    if (!same) out.detail = "sides are not bisimilar";
    return out;
  };
  auto side = [&](std::string why) {
    out.status = EStarCheck::Status::kSideConditionViolated;
    out.detail = std::move(why);
    return out;
  };
  switch (ax) {
    case EStarAxiom::kE1: {
      if (!star_equivalent(S::seq(in.e, S::one()), in.e, th).equivalent) {
        out.lhs = S::seq(in.e, S::one());
        out.rhs = in.e;
        out.detail = "e;1 differs from e";
        return out;
      }
      return verdict(S::seq(S::one(), in.e), in.e);
    }
    case EStarAxiom::kE2:
      return verdict(S::seq(S::zero(), in.e), S::zero());
    case EStarAxiom::kE3:
      return verdict(S::seq(in.e, S::seq(in.f, in.g)), S::seq(S::seq(in.e, in.f), in.g));
    case EStarAxiom::kE4:
      th.validate(in.sigma);
      th.validate(in.tau);
      return verdict(S::star(in.sigma, S::choice(in.tau, in.e, S::one())),
                     S::star(in.sigma, S::choice(in.tau, in.e, S::zero())));
    case EStarAxiom::kE5: {
      th.validate(in.sigma);
      if (!ignore_side_conditions && !is_guarded_star(in.e)) return side("e is not guarded");
      const SExp st = S::star(in.sigma, in.e);
      return verdict(st, S::choice(in.sigma, S::seq(in.e, st), S::one()));
    }
    case EStarAxiom::kE6: {
      th.validate(in.sigma);
      out.lhs = in.g;
      out.rhs = S::seq(S::star(in.sigma, in.e), in.f);
      if (!ignore_side_conditions) {
        if (!is_guarded_star(in.e)) return side("e is not guarded");
        if (!star_equivalent(in.g, S::choice(in.sigma, S::seq(in.e, in.g), in.f), th).equivalent)
          return side("premise g = e;g + f does not hold");
      }
      return verdict(in.g, S::seq(S::star(in.sigma, in.e), in.f));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Guarded parts

bool terminates(const SExp& s, const TheorySpec& th) {
  if (th.id() != TheoryId::kSL && th.id() != TheoryId::kCM)
    throw TheoryError("e -> ✓ is defined for semilattices and multisets");
  const auto support = lstep(s, th).support();
  return std::find(support.begin(), support.end(), LTransition::tick()) != support.end();
}

GuardMask output_guard(const SExp& s, const TheorySpec& th) {
  if (th.id() != TheoryId::kGS) throw TheoryError("e => b is defined for guarded semilattices");
  const auto nf = lstep(s, th);
  GuardMask b = 0;
  for (std::size_t i = 0; i < nf.guarded().size(); ++i)
    if (nf.guarded()[i] && nf.guarded()[i]->is_tick()) b |= GuardMask{1} << i;
  return b;
}

SExp partial_derivative(const SExp& s, const TheorySpec& th) {
  const bool gs = th.id() == TheoryId::kGS;
  if (!gs && th.id() != TheoryId::kSL) throw TheoryError("∂ is defined for semilattices and guarded semilattices");
  switch (s.kind()) {
    case SExp::Kind::kZero:
    case SExp::Kind::kOne:
      return SExp::zero();
    case SExp::Kind::kAct:
      return s;
    case SExp::Kind::kChoice:
      return SExp::choice(s.op(), partial_derivative(s.left(), th), partial_derivative(s.right(), th));
    case SExp::Kind::kSeq: {
      const SExp& e = s.left();
      const SExp& f = s.right();
      SExp head = SExp::seq(partial_derivative(e, th), f);
      if (gs) return SExp::choice(BinaryOp::guarded(output_guard(e, th)), partial_derivative(f, th), head);
      return terminates(e, th) ? SExp::choice(BinaryOp::plus(), head, partial_derivative(f, th)) : head;
    }
    case SExp::Kind::kStar: {
      SExp loop = SExp::seq(partial_derivative(s.body(), th), s);
      if (gs) return SExp::choice(BinaryOp::guarded(output_guard(s.body(), th)), SExp::zero(), loop);
      return loop;
    }
  }
  return SExp::zero();
}

}  // namespace algproc
