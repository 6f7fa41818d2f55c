#include "algproc/semantics.hpp"

#include <deque>
#include <map>

#include "algproc/substitution.hpp"

namespace algproc {

std::optional<std::size_t> Coalgebra::find(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

void Coalgebra::check_closed() const {
  if (names.size() != structure.size()) throw InternalError("coalgebra has mismatched state names");
  for (const auto& nf : structure)
    for (const auto& t : nf.support())
      if (t.is_step() && t.target >= size()) throw InternalError("coalgebra step leaves the state set");
}

ExpBranching step(const Exp& e, const TheorySpec& th) {
  const Backend be = th.backend();
  switch (e.kind()) {
    case Exp::Kind::kZero:
      return ExpBranching::zero(be);
    case Exp::Kind::kVar:
      return ExpBranching::unit(be, ExpTransition::output(e.name()));
    case Exp::Kind::kOp:
      th.validate(e.op());
      return ExpBranching::combine(e.op(), step(e.left(), th), step(e.right(), th));
    case Exp::Kind::kPrefix:
      return ExpBranching::unit(be, ExpTransition::step(e.name(), e.body()));
    case Exp::Kind::kMu:
      return gsubst_bm(step(e.body(), th), e, e.name());
  }
  throw InternalError("unknown expression kind");
}

ExpBranching gsubst_bm(const ExpBranching& nf, const Exp& g, const std::string& v) {
  const Backend be = nf.backend();
  return nf.bind([&](const ExpTransition& t) {
    if (t.is_output() && t.name == v) return ExpBranching::zero(be);
    if (t.is_step()) return ExpBranching::unit(be, ExpTransition::step(t.name, substitute(t.target, {{v, g}})));
    return ExpBranching::unit(be, t);
  });
}

Coalgebra reachable(const Exp& e, const TheorySpec& th, std::size_t cap) {
  Coalgebra c{th, {}, {}, {}};
  std::map<Exp, std::size_t> index;
  std::deque<Exp> frontier;
  auto intern = [&](const Exp& x) {
    auto [it, fresh] = index.emplace(x, c.labels.size());
    if (fresh) {
      if (c.labels.size() >= cap)
        throw InternalError("reachable state space exceeds the cap of " + std::to_string(cap) + " states");
      c.labels.push_back(x);
      frontier.push_back(x);
    }
    return it->second;
  };
  intern(e);
  std::vector<ExpBranching> raw;
  while (!frontier.empty()) {
    Exp x = frontier.front();
    frontier.pop_front();
    ExpBranching nf = step(x, th);
    for (const auto& t : nf.support())
      if (t.is_step()) intern(t.target);
    raw.push_back(std::move(nf));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    c.names.push_back("s" + std::to_string(i));
    c.structure.push_back(raw[i].map([&](const ExpTransition& t) {
      return t.retarget([&](const Exp& target) { return index.at(target); });
    }));
  }
  return c;
}

Coalgebra disjoint_union(const Coalgebra& a, const Coalgebra& b) {
  if (!(a.theory == b.theory)) throw TheoryError("disjoint union of coalgebras over different theories");
  Coalgebra c = a;
  const std::size_t offset = a.size();
  for (std::size_t i = 0; i < b.size(); ++i) {
    c.names.push_back(b.names[i] + "'");
    c.structure.push_back(b.structure[i].map([&](const StateTransition& t) {
      return t.retarget([&](std::size_t s) { return s + offset; });
    }));
  }
  if (a.labels.size() == a.size() && b.labels.size() == b.size()) {
    c.labels.insert(c.labels.end(), b.labels.begin(), b.labels.end());
  } else {
    c.labels.clear();
  }
  return c;
}

std::set<Exp> u_set(const Exp& e) {
  std::set<Exp> out{e};
  switch (e.kind()) {
    case Exp::Kind::kZero:
    case Exp::Kind::kVar:
      break;
    case Exp::Kind::kOp: {
      auto l = u_set(e.left());
      auto r = u_set(e.right());
      out.insert(l.begin(), l.end());
      out.insert(r.begin(), r.end());
      break;
    }
    case Exp::Kind::kPrefix: {
      auto b = u_set(e.body());
      out.insert(b.begin(), b.end());
      break;
    }
    case Exp::Kind::kMu:
      for (const auto& f : u_set(e.body())) out.insert(guarded_subst_exp(f, e, e.name()));
      break;
  }
  return out;
}

}  // namespace algproc
