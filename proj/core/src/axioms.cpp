#include "algproc/axioms.hpp"

#include <json.hpp>

#include "algproc/substitution.hpp"

namespace algproc {
namespace {

using json = nlohmann::ordered_json;

bool match(const SchemaPtr& t, const Exp& e, std::map<std::string, Exp>& metas, const ParamEnv& env,
           const TheorySpec& th) {
  switch (t->kind) {
    case SchemaTerm::Kind::kMeta: {
      auto [it, fresh] = metas.emplace(t->meta, e);
      return fresh || it->second == e;
    }
    case SchemaTerm::Kind::kZero:
      return e.kind() == Exp::Kind::kZero;
    case SchemaTerm::Kind::kNode: {
      if (e.kind() != Exp::Kind::kOp) return false;
      auto op = th.resolve(t->family, t->param, env);
      if (!op || !(*op == e.op())) return false;
      return match(t->left, e.left(), metas, env, th) && match(t->right, e.right(), metas, env, th);
    }
  }
  return false;
}

std::optional<Exp> subterm(const Exp& e, const std::vector<std::int64_t>& path, std::string& why) {
  Exp cur = e;
  for (auto idx : path) {
    if (cur.kind() == Exp::Kind::kOp && (idx == 0 || idx == 1)) {
      cur = idx == 0 ? cur.left() : cur.right();
    } else if (cur.kind() == Exp::Kind::kPrefix && idx == 0) {
      cur = cur.body();
    } else {
      why = cur.kind() == Exp::Kind::kMu ? "position descends into a recursion binder"
                                          : "position does not exist in the term";
      return std::nullopt;
    }
  }
  return cur;
}

Exp replace(const Exp& e, const std::vector<std::int64_t>& path, std::size_t depth, const Exp& with) {
  if (depth == path.size()) return with;
  const auto idx = path[depth];
  if (e.kind() == Exp::Kind::kPrefix) return Exp::prefix(e.name(), replace(e.body(), path, depth + 1, with));
  if (idx == 0) return Exp::op(e.op(), replace(e.left(), path, depth + 1, with), e.right());
  return Exp::op(e.op(), e.left(), replace(e.right(), path, depth + 1, with));
}

StepCheck reject(std::string why) { return {false, std::move(why)}; }

std::optional<ParamEnv> read_params(const Axiom& ax, const ProofStep& s, const TheorySpec& th, std::string& why) {
  ParamEnv env;
  for (const auto& [name, text] : s.params) {
    if (std::find(ax.parameters.begin(), ax.parameters.end(), name) == ax.parameters.end()) {
      why = "axiom " + ax.name + " has no parameter '" + name + "'";
      return std::nullopt;
    }
  }
  for (const auto& name : ax.parameters) {
    auto it = s.params.find(name);
    if (it == s.params.end()) {
      why = "missing value for parameter '" + name + "'";
      return std::nullopt;
    }
    try {
      if (th.id() == TheoryId::kGS) {
        env.guards[name] = th.parse_guard(it->second);
      } else {
        Rational p = Rational::parse(it->second);
        if (p.sign() < 0 || p > Rational(1)) {
          why = "probability " + it->second + " outside [0,1]";
          return std::nullopt;
        }
        env.probs[name] = p;
      }
    } catch (const std::exception& err) {
      why = "bad parameter '" + name + "': " + err.what();
      return std::nullopt;
    }
  }
  return env;
}

StepCheck check_axiom(const ProofStep& s, const TheorySpec& th, const Exp& from, const Exp& to,
                      const ParseOptions& opts) {
  const Axiom* ax = th.find_axiom(s.axiom);
  if (!ax) return reject("unknown axiom '" + s.axiom + "' for theory " + std::string(th.name()));
  std::string why;
  auto env = read_params(*ax, s, th, why);
  if (!env) return reject(why);
  std::map<std::string, Exp> metas;
  for (const auto& [name, text] : s.inst) {
    if (std::find(ax->metavariables.begin(), ax->metavariables.end(), name) == ax->metavariables.end())
      return reject("axiom " + ax->name + " has no metavariable '" + name + "'");
    try {
      metas.emplace(name, parse_exp(text, th, opts));
    } catch (const Error& err) {
      return reject("bad instantiation of '" + name + "': " + err.what());
    }
  }
  // Side conditions such as pq != 1 surface as parameters that do not resolve.
  if (!match(ax->lhs, from, metas, *env, th) || !match(ax->rhs, to, metas, *env, th)) {
    auto l = instantiate(ax->lhs, metas, *env, th);
    auto r = instantiate(ax->rhs, metas, *env, th);
    if (!l || !r) return reject("axiom " + ax->name + " does not apply (side condition or instantiation fails)");
    return reject("terms are not an instance of axiom " + ax->name);
  }
  return {true, {}};
}

}  // namespace

std::optional<Exp> instantiate(const SchemaPtr& t, const std::map<std::string, Exp>& metas, const ParamEnv& env,
                               const TheorySpec& th) {
  switch (t->kind) {
    case SchemaTerm::Kind::kMeta: {
      auto it = metas.find(t->meta);
      if (it == metas.end()) return std::nullopt;
      return it->second;
    }
    case SchemaTerm::Kind::kZero:
      return Exp::zero();
    case SchemaTerm::Kind::kNode: {
      auto op = th.resolve(t->family, t->param, env);
      auto l = instantiate(t->left, metas, env, th);
      auto r = instantiate(t->right, metas, env, th);
      if (!op || !l || !r) return std::nullopt;
      return Exp::op(*op, *l, *r);
    }
  }
  return std::nullopt;
}

StepCheck check_step(const ProofStep& s, const TheorySpec& th, const Premises& premises, const ParseOptions& opts) {
  Exp lhs;
  Exp rhs;
  try {
    lhs = parse_exp(s.lhs, th, opts);
    rhs = parse_exp(s.rhs, th, opts);
  } catch (const Error& err) {
    return reject(std::string("unreadable term: ") + err.what());
  }
  if (s.rule == "Refl") {
    if (!(lhs == rhs)) return reject("Refl needs identical sides");
    return {true, {}};
  }
  std::string why;
  auto sub_l = subterm(lhs, s.at, why);
  if (!sub_l) return reject(why);
  auto sub_r = subterm(rhs, s.at, why);
  if (!sub_r) return reject(why);
  if (!(replace(lhs, s.at, 0, *sub_r) == rhs)) return reject("terms differ outside the rewritten position");
  const Exp& from = s.sym ? *sub_r : *sub_l;
  const Exp& to = s.sym ? *sub_l : *sub_r;

  if (s.rule == "axiom") return check_axiom(s, th, from, to, opts);

  if (s.rule == "R1") {
    if (from.kind() != Exp::Kind::kMu) return reject("R1 needs a recursion term");
    if (!(to == guarded_subst_exp(from.body(), from, from.name())))
      return reject("right side is not the guarded unrolling");
    return {true, {}};
  }
  if (s.rule == "R2") {
    if (from.kind() != Exp::Kind::kMu || to.kind() != Exp::Kind::kMu) return reject("R2 relates two recursion terms");
    const std::string& v = from.name();
    const std::string& w = to.name();
    if (w != v && from.body().has_free(w)) return reject("'" + w + "' is free in the body");
    if (!(to.body() == substitute(from.body(), {{v, Exp::var(w)}}))) return reject("body is not the renamed body");
    return {true, {}};
  }
  if (s.rule == "R3" || s.rule == "lemma") {
    if (!s.premise || *s.premise < 0 || static_cast<std::size_t>(*s.premise) >= premises.size())
      return reject("premise does not refer to an earlier lemma");
    const auto& [pl, pr] = premises[static_cast<std::size_t>(*s.premise)];
    if (s.rule == "lemma") {
      if (!(from == pl) || !(to == pr)) return reject("terms do not match the cited lemma");
      return {true, {}};
    }
    if (to.kind() != Exp::Kind::kMu) return reject("R3 concludes with a recursion term");
    const std::string& v = to.name();
    const Exp& e = to.body();
    if (!is_guarded(v, e)) return reject("'" + v + "' is not guarded in the body");
    if (!(from == pl)) return reject("left side is not the premise's left side");
    if (!(pr == substitute(e, {{v, from}}))) return reject("premise is not of the form g = e[g/v]");
    return {true, {}};
  }
  return reject("unknown rule '" + s.rule + "'");
}

namespace {

ProofVerdict check_block(const ProofBlock& b, const TheorySpec& th, const Premises& premises,
                         const ParseOptions& opts, std::optional<std::size_t> lemma, std::pair<Exp, Exp>* goal) {
  ProofVerdict v;
  v.lemma = lemma;
  Exp cur;
  Exp target;
  try {
    cur = parse_exp(b.goal_lhs, th, opts);
    target = parse_exp(b.goal_rhs, th, opts);
  } catch (const Error& err) {
    v.reason = std::string("unreadable goal: ") + err.what();
    return v;
  }
  if (goal) *goal = {cur, target};
  for (std::size_t k = 0; k < b.steps.size(); ++k) {
    v.step = k + 1;
    const ProofStep& s = b.steps[k];
    Exp lhs;
    Exp rhs;
    try {
      lhs = parse_exp(s.lhs, th, opts);
      rhs = parse_exp(s.rhs, th, opts);
    } catch (const Error& err) {
      v.reason = std::string("unreadable term: ") + err.what();
      return v;
    }
    if (!(lhs == cur)) {
      v.reason = "step does not start from the previous term";
      return v;
    }
    StepCheck c = check_step(s, th, premises, opts);
    if (!c.ok) {
      v.reason = c.reason;
      return v;
    }
    cur = rhs;
  }
  if (!(cur == target)) {
    v.reason = "derivation ends at " + to_string(cur, th) + ", not at the goal";
    return v;
  }
  v.step = 0;
  v.accepted = true;
  return v;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  for (const auto& x : j.at(key)) out.push_back(x.get<std::string>());
  return out;
}

ProofBlock read_block(const json& j) {
  ProofBlock b;
  const auto& goal = j.at("goal");
  if (!goal.is_array() || goal.size() != 2) throw FormatError("goal must be a two-element array");
  b.goal_lhs = goal[0].get<std::string>();
  b.goal_rhs = goal[1].get<std::string>();
  for (const auto& js : j.at("steps")) {
    ProofStep s;
    s.rule = js.at("rule").get<std::string>();
    if (js.contains("axiom")) s.axiom = js.at("axiom").get<std::string>();
    if (js.contains("inst"))
      for (const auto& [k, val] : js.at("inst").items()) s.inst[k] = val.get<std::string>();
    if (js.contains("params"))
      for (const auto& [k, val] : js.at("params").items()) s.params[k] = val.get<std::string>();
    if (js.contains("at"))
      for (const auto& i : js.at("at")) s.at.push_back(i.get<std::int64_t>());
    s.lhs = js.at("lhs").get<std::string>();
    s.rhs = js.at("rhs").get<std::string>();
    if (js.contains("sym")) s.sym = js.at("sym").get<bool>();
    if (js.contains("premise")) s.premise = js.at("premise").get<std::int64_t>();
    b.steps.push_back(std::move(s));
  }
  return b;
}

json write_block(const ProofBlock& b) {
  json j;
  j["goal"] = {b.goal_lhs, b.goal_rhs};
  json steps = json::array();
  for (const auto& s : b.steps) {
    json js;
    js["rule"] = s.rule;
    if (!s.axiom.empty()) js["axiom"] = s.axiom;
    if (!s.inst.empty()) js["inst"] = s.inst;
    if (!s.params.empty()) js["params"] = s.params;
    js["at"] = s.at;
    js["lhs"] = s.lhs;
    js["rhs"] = s.rhs;
    if (s.sym) js["sym"] = true;
    if (s.premise) js["premise"] = *s.premise;
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  return j;
}

}  // namespace

Proof parse_proof(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    Proof p;
    p.theory = j.at("theory").get<std::string>();
    p.atoms = string_list(j, "atoms");
    for (auto& a : string_list(j, "actions")) p.actions.insert(std::move(a));
    p.main = read_block(j);
    if (j.contains("lemmas"))
      for (const auto& l : j.at("lemmas")) p.lemmas.push_back(read_block(l));
    return p;
  } catch (const json::exception& err) {
    throw FormatError(std::string("malformed proof: ") + err.what());
  }
}

std::string proof_to_json(const Proof& p) {
  json j;
  j["theory"] = p.theory;
  if (!p.atoms.empty()) j["atoms"] = p.atoms;
  if (!p.actions.empty()) j["actions"] = p.actions;
  json main = write_block(p.main);
  j["goal"] = main["goal"];
  j["steps"] = main["steps"];
  if (!p.lemmas.empty()) {
    json lemmas = json::array();
    for (const auto& l : p.lemmas) lemmas.push_back(write_block(l));
    j["lemmas"] = std::move(lemmas);
  }
  return j.dump(2);
}

TheorySpec proof_theory(const Proof& p) { return TheorySpec::from_name(p.theory, p.atoms); }

ProofVerdict check_proof(const Proof& p, const TheorySpec& th) {
  ParseOptions opts;
  opts.actions = p.actions;
  Premises proven;
  for (std::size_t i = 0; i < p.lemmas.size(); ++i) {
    std::pair<Exp, Exp> goal;
    ProofVerdict v = check_block(p.lemmas[i], th, proven, opts, i, &goal);
    if (!v.accepted) return v;
    proven.push_back(goal);
  }
  return check_block(p.main, th, proven, opts, std::nullopt, nullptr);
}

}  // namespace algproc
