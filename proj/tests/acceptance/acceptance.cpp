// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "algproc/axioms.hpp"
#include "algproc/equivalence.hpp"
#include "algproc/solver.hpp"
#include "algproc/star.hpp"
#include "algproc/substitution.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace algproc;
using namespace algproc::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

const TheorySpec kSL = TheorySpec::make(TheoryId::kSL);
const TheorySpec kGS = TheorySpec::make(TheoryId::kGS, {"b", "c"});
const TheorySpec kCA = TheorySpec::make(TheoryId::kCA);
const TheorySpec kCS = TheorySpec::make(TheoryId::kCS);

Rational q(const char* s) { return Rational::parse(s); }

bool bisimilar_to_state(const Coalgebra& c, std::size_t s, const Exp& e) {
  const Coalgebra r = reachable(e, c.theory);
  return states_equivalent(disjoint_union(c, r), s, c.size()).equivalent;
}

Outcome step_examples() {
  Outcome o;
  const Exp gs = parse_exp("mu w. (a1.(v +[b] a2.w) +[b] u)", kGS);
  const Exp f = parse_exp("v +[b] a2.(mu w. (a1.(v +[b] a2.w) +[b] u))", kGS);
  o.require(step(gs, kGS) == ExpBranching::from_guarded(kGS.backend(), {ExpTransition::step("a1", f),
                                                                         ExpTransition::output("u")}),
            "guarded semilattice step");

  const Exp ca = parse_exp("mu v. (a1.u +[1/2] (a2.v +[1/3] w))", kCA);
  o.require(step(ca, kCA) == ExpBranching::from_subdist(kCA.backend(), {{ExpTransition::step("a1", Exp::var("u")), q("1/2")},
                                                                         {ExpTransition::step("a2", ca), q("1/6")},
                                                                         {ExpTransition::output("w"), q("1/3")}}),
            "convex algebra step");

  const Exp cs = parse_exp("mu v. ((a1.v +[1/3] a2.w) + a2.v)", kCS);
  const auto got = step(cs, kCS);
  o.require(got == ExpBranching::from_convex(kCS.backend(),
                                             {{{ExpTransition::step("a1", cs), q("1/3")},
                                               {ExpTransition::step("a2", Exp::var("w")), q("2/3")}},
                                              {{ExpTransition::step("a2", cs), Rational(1)}}}),
            "convex semilattice step");
  o.require(got.convex().size() == 3, "convex semilattice generator count");
  return o;
}

Outcome recursion_identities() {
  Outcome o;
  o.require(equivalent(parse_exp("mu v. v", kSL), Exp::zero(), kSL).equivalent, "mu v. v = 0");
  o.require(equivalent(parse_exp("mu v. a.v", kSL), parse_exp("a.(mu v. a.v)", kSL), kSL).equivalent,
            "mu v. a.v = a.(mu v. a.v)");
  return o;
}

Outcome unguarded_unfolding() {
  Outcome o;
  const Exp body = parse_exp("u +[1/2] v", kCA);
  const Exp m = Exp::mu("v", body);
  const Exp unfolded = substitute(body, {{"v", m}});
  const auto mass = [](const Exp& x) {
    const ExpBranching nf = step(x, kCA);
    const auto& d = nf.subdist();
    const auto it = d.find(ExpTransition::output("u"));
    return it == d.end() ? Rational(0) : it->second;
  };
  o.require(mass(m) == q("1/2"), "mass of u in mu v.e");
  o.require(mass(unfolded) == q("3/4"), "mass of u in the unfolding");
  o.require(!equivalent(m, unfolded, kCA).equivalent, "unfolding must be inequivalent");
  return o;
}

Outcome star_counterexample() {
  Outcome o;
  const SExp e = parse_sexp("1 +[1/3] a", kCA);
  const SExp star = SExp::star(BinaryOp::probabilistic(q("1/2")), e);
  const SExp unrolled = SExp::choice(BinaryOp::probabilistic(q("1/2")), SExp::seq(e, star), SExp::one());
  o.require(tick_mass(star, kCA) == q("1/2"), "tick mass of the star");
  o.require(tick_mass(unrolled, kCA) == q("7/12"), "tick mass of the unrolling");
  o.require(!star_equivalent(star, unrolled, kCA).equivalent, "star and unrolling must be inequivalent");
  return o;
}

Outcome solver_example() {
  Outcome o;
  const Exp e = parse_exp("mu w. (a1.(v +[b] a2.w) +[b] u)", kGS);
  const Coalgebra c = reachable(e, kGS);
  if (c.size() != 2) {
    o.require(false, "expected two reachable states");
    return o;
  }
  const EqSystem sys = associated_system(c);
  const auto vars = system_variables(c);
  const Bindings rename = {{vars[0], Exp::var("x1")}, {vars[1], Exp::var("x2")}};
  ParseOptions opts;
  opts.actions = {"a1", "a2"};
  o.require(sys.equations().size() == 2, "two equations");
  o.require(substitute(sys.equations()[0].rhs, rename) == parse_exp("a1.x2 +[b] u", kGS, opts), "first equation");
  o.require(substitute(sys.equations()[1].rhs, rename) == parse_exp("v +[b] a2.x1", kGS, opts), "second equation");
  const Solution phi = solve(sys);
  o.require(check_solution(sys, phi, kGS), "solution law");
  o.require(equivalent(phi.at(vars[0]), e, kGS).equivalent, "first component");
  return o;
}

Outcome synthesis_round_trip() {
  Outcome o;
  Rng rng(1001);
  CoalgebraShape shape;
  shape.max_states = 5;
  for (const auto& th : all_theories()) {
    for (int i = 0; i < 200; ++i) {
      const Coalgebra c = random_coalgebra(th, rng, shape);
      for (std::size_t s = 0; s < c.size(); ++s)
        o.require(bisimilar_to_state(c, s, synthesize(c, s)), std::string(th.name()) + " synthesis mismatch");
    }
  }
  return o;
}

Outcome bisimilarity_oracle() {
  Outcome o;
  Rng rng(1002);
  CoalgebraShape shape;
  shape.max_states = 4;
  for (const auto& th : all_theories()) {
    for (int i = 0; i < 500; ++i) {
      const Coalgebra c = random_coalgebra(th, rng, shape);
      const Partition p = bisim_partition(c);
      const auto rel = oracle_bisimilarity(c);
      for (std::size_t s = 0; s < c.size(); ++s)
        for (std::size_t t = 0; t < c.size(); ++t)
          o.require((p.block[s] == p.block[t]) == rel[s][t], std::string(th.name()) + " disagreement");
    }
  }
  return o;
}

Outcome star_properties() {
  Outcome o;
  Rng rng(1003);
  for (int i = 0; i < 100; ++i) {
    const SExp e = random_sexp(kSL, rng);
    const SExp star = SExp::star(BinaryOp::plus(), e);
    o.require(star_equivalent(star, SExp::choice(BinaryOp::plus(), SExp::seq(e, star), SExp::one()), kSL).equivalent,
              "SL star unrolling");
    const SExp d = partial_derivative(e, kSL);
    const SExp rebuilt = terminates(e, kSL) ? SExp::choice(BinaryOp::plus(), d, SExp::one()) : d;
    o.require(star_equivalent(e, rebuilt, kSL).equivalent, "SL derivative characterisation");
  }
  for (int i = 0; i < 100; ++i) {
    const SExp e = random_sexp(kGS, rng);
    const BinaryOp b = random_op(kGS, rng);
    const SExp star = SExp::star(b, e);
    o.require(star_equivalent(star, SExp::choice(b, SExp::seq(e, star), SExp::one()), kGS).equivalent,
              "GS star unrolling");
    const SExp rebuilt =
        SExp::choice(BinaryOp::guarded(output_guard(e, kGS)), SExp::one(), partial_derivative(e, kGS));
    o.require(star_equivalent(e, rebuilt, kGS).equivalent, "GS derivative characterisation");
  }
  return o;
}

Outcome skew_classifier() {
  Outcome o;
  for (const auto id : {TheoryId::kSL, TheoryId::kGS, TheoryId::kCA, TheoryId::kCM})
    o.require(is_skew_associative(theory(id)), std::string(theory(id).name()) + " should be skew-associative");
  o.require(!is_skew_associative(kCS), "cs should not be skew-associative");
  return o;
}

Outcome coherence() {
  Outcome o;
  Rng rng(1004);
  for (const auto& th : all_theories()) {
    // No star-fragment results are stated for multisets.
    if (th.id() == TheoryId::kCM) continue;
    for (int i = 0; i < 200; ++i) {
      const SExp s = random_sexp(th, rng);
      const StarCoalgebra direct = star_reachable(s, th);
      const Coalgebra translated = identify_unit(reachable(translate(s), th));
      o.require(states_equivalent(disjoint_union(direct.coalgebra, translated), 0, direct.coalgebra.size()).equivalent,
                std::string(th.name()) + " coherence: " + to_string(s, th));
    }
  }
  return o;
}

std::vector<Proof> load_corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(ALGPROC_PROOF_DIR))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<Proof> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream buf;
    buf << in.rdbuf();
    out.push_back(parse_proof(buf.str()));
  }
  return out;
}

bool goal_holds(const Proof& p) {
  try {
    const TheorySpec th = proof_theory(p);
    ParseOptions opts;
    opts.actions = p.actions;
    return equivalent(parse_exp(p.main.goal_lhs, th, opts), parse_exp(p.main.goal_rhs, th, opts), th).equivalent;
  } catch (const Error&) {
    return false;
  }
}

// One edit: a term field gets a character replaced, deleted or inserted, or a
// structural field changes.
Proof mutate(Proof p, Rng& rng) {
  static const std::string alphabet = "uvwab0+.()[]/123 mx";
  std::vector<ProofBlock*> blocks = {&p.main};
  for (auto& l : p.lemmas) blocks.push_back(&l);
  ProofBlock& b = *blocks[rng.below(blocks.size())];
  const auto edit = [&](std::string& s) {
    const std::size_t k = s.empty() ? 0 : rng.below(s.size());
    const char c = alphabet[rng.below(alphabet.size())];
    switch (rng.below(3)) {
      case 0:
        if (!s.empty()) s[k] = c;
        break;
      case 1:
        if (!s.empty()) s.erase(k, 1);
        break;
      default:
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(k), c);
        break;
    }
  };
  if (b.steps.empty() || rng.coin(10)) {
    edit(rng.coin() ? b.goal_lhs : b.goal_rhs);
    return p;
  }
  ProofStep& s = b.steps[rng.below(b.steps.size())];
  switch (rng.below(6)) {
    case 0:
      edit(s.lhs);
      break;
    case 1:
      edit(s.rhs);
      break;
    case 2:
      if (s.at.empty()) s.at.push_back(0);
      else s.at.back() ^= 1;
      break;
    case 3:
      s.sym = !s.sym;
      break;
    case 4:
      if (!s.params.empty()) edit(s.params.begin()->second);
      else if (!s.inst.empty()) edit(s.inst.begin()->second);
      else edit(s.rhs);
      break;
    default: {
      static const std::vector<std::string> rules = {"axiom", "R1", "R2", "R3", "lemma", "Refl"};
      s.rule = rng.pick(rules);
      break;
    }
  }
  return p;
}

Outcome proof_checker() {
  Outcome o;
  const auto corpus = load_corpus();
  o.require(corpus.size() >= 30, "corpus has fewer than 30 proofs");
  std::set<std::string> rules;
  std::map<std::string, std::set<std::string>> axioms;
  for (const auto& p : corpus) {
    const ProofVerdict v = check_proof(p, proof_theory(p));
    o.require(v.accepted, "rejected: " + p.main.goal_lhs + " = " + p.main.goal_rhs + ": " + v.reason);
    o.require(goal_holds(p), "inequivalent goal: " + p.main.goal_lhs);
    std::vector<const ProofBlock*> blocks = {&p.main};
    for (const auto& l : p.lemmas) blocks.push_back(&l);
    for (const auto* b : blocks)
      for (const auto& s : b->steps) {
        rules.insert(s.rule);
        if (s.rule == "axiom") axioms[p.theory].insert(s.axiom);
      }
  }
  for (const char* r : {"R1", "R2", "R3"}) o.require(rules.count(r) == 1, std::string("no proof uses ") + r);
  for (const auto& th : all_theories())
    for (const auto& ax : th.axioms())
      o.require(axioms[std::string(th.name())].count(ax.name) == 1,
                std::string(th.name()) + " axiom " + ax.name + " unused");

  Rng rng(1005);
  for (int i = 0; i < 1000; ++i) {
    const Proof m = mutate(corpus[rng.below(corpus.size())], rng);
    TheorySpec th = kSL;
    try {
      th = proof_theory(m);
    } catch (const Error&) {
      continue;
    }
    if (check_proof(m, th).accepted) o.require(goal_holds(m), "mutant accepted but inequivalent: " + proof_to_json(m));
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
  double limit_seconds;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "step reproduces the three worked examples", step_examples, 1.0},
      {2, "recursion identities", recursion_identities, 1.0},
      {3, "unguarded unfolding counterexample", unguarded_unfolding, 0},
      {4, "probabilistic star counterexample", star_counterexample, 0},
      {5, "associated system and solution", solver_example, 0},
      {6, "synthesis round trip", synthesis_round_trip, 60.0},
      {7, "partition refinement matches naive bisimilarity", bisimilarity_oracle, 0},
      {8, "star unrolling and derivative characterisations", star_properties, 0},
      {9, "skew-associativity classifier", skew_classifier, 0},
      {10, "direct star semantics coherent with translation", coherence, 0},
      {11, "proof checker corpus and mutation fuzz", proof_checker, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.ok = false;
      o.note = "over time limit";
    }
    if (!o.ok) ++failures;
    std::printf("%s %2d %s (%.3fs)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.title, secs, o.ok ? "" : ": ",
                o.note.c_str());
  }
  return failures == 0 ? 0 : 1;
}
