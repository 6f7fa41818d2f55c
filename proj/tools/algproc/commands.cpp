#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <random>
#include <sstream>

#include "algproc/axioms.hpp"
#include "algproc/equivalence.hpp"
#include "algproc/io.hpp"
#include "algproc/semantics.hpp"
#include "algproc/solver.hpp"
#include "algproc/star.hpp"
#include "algproc/substitution.hpp"

namespace algproc::cli {
namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',') {
      flush();
    } else {
      cur += ch;
    }
  }
  flush();
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_of(const Globals& g, const std::string& fallback, bool allow_dot) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (f != "text" && f != "json" && !(allow_dot && f == "dot"))
    throw FormatError("unsupported --format '" + f + "' for this command");
  return f;
}

/// Parses two terms so that action/variable roles agree across both.
std::pair<Exp, Exp> parse_pair(const std::string& a, const std::string& b, const TheorySpec& th, ParseOptions opts) {
  Exp e = parse_exp(a, th, opts);
  for (const auto& act : actions_of(e)) opts.actions.insert(act);
  Exp f = parse_exp(b, th, opts);
  const VarInfo vi = var_info(e);
  for (const auto& act : actions_of(f))
    if (vi.free.count(act) || vi.bound.count(act))
      throw ParseError("'" + act + "' is used both as an action and as a variable", 0);
  return {e, f};
}

json branching_json(const STerm<ExpTransition>& t, const TheorySpec& th) {
  using T = STerm<ExpTransition>;
  switch (t.kind()) {
    case T::Kind::kZero:
      return json{{"const", "0"}};
    case T::Kind::kLeaf: {
      const auto& leaf = t.generator();
      if (leaf.is_step()) return json{{"act", leaf.name}, {"to", to_string(leaf.target, th)}};
      return json{{"out", leaf.name}};
    }
    case T::Kind::kNode:
      break;
  }
  json j;
  j["op"] = "+";
  if (t.op().kind == OpKind::kGuarded) {
    json atoms = json::array();
    for (std::size_t i = 0; i < th.atoms().size(); ++i)
      if ((t.op().guard >> i) & 1U) atoms.push_back(th.atoms()[i]);
    j["guard"] = atoms;
  }
  if (t.op().kind == OpKind::kProb) j["prob"] = t.op().prob.fraction_str();
  j["args"] = json::array({branching_json(t.left(), th), branching_json(t.right(), th)});
  return j;
}

std::string signature_text(const StateBranching& sig, const TheorySpec& th) {
  return format_sterm(sig.to_term(), th, [](const StateTransition& t) -> std::string {
    if (t.is_step()) return "(" + t.name + ", B" + std::to_string(t.target) + ")";
    if (t.is_output()) return t.name;
    return "tick";
  });
}

/// Output and tick masses of a probabilistic structure, e.g. "u 1/2, tick 1/3".
std::string mass_report(const StateBranching& nf, const TheorySpec& th) {
  if (th.id() != TheoryId::kCA) return {};
  std::map<std::string, Rational> masses;
  for (const auto& [t, p] : nf.subdist()) {
    if (t.is_output()) masses[t.name] += p;
    if (t.is_tick()) masses["tick"] += p;
  }
  std::string out;
  for (const auto& [name, p] : masses) {
    if (!out.empty()) out += ", ";
    out += name + " " + p.fraction_str();
  }
  return out.empty() ? "none" : out;
}

int report_equivalence(const Globals& g, const Equivalence& eq, const std::vector<std::string>& labels,
                       std::ostream& out) {
  const Coalgebra& c = eq.coalgebra;
  const TheorySpec& th = c.theory;
  if (format_of(g, "text", false) == "json") {
    json j;
    j["equivalent"] = eq.equivalent;
    j["blocks"] = eq.partition.count;
    json states = json::array();
    for (std::size_t i = 0; i < c.size(); ++i)
      states.push_back(json{{"name", c.names[i]}, {"label", labels.at(i)}, {"block", eq.partition.block[i]}});
    j["states"] = std::move(states);
    if (!eq.equivalent) {
      j["split_round"] = eq.split_round;
      j["left_signature"] = signature_text(*eq.left_signature, th);
      j["right_signature"] = signature_text(*eq.right_signature, th);
      if (th.id() == TheoryId::kCA) {
        j["left_masses"] = mass_report(c.structure[eq.left], th);
        j["right_masses"] = mass_report(c.structure[eq.right], th);
      }
    }
    out << j.dump(2) << "\n";
    return eq.equivalent ? kOk : kInequivalent;
  }
  if (eq.equivalent) {
    out << "equivalent (" << c.size() << " states, " << eq.partition.count
        << (eq.partition.count == 1 ? " block)\n" : " blocks)\n");
    for (std::size_t i = 0; i < c.size(); ++i)
      out << "  " << c.names[i] << " B" << eq.partition.block[i] << "  " << labels.at(i) << "\n";
    return kOk;
  }
  out << "not equivalent (separated in refinement round " << eq.split_round << ")\n";
  auto side = [&](const char* tag, std::size_t s, const StateBranching& sig) {
    out << tag << c.names[s] << ": " << labels.at(s) << "\n";
    out << "  signature: " << signature_text(sig, th) << "\n";
    if (th.id() == TheoryId::kCA) out << "  masses: " << mass_report(c.structure[s], th) << "\n";
  };
  side("left  ", eq.left, *eq.left_signature);
  side("right ", eq.right, *eq.right_signature);
  return kInequivalent;
}

BinaryOp parse_op_text(const std::string& text, const TheorySpec& th) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](char ch) { return ch == ' '; }), t.end());
  if (t.empty() || t[0] != '+') throw ParseError("operation must be '+' or '+[param]'", 0);
  if (t.size() == 1) return th.parse_op("", false);
  if (t[1] != '[' || t.back() != ']') throw ParseError("operation must be '+' or '+[param]'", 1);
  // Guards are space separated; recover them from the original text.
  const auto open = text.find('[');
  const auto close = text.rfind(']');
  return th.parse_op(text.substr(open + 1, close - open - 1), true);
}

}  // namespace

TheorySpec theory_of(const Globals& g) {
  auto atoms = split_list(g.atoms);
  if (g.theory != "gs" && !atoms.empty()) throw TheoryError("--atoms applies to the gs theory only");
  return TheorySpec::from_name(g.theory, std::move(atoms));
}

ParseOptions parse_options_of(const Globals& g) {
  ParseOptions opts;
  for (auto& a : split_list(g.actions)) opts.actions.insert(std::move(a));
  return opts;
}

int cmd_step(const Globals& g, const std::string& term, std::ostream& out) {
  const TheorySpec th = theory_of(g);
  const Exp e = parse_exp(term, th, parse_options_of(g));
  const ExpBranching nf = step(e, th);
  if (format_of(g, "text", false) == "json") {
    json j;
    j["term"] = to_string(e, th);
    j["step"] = branching_json(nf.to_term(), th);
    out << j.dump(2) << "\n";
  } else {
    out << format_branching(nf, th) << "\n";
  }
  return kOk;
}

int cmd_lts(const Globals& g, const std::string& term, std::ostream& out) {
  const TheorySpec th = theory_of(g);
  const Exp e = parse_exp(term, th, parse_options_of(g));
  const Coalgebra c = reachable(e, th, g.cap);
  const std::string f = format_of(g, "json", true);
  if (f == "json") {
    out << coalgebra_to_json(c) << "\n";
  } else if (f == "dot") {
    out << coalgebra_to_dot(c);
  } else {
    out << coalgebra_to_text(c, [&](std::size_t i) { return to_string(c.labels[i], th); });
  }
  return kOk;
}

int cmd_equiv(const Globals& g, const std::string& lhs, const std::string& rhs, std::ostream& out) {
  const TheorySpec th = theory_of(g);
  const auto [e, f] = parse_pair(lhs, rhs, th, parse_options_of(g));
  const Equivalence eq = equivalent(e, f, th, g.cap);
  std::vector<std::string> labels;
  for (const auto& l : eq.coalgebra.labels) labels.push_back(to_string(l, th));
  return report_equivalence(g, eq, labels, out);
}

int cmd_solve(const Globals& g, const std::string& path, const std::string& state, bool check, std::ostream& out) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_coalgebra = first != std::string::npos && text[first] == '{';

  std::optional<Coalgebra> c;
  EqSystem sys;
  TheorySpec th;
  if (is_coalgebra) {
    c = coalgebra_from_json(text);
    th = c->theory;
    sys = associated_system(*c);
  } else {
    th = theory_of(g);
    sys = parse_system(text, th, parse_options_of(g));
  }

  std::vector<std::string> order;
  if (g.seed) {
    order = sys.variables();
    std::mt19937_64 rng(*g.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  const Solution phi = solve(sys, order);

  std::string var;
  if (!state.empty()) {
    if (c) {
      auto idx = c->find(state);
      if (!idx) throw FormatError("unknown state '" + state + "'");
      var = sys.equations().at(*idx).var;
    } else {
      if (!sys.rhs(state)) throw FormatError("unknown variable '" + state + "'");
      var = state;
    }
  }
  const bool ok = !check || check_solution(sys, phi, th);

  auto shown = [&](const std::string& x) {
    // Reserved names come from renamed states; print the state name instead.
    if (c && is_reserved_name(x)) return c->names.at(std::stoul(x.substr(1)));
    return x;
  };
  if (format_of(g, "text", false) == "json") {
    json j;
    json system = json::object();
    for (const auto& eq : sys.equations()) system[shown(eq.var)] = to_string(readable_binders(eq.rhs), th);
    j["system"] = std::move(system);
    json sol = json::object();
    for (const auto& eq : sys.equations())
      if (var.empty() || eq.var == var) sol[shown(eq.var)] = to_string(readable_binders(phi.at(eq.var)), th);
    j["solution"] = std::move(sol);
    if (check) j["check"] = ok;
    out << j.dump(2) << "\n";
  } else if (!var.empty()) {
    out << to_string(readable_binders(phi.at(var)), th) << "\n";
  } else {
    for (const auto& eq : sys.equations())
      out << shown(eq.var) << " = " << to_string(readable_binders(phi.at(eq.var)), th) << "\n";
  }
  if (check && g.format != "json") out << (ok ? "check: solution\n" : "check: NOT a solution\n");
  return ok ? kOk : kInternal;
}

int cmd_prove(const Globals& g, const std::string& path, std::ostream& out) {
  const Proof p = parse_proof(read_file(path));
  const TheorySpec th = proof_theory(p);
  const ProofVerdict v = check_proof(p, th);
  if (format_of(g, "text", false) == "json") {
    json j;
    j["accepted"] = v.accepted;
    if (!v.accepted) {
      if (v.lemma) j["lemma"] = *v.lemma;
      j["step"] = v.step;
      j["reason"] = v.reason;
    }
    out << j.dump(2) << "\n";
  } else if (v.accepted) {
    out << "accepted: " << p.main.goal_lhs << " = " << p.main.goal_rhs << "\n";
  } else {
    out << "rejected";
    if (v.lemma) out << " in lemma " << *v.lemma;
    if (v.step) out << " at step " << v.step;
    out << ": " << v.reason << "\n";
  }
  return v.accepted ? kOk : kRejected;
}

int cmd_skew(const Globals& g, std::ostream& out) {
  const TheorySpec th = theory_of(g);
  const bool skew = is_skew_associative(th);
  if (format_of(g, "text", false) == "json") {
    out << json{{"theory", std::string(th.name())}, {"skew_associative", skew}}.dump(2) << "\n";
  } else {
    out << th.name() << ": " << (skew ? "skew-associative" : "not skew-associative") << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// Star fragment

namespace {

StarParseOptions star_options(const Globals& g) { return StarParseOptions{g.gkat}; }

}  // namespace

int cmd_star_step(const Globals& g, const std::string& sexp, std::ostream& out) {
  const TheorySpec th = theory_of(g);
  const SExp s = parse_sexp(sexp, th, star_options(g));
  const LBranching nf = lstep(s, th);
  if (format_of(g, "text", false) == "json") {
    json j;
    j["term"] = to_string(s, th);
    j["step"] = format_branching(nf, th);
    if (th.id() == TheoryId::kCA) j["tick_mass"] = tick_mass(s, th).fraction_str();
    out << j.dump(2) << "\n";
  } else {
    out << format_branching(nf, th) << "\n";
  }
  return kOk;
}

int cmd_star_lts(const Globals& g, const std::string& sexp, std::ostream& out) {
  const TheorySpec th = theory_of(g);
  const SExp s = parse_sexp(sexp, th, star_options(g));
  const StarCoalgebra sc = star_reachable(s, th, {}, g.cap);
  const std::string f = format_of(g, "json", true);
  if (f == "json") {
    out << coalgebra_to_json(sc.coalgebra) << "\n";
  } else if (f == "dot") {
    out << coalgebra_to_dot(sc.coalgebra);
  } else {
    out << coalgebra_to_text(sc.coalgebra, [&](std::size_t i) { return to_string(sc.labels[i], th); });
  }
  return kOk;
}

int cmd_star_equiv(const Globals& g, const std::string& lhs, const std::string& rhs, std::ostream& out) {
  const TheorySpec th = theory_of(g);
  const SExp a = parse_sexp(lhs, th, star_options(g));
  const SExp b = parse_sexp(rhs, th, star_options(g));
  const StarCoalgebra ca = star_reachable(a, th, {}, g.cap);
  const StarCoalgebra cb = star_reachable(b, th, {}, g.cap);
  const Equivalence eq = states_equivalent(disjoint_union(ca.coalgebra, cb.coalgebra), 0, ca.coalgebra.size());
  std::vector<std::string> labels;
  for (const auto& l : ca.labels) labels.push_back(to_string(l, th));
  for (const auto& l : cb.labels) labels.push_back(to_string(l, th));
  return report_equivalence(g, eq, labels, out);
}

int cmd_star_estar(const Globals& g, const EStarArgs& args, std::ostream& out) {
  const TheorySpec th = theory_of(g);
  auto ax = estar_axiom_from_name(args.axiom);
  if (!ax) throw FormatError("unknown axiom '" + args.axiom + "' (expected E1..E6)");
  EStarInstance in;
  in.e = parse_sexp(args.e, th, star_options(g));
  in.f = parse_sexp(args.f, th, star_options(g));
  in.g = parse_sexp(args.g, th, star_options(g));
  in.sigma = parse_op_text(args.sigma, th);
  in.tau = parse_op_text(args.tau, th);
  const EStarCheck r = check_estar_instance(*ax, in, th, args.ignore_side);
  const char* status = r.status == EStarCheck::Status::kHolds   ? "holds"
                       : r.status == EStarCheck::Status::kFails ? "fails"
                                                                : "side condition violated";
  if (format_of(g, "text", false) == "json") {
    json j{{"axiom", args.axiom}, {"status", status}, {"lhs", to_string(r.lhs, th)}, {"rhs", to_string(r.rhs, th)}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    out << j.dump(2) << "\n";
  } else {
    out << args.axiom << " " << status;
    if (!r.detail.empty()) out << ": " << r.detail;
    out << "\n";
    if (r.status != EStarCheck::Status::kSideConditionViolated)
      out << "  " << to_string(r.lhs, th) << "  vs  " << to_string(r.rhs, th) << "\n";
  }
  return r.status == EStarCheck::Status::kHolds ? kOk : kInequivalent;
}

int cmd_star_deriv(const Globals& g, const std::string& sexp, std::ostream& out) {
  const TheorySpec th = theory_of(g);
  const SExp s = parse_sexp(sexp, th, star_options(g));
  const SExp d = partial_derivative(s, th);
  const bool gs = th.id() == TheoryId::kGS;
  if (format_of(g, "text", false) == "json") {
    json j{{"term", to_string(s, th)}, {"derivative", to_string(d, th)}};
    if (gs) {
      j["output_guard"] = th.format_guard(output_guard(s, th));
    } else {
      j["terminates"] = terminates(s, th);
    }
    out << j.dump(2) << "\n";
  } else {
    out << "derivative: " << to_string(d, th) << "\n";
    if (gs) {
      out << "output guard: [" << th.format_guard(output_guard(s, th)) << "]\n";
    } else {
      out << "terminates: " << (terminates(s, th) ? "yes" : "no") << "\n";
    }
  }
  return kOk;
}

}  // namespace algproc::cli
