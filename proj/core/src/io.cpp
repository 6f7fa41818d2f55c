#include "algproc/io.hpp"

#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

namespace algproc {
namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> guard_atoms(const TheorySpec& th, GuardMask g) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < th.atoms().size(); ++i)
    if ((g >> i) & 1U) out.push_back(th.atoms()[i]);
  return out;
}

json sterm_to_json(const STerm<StateTransition>& t, const Coalgebra& c) {
  switch (t.kind()) {
    case STerm<StateTransition>::Kind::kZero:
      return json{{"const", "0"}};
    case STerm<StateTransition>::Kind::kLeaf: {
      const auto& leaf = t.generator();
      if (leaf.is_step()) return json{{"act", leaf.name}, {"to", c.names.at(leaf.target)}};
      if (leaf.is_output()) return json{{"out", leaf.name}};
      return json{{"tick", true}};
    }
    case STerm<StateTransition>::Kind::kNode:
      break;
  }
  json j;
  j["op"] = "+";
  if (t.op().kind == OpKind::kGuarded) j["guard"] = guard_atoms(c.theory, t.op().guard);
  if (t.op().kind == OpKind::kProb) j["prob"] = t.op().prob.fraction_str();
  j["args"] = json::array({sterm_to_json(t.left(), c), sterm_to_json(t.right(), c)});
  return j;
}

STerm<StateTransition> sterm_from_json(const json& j, const TheorySpec& th,
                                       const std::map<std::string, std::size_t>& states) {
  using T = STerm<StateTransition>;
  if (!j.is_object()) throw FormatError("structure term must be an object");
  if (j.contains("op")) {
    if (j.at("op").get<std::string>() != "+") throw FormatError("unknown operation '" + j.at("op").dump() + "'");
    BinaryOp op = BinaryOp::plus();
    if (j.contains("guard")) {
      GuardMask g = 0;
      for (const auto& a : j.at("guard")) {
        auto idx = th.atom_index(a.get<std::string>());
        if (!idx) throw TheoryError("unknown atom '" + a.get<std::string>() + "'");
        g |= GuardMask{1} << *idx;
      }
      op = BinaryOp::guarded(g);
    } else if (j.contains("prob")) {
      try {
        op = BinaryOp::probabilistic(Rational::parse(j.at("prob").get<std::string>()));
      } catch (const std::invalid_argument&) {
        throw FormatError("bad probability " + j.at("prob").dump());
      }
    }
    th.validate(op);
    const auto& args = j.at("args");
    if (!args.is_array() || args.size() != 2) throw FormatError("binary operation needs two args");
    return T::node(op, sterm_from_json(args[0], th, states), sterm_from_json(args[1], th, states));
  }
  if (j.contains("const")) {
    if (j.at("const").get<std::string>() != "0") throw FormatError("unknown constant " + j.at("const").dump());
    return T::zero();
  }
  if (j.contains("out")) return T::leaf(StateTransition::output(j.at("out").get<std::string>()));
  if (j.contains("act")) {
    const std::string to = j.at("to").get<std::string>();
    auto it = states.find(to);
    if (it == states.end()) throw FormatError("step to unknown state '" + to + "'");
    return T::leaf(StateTransition::step(j.at("act").get<std::string>(), it->second));
  }
  if (j.contains("tick")) return T::leaf(StateTransition::tick());
  throw FormatError("unrecognised structure term " + j.dump());
}

std::string dot_id(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_branching(const ExpBranching& nf, const TheorySpec& th) {
  return format_sterm(nf.to_term(), th, [&](const ExpTransition& t) -> std::string {
    if (t.is_step()) return "(" + t.name + ", " + to_string(t.target, th) + ")";
    if (t.is_output()) return t.name;
    return "tick";
  });
}

std::string format_branching(const LBranching& nf, const TheorySpec& th) {
  return format_sterm(nf.to_term(), th, [&](const LTransition& t) -> std::string {
    if (t.is_step()) return "(" + t.name + ", " + to_string(t.target, th) + ")";
    if (t.is_output()) return t.name;
    return "tick";
  });
}

std::string format_branching(const StateBranching& nf, const Coalgebra& c) {
  return format_sterm(nf.to_term(), c.theory, [&](const StateTransition& t) -> std::string {
    if (t.is_step()) return "(" + t.name + ", " + c.names.at(t.target) + ")";
    if (t.is_output()) return t.name;
    return "tick";
  });
}

std::string coalgebra_to_json(const Coalgebra& c) {
  json j;
  j["theory"] = std::string(c.theory.name());
  if (c.theory.id() == TheoryId::kGS) j["atoms"] = c.theory.atoms();
  j["states"] = c.names;
  json structure = json::object();
  for (std::size_t i = 0; i < c.size(); ++i) structure[c.names[i]] = sterm_to_json(c.structure[i].to_term(), c);
  j["structure"] = std::move(structure);
  return j.dump(2);
}

Coalgebra coalgebra_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    std::vector<std::string> atoms;
    if (j.contains("atoms"))
      for (const auto& a : j.at("atoms")) atoms.push_back(a.get<std::string>());
    Coalgebra c{TheorySpec::from_name(j.at("theory").get<std::string>(), atoms), {}, {}, {}};
    std::map<std::string, std::size_t> index;
    for (const auto& s : j.at("states")) {
      std::string name = s.get<std::string>();
      if (!index.emplace(name, c.names.size()).second) throw FormatError("duplicate state '" + name + "'");
      c.names.push_back(std::move(name));
    }
    const auto& structure = j.at("structure");
    for (const auto& [key, val] : structure.items())
      if (!index.count(key)) throw FormatError("structure for unknown state '" + key + "'");
    for (const auto& name : c.names) {
      if (!structure.contains(name)) throw FormatError("state '" + name + "' has no structure");
      c.structure.push_back(StateBranching::of_term(sterm_from_json(structure.at(name), c.theory, index), c.theory));
    }
    return c;
  } catch (const json::exception& err) {
    throw FormatError(std::string("malformed coalgebra: ") + err.what());
  }
}

std::string coalgebra_to_dot(const Coalgebra& c) {
  const TheorySpec& th = c.theory;
  std::ostringstream out;
  out << "digraph coalgebra {\n  rankdir=LR;\n  node [shape=circle];\n";
  std::set<std::string> sinks;
  auto sink = [&](const StateTransition& t) {
    std::string id = t.is_tick() ? "tick" : "out:" + t.name;
    if (sinks.insert(id).second)
      out << "  " << dot_id(id) << " [shape=plaintext, label=" << dot_id(t.is_tick() ? "✓" : t.name) << "];\n";
    return id;
  };
  for (const auto& n : c.names) out << "  " << dot_id(n) << ";\n";
  auto edge = [&](const std::string& from, const StateTransition& t, const std::string& prefix) {
    if (t.is_step()) {
      out << "  " << dot_id(from) << " -> " << dot_id(c.names.at(t.target))
          << " [label=" << dot_id(prefix.empty() ? t.name : prefix + "|" + t.name) << "];\n";
    } else {
      const std::string id = sink(t);
      out << "  " << dot_id(from) << " -> " << dot_id(id) << " [arrowhead=normalnormal";
      if (!prefix.empty()) out << ", label=" << dot_id(prefix);
      out << "];\n";
    }
  };
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::string& from = c.names[i];
    const auto& nf = c.structure[i];
    switch (th.id()) {
      case TheoryId::kSL:
        for (const auto& t : nf.set()) edge(from, t, "");
        break;
      case TheoryId::kCM:
        for (const auto& [t, n] : nf.bag()) edge(from, t, n == 1 ? "" : std::to_string(n));
        break;
      case TheoryId::kGS: {
        std::map<StateTransition, GuardMask> by_value;
        for (std::size_t k = 0; k < nf.guarded().size(); ++k)
          if (nf.guarded()[k]) by_value[*nf.guarded()[k]] |= GuardMask{1} << k;
        for (const auto& [t, g] : by_value) edge(from, t, th.format_guard(g));
        break;
      }
      case TheoryId::kCA:
        for (const auto& [t, p] : nf.subdist()) edge(from, t, p.fraction_str());
        break;
      case TheoryId::kCS: {
        const auto& gens = nf.convex();
        for (std::size_t k = 1; k < gens.size(); ++k) {
          const std::string point = from + "#" + std::to_string(k);
          out << "  " << dot_id(point) << " [shape=point];\n";
          out << "  " << dot_id(from) << " -> " << dot_id(point) << " [style=dashed, arrowhead=none];\n";
          for (const auto& [t, p] : gens[k]) edge(point, t, p.fraction_str());
        }
        break;
      }
    }
  }
  out << "}\n";
  return out.str();
}

std::string coalgebra_to_text(const Coalgebra& c, const std::function<std::string(std::size_t)>& label) {
  std::ostringstream out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out << c.names[i];
    if (label) out << ": " << label(i);
    out << "\n  " << format_branching(c.structure[i], c) << "\n";
  }
  return out.str();
}

}  // namespace algproc
