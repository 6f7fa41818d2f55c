#include "algproc/solver.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "algproc/equivalence.hpp"
#include "algproc/substitution.hpp"

namespace algproc {

EqSystem::EqSystem(std::vector<Equation> equations) : equations_(std::move(equations)) {
  std::set<std::string> vars;
  for (const auto& eq : equations_)
    if (!vars.insert(eq.var).second) throw FormatError("variable '" + eq.var + "' has two equations");
  for (const auto& eq : equations_) {
    const VarInfo info = var_info(eq.rhs);
    for (const auto& b : info.bound)
      if (vars.count(b)) throw FormatError("system variable '" + b + "' is bound in an equation");
    for (const auto& v : vars)
      if (!is_guarded(v, eq.rhs)) guarded_ = false;
  }
}

std::vector<std::string> EqSystem::variables() const {
  std::vector<std::string> out;
  for (const auto& eq : equations_) out.push_back(eq.var);
  return out;
}

const Exp* EqSystem::rhs(const std::string& var) const {
  for (const auto& eq : equations_)
    if (eq.var == var) return &eq.rhs;
  return nullptr;
}

Exp dagger(const STerm<Transition<Exp>>& p) {
  return p.fold([] { return Exp::zero(); },
                [](const Transition<Exp>& t) {
                  switch (t.kind) {
                    case Transition<Exp>::Kind::kStep:
                      return Exp::prefix(t.name, t.target);
                    case Transition<Exp>::Kind::kOutput:
                      return Exp::var(t.name);
                    case Transition<Exp>::Kind::kTick:
                      break;
                  }
                  return Exp::var(std::string(kUnitVar));
                },
                [](const BinaryOp& op, Exp l, Exp r) { return Exp::op(op, std::move(l), std::move(r)); });
}

std::vector<std::string> system_variables(const Coalgebra& c) {
  std::set<std::string> taken;
  for (const auto& nf : c.structure)
    for (const auto& t : nf.support())
      if (!t.is_tick()) taken.insert(t.name);
  bool usable = true;
  std::set<std::string> seen;
  for (const auto& n : c.names) {
    const bool ident = !n.empty() && is_ident_start(n[0]) &&
                       std::all_of(n.begin(), n.end(), [](char ch) { return is_ident_char(ch); }) && n != "mu";
    if (!ident || taken.count(n) || !seen.insert(n).second) usable = false;
  }
  if (usable && c.names.size() == c.size()) return c.names;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back("%" + std::to_string(i));
  return out;
}

EqSystem associated_system(const Coalgebra& c) {
  const auto vars = system_variables(c);
  std::vector<Equation> eqs;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto term = c.structure[i].to_term().map([&](const StateTransition& t) {
      return t.retarget([&](std::size_t s) { return Exp::var(vars[s]); });
    });
    eqs.push_back({vars[i], dagger(term)});
  }
  return EqSystem(std::move(eqs));
}

Solution solve(const EqSystem& sys, const std::vector<std::string>& order) {
  if (!sys.guarded()) throw UnguardedSystem("system of equations is not guarded");
  std::vector<std::string> elim = order;
  if (elim.empty()) {
    elim = sys.variables();
    std::reverse(elim.begin(), elim.end());
  } else {
    auto a = elim;
    auto b = sys.variables();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw FormatError("elimination order is not a permutation of the system variables");
  }

  // Forward pass: x_k := μx_k.e_k, substituted into the remaining equations.
  // The binder is dropped when x_k does not occur, since μx.e ≡ e then.
  std::map<std::string, Exp> current;
  for (const auto& eq : sys.equations()) current.emplace(eq.var, eq.rhs);
  std::vector<std::pair<std::string, Exp>> closed;  // (x_k, f_k) in elimination order
  for (const auto& x : elim) {
    const Exp& e = current.at(x);
    Exp f = e.has_free(x) ? Exp::mu(x, e) : e;
    current.erase(x);
    for (auto& [y, e] : current) e = substitute(e, {{x, f}});
    closed.emplace_back(x, f);
  }
  // Backward pass: g_k := f_k[g_j / x_j] for the variables eliminated later.
  Solution phi;
  for (auto it = closed.rbegin(); it != closed.rend(); ++it) phi[it->first] = substitute(it->second, phi);
  return phi;
}

bool check_solution(const EqSystem& sys, const Solution& phi, const TheorySpec& th) {
  const auto vars = sys.variables();
  for (const auto& x : vars) {
    auto it = phi.find(x);
    if (it == phi.end()) return false;
    for (const auto& y : vars)
      if (it->second.has_free(y)) return false;
  }
  for (const auto& eq : sys.equations()) {
    const Exp rhs = substitute(eq.rhs, Bindings(phi.begin(), phi.end()));
    if (!equivalent(phi.at(eq.var), rhs, th).equivalent) return false;
  }
  return true;
}

Exp synthesize(const Coalgebra& c, std::size_t s) {
  const EqSystem sys = associated_system(c);
  return solve(sys).at(sys.equations().at(s).var);
}

EqSystem parse_system(std::string_view text, const TheorySpec& th, const ParseOptions& opts) {
  std::vector<Equation> eqs;
  ParseOptions running = opts;
  std::set<std::string> variables;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_start = 0;
  while (std::getline(in, line)) {
    const std::size_t offset = line_start;
    line_start += line.size() + 1;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'x = term'", offset + first);
    std::string lhs = line.substr(0, eq);
    lhs.erase(0, lhs.find_first_not_of(" \t"));
    lhs.erase(lhs.find_last_not_of(" \t\r") + 1);
    if (lhs.empty() || !is_ident_start(lhs[0]) ||
        !std::all_of(lhs.begin(), lhs.end(), [](char ch) { return is_ident_char(ch); }) || lhs == "mu")
      throw ParseError("expected a variable before '='", offset + first);
    Exp rhs;
    try {
      rhs = parse_exp(std::string_view(line).substr(eq + 1), th, running);
    } catch (const ParseError& err) {
      throw ParseError(err.message(), offset + eq + 1 + err.offset());
    }
    for (const auto& a : actions_of(rhs)) running.actions.insert(a);
    variables.insert(lhs);
    for (const auto& v : var_info(rhs).free) variables.insert(v);
    eqs.push_back({lhs, rhs});
  }
  for (const auto& v : variables)
    if (running.actions.count(v)) throw ParseError("'" + v + "' is used both as an action and as a variable", 0);
  return EqSystem(std::move(eqs));
}

}  // namespace algproc
