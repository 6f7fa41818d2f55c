#include "oracles.hpp"

#include <cstddef>

namespace algproc::testing {
namespace {

using Row = std::vector<Rational>;

// Solves the square system m·x = rhs by Gauss-Jordan elimination; nullopt
// when singular.
std::optional<Row> solve_square(std::vector<Row> m, Row rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  Row x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

bool oracle_dominated(const std::vector<Rational>& t, const std::vector<std::vector<Rational>>& points) {
  const std::size_t k = points.size();
  const std::size_t d = t.size();
  // Constraints a·λ <= b.
  std::vector<Row> a;
  Row b;
  for (std::size_t i = 0; i < k; ++i) {
    Row r(k);
    r[i] = Rational(-1);
    a.push_back(r);
    b.push_back(Rational(0));
  }
  a.push_back(Row(k, Rational(1)));
  b.push_back(Rational(1));
  for (std::size_t j = 0; j < d; ++j) {
    Row r(k);
    for (std::size_t i = 0; i < k; ++i) r[i] = -points[i][j];
    a.push_back(r);
    b.push_back(-t[j]);
  }
  auto feasible = [&](const Row& x) {
    for (std::size_t r = 0; r < a.size(); ++r) {
      Rational s;
      for (std::size_t i = 0; i < k; ++i) s += a[r][i] * x[i];
      if (s > b[r]) return false;
    }
    return true;
  };
  if (k == 0) return feasible(Row{});
  // The region is a polytope, so it is nonempty iff it has a vertex.
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  do {
    std::vector<Row> m;
    Row rhs;
    for (auto r : idx) {
      m.push_back(a[r]);
      rhs.push_back(b[r]);
    }
    if (auto x = solve_square(std::move(m), std::move(rhs)); x && feasible(*x)) return true;
  } while (next_combination(idx, a.size()));
  return false;
}

std::vector<std::vector<bool>> oracle_bisimilarity(const Coalgebra& c) {
  const std::size_t n = c.size();
  const TheorySpec& th = c.theory;
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));
  for (;;) {
    std::vector<std::size_t> rep(n);
    for (std::size_t s = 0; s < n; ++s) {
      rep[s] = s;
      for (std::size_t t = 0; t < n; ++t)
        if (rel[s][t]) {
          rep[s] = t;
          break;
        }
    }
    std::vector<Value<StateTransition>> collapsed;
    for (std::size_t s = 0; s < n; ++s) {
      auto term = c.structure[s].to_term().map([&](const StateTransition& tr) {
        return tr.retarget([&](std::size_t x) { return rep[x]; });
      });
      collapsed.push_back(oracle_eval(term, th));
    }
    bool changed = false;
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t)
        if (rel[s][t] && !oracle_equal(collapsed[s], collapsed[t], th)) {
          rel[s][t] = false;
          changed = true;
        }
    if (!changed) return rel;
  }
}

namespace {

std::string op_text(const BinaryOp& op) {
  switch (op.kind) {
    case OpKind::kPlus:
      return "+";
    case OpKind::kGuarded:
      return "+g" + std::to_string(op.guard);
    case OpKind::kProb:
      return "+p" + op.prob.fraction_str();
  }
  return "?";
}

std::string nameless(const Exp& e, std::vector<std::string>& binders, const std::map<std::string, Exp>& subst,
                     const std::string& gv, bool guarded) {
  switch (e.kind()) {
    case Exp::Kind::kZero:
      return "0";
    case Exp::Kind::kVar: {
      for (std::size_t i = binders.size(); i-- > 0;)
        if (binders[i] == e.name()) return "#" + std::to_string(binders.size() - 1 - i);
      if (!gv.empty() && e.name() == gv && !guarded) return "0";
      auto it = subst.find(e.name());
      if (it != subst.end()) {
        std::vector<std::string> fresh;
        return nameless(it->second, fresh, {}, {}, false);
      }
      return e.name();
    }
    case Exp::Kind::kOp:
      return "(" + nameless(e.left(), binders, subst, gv, guarded) + " " + op_text(e.op()) + " " +
             nameless(e.right(), binders, subst, gv, guarded) + ")";
    case Exp::Kind::kPrefix:
      return e.name() + "." + nameless(e.body(), binders, subst, gv, true);
    case Exp::Kind::kMu: {
      binders.push_back(e.name());
      std::string body = nameless(e.body(), binders, subst, gv, guarded);
      binders.pop_back();
      return "mu." + body;
    }
  }
  return "?";
}

}  // namespace

std::string oracle_nameless(const Exp& e, const std::map<std::string, Exp>& subst, const std::string& guarded_var) {
  std::vector<std::string> binders;
  std::map<std::string, Exp> s = subst;
  return nameless(e, binders, s, guarded_var, false);
}

}  // namespace algproc::testing
