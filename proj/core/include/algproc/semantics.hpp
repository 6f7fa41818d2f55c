#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "algproc/exp.hpp"
#include "algproc/normal_form.hpp"
#include "algproc/theory.hpp"
#include "algproc/transition.hpp"

namespace algproc {

using ExpTransition = Transition<Exp>;
using ExpBranching = NormalForm<ExpTransition>;

/// Transition leaf of a finite coalgebra: Step targets are state indices.
using StateTransition = Transition<std::size_t>;
using StateBranching = NormalForm<StateTransition>;

/// Finite coalgebra X -> M(V + A×X), or M({✓} + A×X) for the star fragment.
/// States are indexed 0..n-1; `names` gives their display ids.
struct Coalgebra {
  TheorySpec theory;
  std::vector<std::string> names;
  std::vector<StateBranching> structure;
  /// Per-state expression, when the coalgebra was built from process terms.
  std::vector<Exp> labels;

  [[nodiscard]] std::size_t size() const { return structure.size(); }
  /// Index of a state by display id.
  [[nodiscard]] std::optional<std::size_t> find(const std::string& name) const;
  /// Throws InternalError if some Step target is not a state.
  void check_closed() const;
};

/// Operational semantics ε: Exp -> M(V + A×Exp).
[[nodiscard]] ExpBranching step(const Exp& e, const TheorySpec& th);

/// nf[g//v]: Output v becomes 0, Step(a, f) becomes Step(a, f[g/v]).
[[nodiscard]] ExpBranching gsubst_bm(const ExpBranching& nf, const Exp& g, const std::string& v);

inline constexpr std::size_t kDefaultStateCap = 10000;

/// Breadth-first closure of e under Step targets of the canonical normal
/// forms. The seed is state 0. Throws InternalError past `cap` states.
[[nodiscard]] Coalgebra reachable(const Exp& e, const TheorySpec& th, std::size_t cap = kDefaultStateCap);

/// States of `a` followed by those of `b` (indices of `b` shifted by a.size()).
[[nodiscard]] Coalgebra disjoint_union(const Coalgebra& a, const Coalgebra& b);

/// The finite over-approximation U(e) of the reachable expressions, defined
/// by recursion on e.
[[nodiscard]] std::set<Exp> u_set(const Exp& e);

}  // namespace algproc
