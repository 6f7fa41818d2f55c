#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "algproc/semantics.hpp"
#include "algproc/star.hpp"
#include "algproc/sterm.hpp"

namespace algproc {

/// Prints a term over the theory signature; right operands that are
/// operations are parenthesised.
template <class G, class Leaf>
std::string format_sterm(const STerm<G>& t, const TheorySpec& th, Leaf&& leaf) {
  switch (t.kind()) {
    case STerm<G>::Kind::kZero:
      return "0";
    case STerm<G>::Kind::kLeaf:
      return leaf(t.generator());
    case STerm<G>::Kind::kNode:
      break;
  }
  std::string r = format_sterm(t.right(), th, leaf);
  if (t.right().kind() == STerm<G>::Kind::kNode) r = "(" + r + ")";
  return format_sterm(t.left(), th, leaf) + " " + th.format_op(t.op()) + " " + r;
}

/// Canonical reading of ε(e): steps as "(a, term)", outputs as variables.
[[nodiscard]] std::string format_branching(const ExpBranching& nf, const TheorySpec& th);
/// Canonical reading of ℓ(s): steps as "(a, sexp)", ✓ as "tick".
[[nodiscard]] std::string format_branching(const LBranching& nf, const TheorySpec& th);
/// Canonical reading of a coalgebra state's structure, targets by state name.
[[nodiscard]] std::string format_branching(const StateBranching& nf, const Coalgebra& c);

/// Coalgebra JSON: theory, atoms (guarded semilattices only), states and the
/// canonical term of every state's structure.
[[nodiscard]] std::string coalgebra_to_json(const Coalgebra& c);
/// Throws FormatError on malformed input and TheoryError on invalid operations.
[[nodiscard]] Coalgebra coalgebra_from_json(std::string_view text);

/// Graphviz digraph: states as circles, outputs as double arrows to
/// variable nodes, edge labels "a", "g|a" or "p|a" by theory.
[[nodiscard]] std::string coalgebra_to_dot(const Coalgebra& c);

/// One block per state: "name: label" then its structure.
[[nodiscard]] std::string coalgebra_to_text(const Coalgebra& c,
                                            const std::function<std::string(std::size_t)>& label = {});

}  // namespace algproc
