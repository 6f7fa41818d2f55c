#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algproc/exp.hpp"
#include "algproc/semantics.hpp"
#include "algproc/sterm.hpp"

namespace algproc {

struct Equation {
  std::string var;
  Exp rhs;
};

/// A finite system {x_i = e_i}. No x_i may occur bound in any e_j.
class EqSystem {
 public:
  EqSystem() = default;
  /// Throws FormatError on duplicate variables or a variable bound in some e_j.
  explicit EqSystem(std::vector<Equation> equations);

  [[nodiscard]] const std::vector<Equation>& equations() const { return equations_; }
  [[nodiscard]] std::vector<std::string> variables() const;
  /// True iff every x_j is guarded in every e_i.
  [[nodiscard]] bool guarded() const { return guarded_; }
  [[nodiscard]] const Exp* rhs(const std::string& var) const;

 private:
  std::vector<Equation> equations_;
  bool guarded_ = true;
};

using Solution = std::map<std::string, Exp>;

/// Reads a term over transitions back into process syntax: v ↦ v,
/// (a, x) ↦ a.x, ✓ ↦ the unit variable, σ(p, q) ↦ σ(p†, q†).
[[nodiscard]] Exp dagger(const STerm<Transition<Exp>>& p);

/// Name of the distinguished unit variable used by the star fragment.
inline constexpr std::string_view kUnitVar = "$unit";

/// {x = p_x†} where p_x is the canonical term reading of the structure at x.
/// State names are used as variables when they are identifiers that clash
/// with no output variable or action; otherwise states become "%i".
[[nodiscard]] EqSystem associated_system(const Coalgebra& c);
/// Variable chosen for each state by associated_system.
[[nodiscard]] std::vector<std::string> system_variables(const Coalgebra& c);

/// Milner elimination. `order` lists variables in elimination order; the
/// default eliminates the last equation first. Throws UnguardedSystem.
[[nodiscard]] Solution solve(const EqSystem& sys, const std::vector<std::string>& order = {});

/// Semantic check: no x_j free in any φ(x_i), and φ(x_i) is bisimilar to
/// e_i[φ] for every i.
[[nodiscard]] bool check_solution(const EqSystem& sys, const Solution& phi, const TheorySpec& th);

/// solve(associated_system(c)) at state s.
[[nodiscard]] Exp synthesize(const Coalgebra& c, std::size_t s);

/// One "x = term" per line; blank lines and lines starting with '#' are skipped.
[[nodiscard]] EqSystem parse_system(std::string_view text, const TheorySpec& th, const ParseOptions& opts = {});

}  // namespace algproc
