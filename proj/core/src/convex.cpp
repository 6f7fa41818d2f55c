#include "algproc/convex.hpp"

#include <cstddef>
#include <optional>

namespace algproc {

bool dominated_by_hull(const RationalVector& target, const std::vector<RationalVector>& others) {
  // Only coordinates where the target is positive constrain anything.
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < target.size(); ++i)
    if (target[i].sign() > 0) coords.push_back(i);
  if (coords.empty()) return true;
  if (others.empty()) return false;

  // Single-generator fast path.
  for (const auto& o : others) {
    bool covers = true;
    for (auto i : coords)
      if (o[i] < target[i]) {
        covers = false;
        break;
      }
    if (covers) return true;
  }
  // A positive target coordinate that no generator reaches cannot be covered.
  for (auto i : coords) {
    bool any = false;
    for (const auto& o : others)
      if (o[i].sign() > 0) any = true;
    if (!any) return false;
  }

  const std::size_t m = coords.size();   // dual variables y
  const std::size_t n = others.size();   // constraints / slacks
  const std::size_t cols = m + n;        // y then slacks
  // Tableau rows: n constraint rows, each with cols coefficients plus rhs.
  std::vector<std::vector<Rational>> tab(n, std::vector<Rational>(cols + 1));
  std::vector<std::size_t> basis(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < m; ++k) tab[j][k] = others[j][coords[k]];
    tab[j][m + j] = Rational(1);
    tab[j][cols] = Rational(1);
    basis[j] = m + j;
  }
  // Reduced costs for maximisation: obj[k] = c_k - z_k; start with c.
  std::vector<Rational> obj(cols + 1);
  for (std::size_t k = 0; k < m; ++k) obj[k] = target[coords[k]];
  // obj[cols] holds the negated objective value.

  const Rational bound(1);
  for (;;) {
    if (-obj[cols] > bound) return false;
    std::optional<std::size_t> enter;
    for (std::size_t k = 0; k < cols; ++k)
      if (obj[k].sign() > 0) {
        enter = k;
        break;
      }
    if (!enter) break;

    std::optional<std::size_t> leave;
    Rational best_ratio;
    for (std::size_t j = 0; j < n; ++j) {
      if (tab[j][*enter].sign() <= 0) continue;
      Rational ratio = tab[j][cols] / tab[j][*enter];
      if (!leave || ratio < best_ratio || (ratio == best_ratio && basis[j] < basis[*leave])) {
        leave = j;
        best_ratio = ratio;
      }
    }
    if (!leave) return false;  // dual unbounded: primal infeasible

    const std::size_t r = *leave;
    const Rational pivot = tab[r][*enter];
    for (auto& v : tab[r]) v /= pivot;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == r || tab[j][*enter].is_zero()) continue;
      const Rational f = tab[j][*enter];
      for (std::size_t k = 0; k <= cols; ++k) tab[j][k] -= f * tab[r][k];
    }
    if (!obj[*enter].is_zero()) {
      const Rational f = obj[*enter];
      for (std::size_t k = 0; k <= cols; ++k) obj[k] -= f * tab[r][k];
    }
    basis[r] = *enter;
  }
  return -obj[cols] <= bound;
}

}  // namespace algproc
