#pragma once

#include <map>
#include <set>
#include <string>

#include "algproc/exp.hpp"

namespace algproc {

struct VarInfo {
  std::set<std::string> free;
  std::set<std::string> bound;
};

[[nodiscard]] VarInfo var_info(const Exp& e);

/// True iff every free occurrence of v in e lies under an action prefix
/// (a rebinding μv also shields it).
[[nodiscard]] bool is_guarded(const std::string& v, const Exp& e);

/// Smallest name "%k" not in `avoid`. The '%' namespace is unreachable from
/// the surface syntax.
[[nodiscard]] std::string fresh_name(const std::set<std::string>& avoid);

[[nodiscard]] bool is_reserved_name(const std::string& name);

using Bindings = std::map<std::string, Exp>;

/// Simultaneous capture-avoiding substitution e[bindings]. Binders that would
/// capture a free variable of a replacement are renamed to fresh '%' names.
[[nodiscard]] Exp substitute(const Exp& e, const Bindings& bindings);

/// Guarded substitution e[g//v]: guarded free occurrences of v become g,
/// unguarded ones become 0.
[[nodiscard]] Exp guarded_subst_exp(const Exp& e, const Exp& g, const std::string& v);

/// Renames every '%' binder of e to the first unused name from `base`,
/// `base`1, `base`2, ... so the term is printable in the surface syntax.
[[nodiscard]] Exp readable_binders(const Exp& e, const std::string& base = "w");

}  // namespace algproc
