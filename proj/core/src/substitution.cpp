#include "algproc/substitution.hpp"

#include <algorithm>

namespace algproc {
namespace {

void collect_info(const Exp& e, VarInfo& info) {
  switch (e.kind()) {
    case Exp::Kind::kZero:
      return;
    case Exp::Kind::kVar:
      return;
    case Exp::Kind::kOp:
      collect_info(e.left(), info);
      collect_info(e.right(), info);
      return;
    case Exp::Kind::kPrefix:
      collect_info(e.body(), info);
      return;
    case Exp::Kind::kMu:
      info.bound.insert(e.name());
      collect_info(e.body(), info);
      return;
  }
}

bool binds_any(const Exp& e, const Bindings& b) {
  for (const auto& v : e.free_vars())
    if (b.count(v)) return true;
  return false;
}

Bindings restrict_to_free(const Exp& e, const Bindings& b) {
  Bindings out;
  for (const auto& v : e.free_vars()) {
    auto it = b.find(v);
    if (it != b.end()) out.emplace(v, it->second);
  }
  return out;
}

}  // namespace

VarInfo var_info(const Exp& e) {
  VarInfo info;
  info.free.insert(e.free_vars().begin(), e.free_vars().end());
  collect_info(e, info);
  return info;
}

bool is_guarded(const std::string& v, const Exp& e) {
  switch (e.kind()) {
    case Exp::Kind::kZero:
      return true;
    case Exp::Kind::kVar:
      return e.name() != v;
    case Exp::Kind::kOp:
      return is_guarded(v, e.left()) && is_guarded(v, e.right());
    case Exp::Kind::kPrefix:
      return true;
    case Exp::Kind::kMu:
      return e.name() == v || is_guarded(v, e.body());
  }
  return true;
}

bool is_reserved_name(const std::string& name) { return !name.empty() && (name[0] == '%' || name[0] == '$'); }

std::string fresh_name(const std::set<std::string>& avoid) {
  for (std::size_t k = 0;; ++k) {
    std::string candidate = "%" + std::to_string(k);
    if (!avoid.count(candidate)) return candidate;
  }
}

Exp substitute(const Exp& e, const Bindings& bindings) {
  if (bindings.empty() || !binds_any(e, bindings)) return e;
  switch (e.kind()) {
    case Exp::Kind::kZero:
      return e;
    case Exp::Kind::kVar:
      return bindings.at(e.name());
    case Exp::Kind::kOp:
      return Exp::op(e.op(), substitute(e.left(), bindings), substitute(e.right(), bindings));
    case Exp::Kind::kPrefix:
      return Exp::prefix(e.name(), substitute(e.body(), bindings));
    case Exp::Kind::kMu: {
      Bindings active = restrict_to_free(e, bindings);
      std::set<std::string> incoming;
      for (const auto& [v, r] : active) incoming.insert(r.free_vars().begin(), r.free_vars().end());
      if (!incoming.count(e.name())) return Exp::mu(e.name(), substitute(e.body(), active));
      std::set<std::string> avoid = all_var_names(e.body());
      avoid.insert(incoming.begin(), incoming.end());
      avoid.insert(e.name());
      std::string renamed = fresh_name(avoid);
      active[e.name()] = Exp::var(renamed);
      return Exp::mu(renamed, substitute(e.body(), active));
    }
  }
  return e;
}

Exp guarded_subst_exp(const Exp& e, const Exp& g, const std::string& v) {
  if (!e.has_free(v)) return e;
  switch (e.kind()) {
    case Exp::Kind::kZero:
      return e;
    case Exp::Kind::kVar:
      return Exp::zero();  // free occurrence of v itself: unguarded
    case Exp::Kind::kOp:
      return Exp::op(e.op(), guarded_subst_exp(e.left(), g, v), guarded_subst_exp(e.right(), g, v));
    case Exp::Kind::kPrefix:
      return Exp::prefix(e.name(), substitute(e.body(), {{v, g}}));
    case Exp::Kind::kMu: {
      if (!g.has_free(e.name())) return Exp::mu(e.name(), guarded_subst_exp(e.body(), g, v));
      std::set<std::string> avoid = all_var_names(e.body());
      avoid.insert(g.free_vars().begin(), g.free_vars().end());
      avoid.insert(v);
      avoid.insert(e.name());
      std::string renamed = fresh_name(avoid);
      Exp body = substitute(e.body(), {{e.name(), Exp::var(renamed)}});
      return Exp::mu(renamed, guarded_subst_exp(body, g, v));
    }
  }
  return e;
}

namespace {

Exp rename_reserved(const Exp& e, const std::string& base, std::set<std::string>& taken) {
  switch (e.kind()) {
    case Exp::Kind::kZero:
    case Exp::Kind::kVar:
      return e;
    case Exp::Kind::kOp:
      return Exp::op(e.op(), rename_reserved(e.left(), base, taken), rename_reserved(e.right(), base, taken));
    case Exp::Kind::kPrefix:
      return Exp::prefix(e.name(), rename_reserved(e.body(), base, taken));
    case Exp::Kind::kMu: {
      if (!is_reserved_name(e.name())) return Exp::mu(e.name(), rename_reserved(e.body(), base, taken));
      std::string name = base;
      for (std::size_t k = 1; taken.count(name); ++k) name = base + std::to_string(k);
      taken.insert(name);
      // Globally unused, so a plain rename cannot capture.
      Exp body = substitute(e.body(), {{e.name(), Exp::var(name)}});
      return Exp::mu(name, rename_reserved(body, base, taken));
    }
  }
  return e;
}

}  // namespace

Exp readable_binders(const Exp& e, const std::string& base) {
  std::set<std::string> taken = all_var_names(e);
  for (const auto& a : actions_of(e)) taken.insert(a);
  return rename_reserved(e, base, taken);
}

}  // namespace algproc
