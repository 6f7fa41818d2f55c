#include "algproc/exp.hpp"

#include <algorithm>
#include <functional>
#include <iterator>

namespace algproc {
namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::vector<std::string> merge_sorted(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<std::string> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Exp::Exp() : Exp(zero()) {}

Exp Exp::finish(Node n) {
  std::size_t h = mix(0, static_cast<std::size_t>(n.kind));
  h = mix(h, std::hash<std::string>{}(n.name));
  if (n.kind == Kind::kOp) h = mix(h, n.op.hash());
  for (const auto& c : n.children) {
    h = mix(h, c.hash());
    n.size += c.size();
  }
  n.hash = h;
  return Exp(std::make_shared<const Node>(std::move(n)));
}

Exp Exp::zero() {
  static const Exp kZero = finish(Node{});
  return kZero;
}

Exp Exp::var(std::string name) {
  Node n;
  n.kind = Kind::kVar;
  n.free = {name};
  n.name = std::move(name);
  return finish(std::move(n));
}

Exp Exp::op(BinaryOp op, Exp left, Exp right) {
  Node n;
  n.kind = Kind::kOp;
  n.op = std::move(op);
  n.free = merge_sorted(left.free_vars(), right.free_vars());
  n.children = {std::move(left), std::move(right)};
  return finish(std::move(n));
}

Exp Exp::prefix(std::string action, Exp body) {
  Node n;
  n.kind = Kind::kPrefix;
  n.name = std::move(action);
  n.free = body.free_vars();
  n.children = {std::move(body)};
  return finish(std::move(n));
}

Exp Exp::mu(std::string var, Exp body) {
  Node n;
  n.kind = Kind::kMu;
  n.free = body.free_vars();
  std::erase(n.free, var);
  n.name = std::move(var);
  n.children = {std::move(body)};
  return finish(std::move(n));
}

bool Exp::has_free(std::string_view v) const {
  const auto& f = free_vars();
  auto it = std::lower_bound(f.begin(), f.end(), v);
  return it != f.end() && *it == v;
}

bool operator==(const Exp& a, const Exp& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return Exp::compare(a, b) == 0;
}

int Exp::compare(const Exp& a, const Exp& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.name().compare(b.name())) return c < 0 ? -1 : 1;
  if (a.kind() == Kind::kOp) {
    auto c = a.op() <=> b.op();
    if (c != 0) return c < 0 ? -1 : 1;
  }
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (int c = compare(ca[i], cb[i])) return c;
  return 0;
}

namespace {

void collect_names(const Exp& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Exp::Kind::kZero:
      return;
    case Exp::Kind::kVar:
      out.insert(e.name());
      return;
    case Exp::Kind::kOp:
      collect_names(e.left(), out);
      collect_names(e.right(), out);
      return;
    case Exp::Kind::kPrefix:
      collect_names(e.body(), out);
      return;
    case Exp::Kind::kMu:
      out.insert(e.name());
      collect_names(e.body(), out);
      return;
  }
}

void collect_actions(const Exp& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Exp::Kind::kZero:
    case Exp::Kind::kVar:
      return;
    case Exp::Kind::kOp:
      collect_actions(e.left(), out);
      collect_actions(e.right(), out);
      return;
    case Exp::Kind::kPrefix:
      out.insert(e.name());
      collect_actions(e.body(), out);
      return;
    case Exp::Kind::kMu:
      collect_actions(e.body(), out);
      return;
  }
}

}  // namespace

std::set<std::string> all_var_names(const Exp& e) {
  std::set<std::string> out;
  collect_names(e, out);
  return out;
}

std::set<std::string> actions_of(const Exp& e) {
  std::set<std::string> out;
  collect_actions(e, out);
  return out;
}

}  // namespace algproc
