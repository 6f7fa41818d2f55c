#pragma once

#include <memory>
#include <utility>

#include "algproc/theory.hpp"

namespace algproc {

/// A term over the theory signature with leaves drawn from G: either the
/// constant 0, a generator, or a binary operation node.
template <class G>
class STerm {
 public:
  enum class Kind { kZero, kLeaf, kNode };

  static STerm zero() { return STerm(std::make_shared<const Node>(Node{Kind::kZero, {}, {}, {}, {}})); }
  static STerm leaf(G g) {
    return STerm(std::make_shared<const Node>(Node{Kind::kLeaf, std::move(g), {}, {}, {}}));
  }
  static STerm node(BinaryOp op, STerm l, STerm r) {
    return STerm(std::make_shared<const Node>(
        Node{Kind::kNode, {}, std::move(op), std::move(l.node_), std::move(r.node_)}));
  }

  [[nodiscard]] Kind kind() const { return node_->kind; }
  [[nodiscard]] const G& generator() const { return node_->leaf; }
  [[nodiscard]] const BinaryOp& op() const { return node_->op; }
  [[nodiscard]] STerm left() const { return STerm(node_->left); }
  [[nodiscard]] STerm right() const { return STerm(node_->right); }

  /// Structural fold: zero() -> R, leaf(const G&) -> R, node(const BinaryOp&, R, R) -> R.
  template <class Zero, class Leaf, class NodeF>
  auto fold(Zero&& z, Leaf&& l, NodeF&& n) const {
    switch (kind()) {
      case Kind::kZero:
        return z();
      case Kind::kLeaf:
        return l(generator());
      case Kind::kNode:
        break;
    }
    auto a = left().fold(z, l, n);
    auto b = right().fold(z, l, n);
    return n(op(), std::move(a), std::move(b));
  }

  template <class F>
  auto map(F&& f) const -> STerm<std::decay_t<decltype(f(std::declval<const G&>()))>> {
    using H = std::decay_t<decltype(f(std::declval<const G&>()))>;
    return fold([] { return STerm<H>::zero(); }, [&](const G& g) { return STerm<H>::leaf(f(g)); },
                [](const BinaryOp& o, STerm<H> a, STerm<H> b) {
                  return STerm<H>::node(o, std::move(a), std::move(b));
                });
  }

 private:
  struct Node {
    Kind kind;
    G leaf;
    BinaryOp op;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };
  explicit STerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace algproc
