#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "algproc/theory.hpp"

namespace algproc {

/// Immutable process term: 0 | v | σ(e, f) | a.e | μv.e.
///
/// Nodes are shared and carry a precomputed hash, size and free-variable set,
/// so copies are cheap and equality usually short-circuits. Equality is
/// structural (no alpha-quotient). The default value is 0.
class Exp {
 public:
  enum class Kind { kZero, kVar, kOp, kPrefix, kMu };

  Exp();

  static Exp zero();
  static Exp var(std::string name);
  static Exp op(BinaryOp op, Exp left, Exp right);
  static Exp prefix(std::string action, Exp body);
  static Exp mu(std::string var, Exp body);

  [[nodiscard]] Kind kind() const { return node_->kind; }
  /// Variable name (kVar), action (kPrefix) or bound variable (kMu).
  [[nodiscard]] const std::string& name() const { return node_->name; }
  [[nodiscard]] const BinaryOp& op() const { return node_->op; }
  [[nodiscard]] const Exp& left() const { return node_->children[0]; }
  [[nodiscard]] const Exp& right() const { return node_->children[1]; }
  /// Body of a prefix or μ-binder.
  [[nodiscard]] const Exp& body() const { return node_->children[0]; }

  [[nodiscard]] std::size_t hash() const { return node_->hash; }
  [[nodiscard]] std::size_t size() const { return node_->size; }
  /// Sorted free variables.
  [[nodiscard]] const std::vector<std::string>& free_vars() const { return node_->free; }
  [[nodiscard]] bool has_free(std::string_view v) const;
  [[nodiscard]] bool same_node(const Exp& o) const { return node_ == o.node_; }

  friend bool operator==(const Exp& a, const Exp& b);
  friend bool operator<(const Exp& a, const Exp& b) { return compare(a, b) < 0; }
  /// Total structural order: kind, then names/parameters, then children.
  static int compare(const Exp& a, const Exp& b);

 private:
  struct Node {
    Kind kind = Kind::kZero;
    std::string name;
    BinaryOp op;
    std::vector<Exp> children;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::vector<std::string> free;
  };
  explicit Exp(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Exp finish(Node n);

  std::shared_ptr<const Node> node_;
};

struct ExpHash {
  std::size_t operator()(const Exp& e) const { return e.hash(); }
};

/// Every variable name occurring in e, free or bound.
[[nodiscard]] std::set<std::string> all_var_names(const Exp& e);
/// Every action occurring in a prefix of e.
[[nodiscard]] std::set<std::string> actions_of(const Exp& e);

// ---------------------------------------------------------------------------
// Surface syntax

struct ParseOptions {
  /// Names declared as actions up front. Undeclared actions are inferred
  /// from prefix position.
  std::set<std::string> actions;
};

/// Parses the process-term grammar:
///   term  := unary (('+' | '+[' param ']') unary)*      left-associative
///   unary := 'mu' ident '.' term | ident '.' unary | ident | '0' | '(' term ')'
/// Throws ParseError with a byte offset, or TheoryError for operations the
/// theory does not have.
[[nodiscard]] Exp parse_exp(std::string_view text, const TheorySpec& th, const ParseOptions& opts = {});

/// Prints in the same grammar; parse_exp(to_string(e)) == e for surface terms.
[[nodiscard]] std::string to_string(const Exp& e, const TheorySpec& th);

/// Identifier rules shared by the term, system and star-expression parsers.
[[nodiscard]] bool is_ident_start(char c);
[[nodiscard]] bool is_ident_char(char c);

}  // namespace algproc
