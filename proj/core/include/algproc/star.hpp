#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algproc/equivalence.hpp"
#include "algproc/exp.hpp"
#include "algproc/normal_form.hpp"
#include "algproc/semantics.hpp"
#include "algproc/transition.hpp"

namespace algproc {

/// Star-fragment expression: 0 | 1 | a | e +σ f | e;f | e^(σ).
class SExp {
 public:
  enum class Kind { kZero, kOne, kAct, kChoice, kSeq, kStar };

  SExp();

  static SExp zero();
  static SExp one();
  static SExp act(std::string action);
  static SExp choice(BinaryOp op, SExp l, SExp r);
  static SExp seq(SExp l, SExp r);
  static SExp star(BinaryOp op, SExp body);
  /// GKAT test b := 1 +_b 0.
  static SExp test(GuardMask b);

  [[nodiscard]] Kind kind() const { return node_->kind; }
  [[nodiscard]] const std::string& action() const { return node_->action; }
  [[nodiscard]] const BinaryOp& op() const { return node_->op; }
  [[nodiscard]] const SExp& left() const { return node_->children[0]; }
  [[nodiscard]] const SExp& right() const { return node_->children[1]; }
  [[nodiscard]] const SExp& body() const { return node_->children[0]; }
  [[nodiscard]] std::size_t hash() const { return node_->hash; }
  [[nodiscard]] std::size_t size() const { return node_->size; }

  friend bool operator==(const SExp& a, const SExp& b);
  friend bool operator<(const SExp& a, const SExp& b) { return compare(a, b) < 0; }
  static int compare(const SExp& a, const SExp& b);

 private:
  struct Node {
    Kind kind = Kind::kZero;
    std::string action;
    BinaryOp op;
    std::vector<SExp> children;
    std::size_t hash = 0;
    std::size_t size = 1;
  };
  explicit SExp(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static SExp finish(Node n);
  std::shared_ptr<const Node> node_;
};

struct StarParseOptions {
  /// Accept `test[b ...]` as 1 +_b 0 (guarded semilattices only).
  bool gkat = false;
};

/// Grammar, loosest to tightest:
///   sum     := seq (('+' | '+[' param ']') seq)*           left-associative
///   seq     := postfix (';' postfix)*                      left-associative
///   postfix := atom ('^' ('*' | '[' param ']'))*
///   atom    := '0' | '1' | ident | 'test[' atoms ']' | '(' sum ')'
[[nodiscard]] SExp parse_sexp(std::string_view text, const TheorySpec& th, const StarParseOptions& opts = {});
[[nodiscard]] std::string to_string(const SExp& s, const TheorySpec& th);

/// Translation into process terms over the unit variable "$unit".
[[nodiscard]] Exp translate(const SExp& s);

using LTransition = Transition<SExp>;
using LBranching = NormalForm<LTransition>;

struct StarOptions {
  /// Rewrite 1;e to e in step targets.
  bool simplify = false;
};

/// The ℓ-semantics: SExp -> M({✓} + A×SExp).
[[nodiscard]] LBranching lstep(const SExp& s, const TheorySpec& th, const StarOptions& opts = {});

struct StarCoalgebra {
  Coalgebra coalgebra;  // Tick leaves for ✓
  std::vector<SExp> labels;
};

[[nodiscard]] StarCoalgebra star_reachable(const SExp& s, const TheorySpec& th, const StarOptions& opts = {},
                                           std::size_t cap = kDefaultStateCap);
[[nodiscard]] Equivalence star_equivalent(const SExp& a, const SExp& b, const TheorySpec& th,
                                          const StarOptions& opts = {}, std::size_t cap = kDefaultStateCap);

/// Replaces Output "$unit" leaves by Tick.
[[nodiscard]] Coalgebra identify_unit(const Coalgebra& c);

/// The unit is guarded in translate(s).
[[nodiscard]] bool is_guarded_star(const SExp& s);

/// Total ✓-mass of ℓ(s) (probabilistic theories only).
[[nodiscard]] Rational tick_mass(const SExp& s, const TheorySpec& th);

enum class EStarAxiom { kE1, kE2, kE3, kE4, kE5, kE6 };

[[nodiscard]] std::optional<EStarAxiom> estar_axiom_from_name(std::string_view name);
[[nodiscard]] std::string_view estar_axiom_name(EStarAxiom ax);

/// Metavariables of an E* instance. E1/E2: e. E3: e, f, g as e1, e2, e3.
/// E4: e, tau, sigma. E5: e, sigma. E6: e, f, g, sigma.
struct EStarInstance {
  SExp e;
  SExp f;
  SExp g;
  BinaryOp sigma;
  BinaryOp tau;
};

struct EStarCheck {
  enum class Status { kHolds, kFails, kSideConditionViolated };
  Status status = Status::kFails;
  std::string detail;
  /// The instance's two sides (for E6 the conclusion).
  SExp lhs;
  SExp rhs;
};

/// Checks side conditions syntactically (unless `ignore_side_conditions`),
/// then the instance semantically. For E6 the premise g = e;g +σ f is a
/// side condition, checked semantically.
[[nodiscard]] EStarCheck check_estar_instance(EStarAxiom ax, const EStarInstance& inst, const TheorySpec& th,
                                              bool ignore_side_conditions = false);

/// e -> ✓ for semilattices and multisets: ✓ occurs in ℓ(e).
[[nodiscard]] bool terminates(const SExp& s, const TheorySpec& th);
/// e => b for guarded semilattices: the atoms at which ℓ(e) is ✓.
[[nodiscard]] GuardMask output_guard(const SExp& s, const TheorySpec& th);

/// The guarded part ∂e (semilattices and guarded semilattices only).
[[nodiscard]] SExp partial_derivative(const SExp& s, const TheorySpec& th);

}  // namespace algproc
