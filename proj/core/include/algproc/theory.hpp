#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algproc/errors.hpp"
#include "algproc/rational.hpp"

namespace algproc {

/// The five built-in branching theories.
enum class TheoryId { kSL, kCM, kGS, kCA, kCS };

/// Binary operation families. `kPlus` is the unparametrised choice of SL, CM
/// and CS; `kGuarded` is +_b of GS; `kProb` is +_p of CA and CS.
enum class OpKind { kPlus, kGuarded, kProb };

/// Atom subsets are bit masks over the theory's ordered atom list, so at most
/// 64 atoms are supported.
using GuardMask = std::uint64_t;

/// A concrete binary operation symbol, including its parameter.
struct BinaryOp {
  OpKind kind = OpKind::kPlus;
  GuardMask guard = 0;
  Rational prob;

  static BinaryOp plus() { return {}; }
  static BinaryOp guarded(GuardMask g) { return {OpKind::kGuarded, g, {}}; }
  static BinaryOp probabilistic(Rational p) { return {OpKind::kProb, 0, std::move(p)}; }

  [[nodiscard]] std::size_t hash() const;

  friend bool operator==(const BinaryOp&, const BinaryOp&) = default;
  friend std::strong_ordering operator<=>(const BinaryOp&, const BinaryOp&) = default;
};

/// What the free-algebra backend needs to know about a theory.
struct Backend {
  TheoryId id = TheoryId::kSL;
  std::size_t atom_count = 0;

  friend bool operator==(const Backend&, const Backend&) = default;
};

// ---------------------------------------------------------------------------
// Schematic axioms

/// Symbolic parameter of a schematic operation: a guard or probability
/// variable, the top element (At or 1), complement (b̄ or 1-p), meet
/// (b∩c or pq) and, for probabilities only, division.
struct ParamExpr {
  enum class Kind { kVar, kTop, kNot, kMeet, kDiv };
  Kind kind = Kind::kVar;
  std::string var;
  std::shared_ptr<const ParamExpr> lhs;
  std::shared_ptr<const ParamExpr> rhs;
};
using ParamPtr = std::shared_ptr<const ParamExpr>;

struct SchemaTerm {
  enum class Kind { kMeta, kZero, kNode };
  Kind kind = Kind::kZero;
  std::string meta;
  OpKind family = OpKind::kPlus;
  ParamPtr param;  // null for kPlus
  std::shared_ptr<const SchemaTerm> left;
  std::shared_ptr<const SchemaTerm> right;
};
using SchemaPtr = std::shared_ptr<const SchemaTerm>;

struct Axiom {
  std::string name;  // e.g. "SL3", "CA4", "D"
  SchemaPtr lhs;
  SchemaPtr rhs;
  std::vector<std::string> metavariables;  // in order of first occurrence
  std::vector<std::string> parameters;     // guard / probability variables
};

/// Concrete values for parameter variables: guard masks for GS, rationals for CA/CS.
struct ParamEnv {
  std::map<std::string, GuardMask> guards;
  std::map<std::string, Rational> probs;
};

enum class ParamKind { kNone, kGuard, kProbability };

struct OperationDecl {
  std::string symbol;
  int arity = 0;
  ParamKind param = ParamKind::kNone;
};

// ---------------------------------------------------------------------------

class TheorySpec {
 public:
  /// Builds one of the built-in theories. GS requires a nonempty atom list.
  static TheorySpec make(TheoryId id, std::vector<std::string> atoms = {});
  /// Accepts the CLI spellings "sl", "cm", "gs", "ca", "cs".
  static TheorySpec from_name(std::string_view name, std::vector<std::string> atoms = {});

  [[nodiscard]] TheoryId id() const { return id_; }
  [[nodiscard]] std::string_view name() const;
  [[nodiscard]] const std::vector<std::string>& atoms() const { return atoms_; }
  [[nodiscard]] const std::vector<OperationDecl>& operations() const { return operations_; }
  [[nodiscard]] const std::vector<Axiom>& axioms() const { return axioms_; }
  [[nodiscard]] Backend backend() const { return {id_, atoms_.size()}; }

  [[nodiscard]] GuardMask all_atoms() const;
  [[nodiscard]] std::optional<std::size_t> atom_index(std::string_view atom) const;
  /// Parses a space-separated atom list ("b c", "" for the empty guard).
  [[nodiscard]] GuardMask parse_guard(std::string_view text) const;
  [[nodiscard]] std::string format_guard(GuardMask mask) const;

  [[nodiscard]] bool allows(OpKind kind) const;
  /// Throws TheoryError when `op` is not an operation of this theory.
  void validate(const BinaryOp& op) const;
  /// Surface spelling: "+", "+[b c]", "+[1/2]".
  [[nodiscard]] std::string format_op(const BinaryOp& op) const;
  /// Parses the text between the brackets of "+[...]"; `bracketed == false` means plain "+".
  [[nodiscard]] BinaryOp parse_op(std::string_view param, bool bracketed) const;

  [[nodiscard]] const Axiom* find_axiom(std::string_view name) const;

  /// Resolves a schematic parameter. Returns nullopt when a side condition fails
  /// (division by zero in CA4 when pq = 1) or a variable is unbound.
  [[nodiscard]] std::optional<BinaryOp> resolve(OpKind family, const ParamPtr& param,
                                                const ParamEnv& env) const;

  friend bool operator==(const TheorySpec& a, const TheorySpec& b) {
    return a.id_ == b.id_ && a.atoms_ == b.atoms_;
  }

 private:
  TheoryId id_ = TheoryId::kSL;
  std::vector<std::string> atoms_;
  std::vector<OperationDecl> operations_;
  std::vector<Axiom> axioms_;
};

/// Syntactic skew-associativity: for every ordered pair of binary operation
/// families (F1, F2) of the theory, some axiom has one side of the shape
/// F1(x, F2(y, z)) and the other of the shape F3(F4(x, y), z), modulo renaming
/// of metavariables. Symbolic parameters cover every parameter instance.
/// Throws TheoryError for operations of arity > 2.
[[nodiscard]] bool is_skew_associative(const TheorySpec& theory);

}  // namespace algproc
