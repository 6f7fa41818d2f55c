#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "algproc/exp.hpp"
#include "algproc/theory.hpp"

namespace algproc {

/// One rewrite in an equational chain. `lhs` and `rhs` are whole terms; the
/// rule is applied to the subterms at path `at` (child indices through
/// operation nodes and prefixes), and the terms must agree elsewhere.
///
/// rule:
///   "axiom"  theory axiom `axiom`, metavariables from `inst` or by matching,
///            parameters from `params` (guards as atom lists, probabilities p/q)
///   "R1"     μv.e  =  e[μv.e//v]
///   "R2"     μv.e  =  μw.(e[w/v])            w not free in e
///   "R3"     g     =  μv.e                   lemma `premise` proves g = e[g/v],
///                                            v guarded in e
///   "lemma"  the equation proved by lemma `premise`
///   "Refl"   lhs = rhs
/// `sym` applies the rule right to left.
struct ProofStep {
  std::string rule;
  std::string axiom;
  std::map<std::string, std::string> inst;
  std::map<std::string, std::string> params;
  std::vector<std::int64_t> at;
  std::string lhs;
  std::string rhs;
  bool sym = false;
  std::optional<std::int64_t> premise;
};

struct ProofBlock {
  std::string goal_lhs;
  std::string goal_rhs;
  std::vector<ProofStep> steps;
};

/// Terms are kept as text so that malformed terms surface as rejections.
struct Proof {
  std::string theory;
  std::vector<std::string> atoms;
  std::set<std::string> actions;
  ProofBlock main;
  /// Auxiliary derivations, checked first and in order; a lemma may cite
  /// earlier lemmas only.
  std::vector<ProofBlock> lemmas;
};

/// Reads the proof JSON format. Throws FormatError if the document is not
/// valid JSON or lacks the theory, goal or steps.
[[nodiscard]] Proof parse_proof(std::string_view json_text);
[[nodiscard]] std::string proof_to_json(const Proof& p);

/// Theory selected by the proof header. Throws TheoryError.
[[nodiscard]] TheorySpec proof_theory(const Proof& p);

struct StepCheck {
  bool ok = false;
  std::string reason;
};

/// Equations available to "R3" and "lemma" steps, indexed like Proof::lemmas.
using Premises = std::vector<std::pair<Exp, Exp>>;

/// Checks a single step in isolation.
[[nodiscard]] StepCheck check_step(const ProofStep& s, const TheorySpec& th, const Premises& premises = {},
                                   const ParseOptions& opts = {});

struct ProofVerdict {
  bool accepted = false;
  /// Where the proof failed: lemma index (nullopt for the main derivation)
  /// and 1-based step (0 for the goal itself).
  std::optional<std::size_t> lemma;
  std::size_t step = 0;
  std::string reason;
};

/// Never throws on proof content; problems become rejection reasons.
[[nodiscard]] ProofVerdict check_proof(const Proof& p, const TheorySpec& th);

/// Instantiates a schematic term. Returns nullopt when a parameter does not
/// resolve or a metavariable is unbound.
[[nodiscard]] std::optional<Exp> instantiate(const SchemaPtr& t, const std::map<std::string, Exp>& metas,
                                             const ParamEnv& env, const TheorySpec& th);

}  // namespace algproc
