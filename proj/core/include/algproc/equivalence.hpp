#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "algproc/semantics.hpp"

namespace algproc {

struct Partition {
  std::vector<std::size_t> block;  // state -> block id, ids dense from 0
  std::size_t count = 0;
};

/// Block-level signature of a state: its structure with every Step target
/// replaced by the target's block id.
[[nodiscard]] StateBranching signature(const Coalgebra& c, const Partition& p, std::size_t state);

/// Coarsest bisimulation partition by iterated signature refinement from the
/// one-block partition. `history`, if given, receives every round's partition
/// (round 0 is the one-block partition, the last entry is the fixpoint).
[[nodiscard]] Partition bisim_partition(const Coalgebra& c, std::vector<Partition>* history = nullptr);

struct Equivalence {
  bool equivalent = false;
  Coalgebra coalgebra;  // the coalgebra the check ran on
  std::size_t left = 0;
  std::size_t right = 0;
  Partition partition;  // final partition
  /// When inequivalent: the first refinement round separating the two states
  /// and their signatures over the previous round's partition.
  std::size_t split_round = 0;
  std::optional<StateBranching> left_signature;
  std::optional<StateBranching> right_signature;
};

[[nodiscard]] Equivalence states_equivalent(const Coalgebra& c, std::size_t left, std::size_t right);

/// Bisimilarity of e and f on the disjoint union of their reachable parts.
[[nodiscard]] Equivalence equivalent(const Exp& e, const Exp& f, const TheorySpec& th,
                                     std::size_t cap = kDefaultStateCap);

}  // namespace algproc
