#include "algproc/equivalence.hpp"

#include <map>
#include <utility>

namespace algproc {

StateBranching signature(const Coalgebra& c, const Partition& p, std::size_t state) {
  return c.structure[state].map(
      [&](const StateTransition& t) { return t.retarget([&](std::size_t s) { return p.block[s]; }); });
}

Partition bisim_partition(const Coalgebra& c, std::vector<Partition>* history) {
  Partition p{std::vector<std::size_t>(c.size(), 0), c.size() == 0 ? 0U : 1U};
  if (history) history->push_back(p);
  for (;;) {
    std::map<std::pair<std::size_t, StateBranching>, std::size_t> ids;
    Partition next{std::vector<std::size_t>(c.size()), 0};
    for (std::size_t s = 0; s < c.size(); ++s) {
      auto [it, fresh] = ids.emplace(std::make_pair(p.block[s], signature(c, p, s)), ids.size());
      next.block[s] = it->second;
    }
    next.count = ids.size();
    const bool stable = next.count == p.count;
    p = std::move(next);
    if (history) history->push_back(p);
    if (stable) return p;
  }
}

Equivalence states_equivalent(const Coalgebra& c, std::size_t left, std::size_t right) {
  Equivalence out;
  out.coalgebra = c;
  out.left = left;
  out.right = right;
  std::vector<Partition> history;
  out.partition = bisim_partition(c, &history);
  out.equivalent = out.partition.block[left] == out.partition.block[right];
  if (!out.equivalent) {
    for (std::size_t r = 1; r < history.size(); ++r) {
      if (history[r].block[left] != history[r].block[right]) {
        out.split_round = r;
        out.left_signature = signature(c, history[r - 1], left);
        out.right_signature = signature(c, history[r - 1], right);
        break;
      }
    }
  }
  return out;
}

Equivalence equivalent(const Exp& e, const Exp& f, const TheorySpec& th, std::size_t cap) {
  Coalgebra a = reachable(e, th, cap);
  Coalgebra b = reachable(f, th, cap);
  const std::size_t offset = a.size();
  return states_equivalent(disjoint_union(a, b), 0, offset);
}

}  // namespace algproc
