#include <benchmark/benchmark.h>

#include <string>

#include "algproc/equivalence.hpp"
#include "algproc/solver.hpp"
#include "algproc/star.hpp"
#include "algproc/substitution.hpp"

using namespace algproc;

namespace {

// μx0.a.μx1.a. ... μx{n-1}.(a.x0 op b.x{n-1}): n reachable states on a cycle.
Exp ring(int n, const BinaryOp& op) {
  Exp body = Exp::op(op, Exp::prefix("a", Exp::var("x0")), Exp::prefix("b", Exp::var("x" + std::to_string(n - 1))));
  for (int i = n - 1; i >= 1; --i) body = Exp::prefix("a", Exp::mu("x" + std::to_string(i), body));
  return Exp::mu("x0", body);
}

// A cycle of n states where only state 0 outputs; refinement needs about n rounds.
Coalgebra cycle(const TheorySpec& th, std::size_t n) {
  Coalgebra c{th, {}, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    c.names.push_back("q" + std::to_string(i));
    std::vector<StateTransition> gens = {StateTransition::step("a", (i + 1) % n)};
    if (i == 0) gens.push_back(StateTransition::output("u"));
    c.structure.push_back(StateBranching::from_set(th.backend(), gens));
  }
  return c;
}

void BM_ReachableSL(benchmark::State& state) {
  const auto th = TheorySpec::make(TheoryId::kSL);
  const Exp e = ring(static_cast<int>(state.range(0)), BinaryOp::plus());
  for (auto _ : state) benchmark::DoNotOptimize(reachable(e, th).size());
}
BENCHMARK(BM_ReachableSL)->RangeMultiplier(2)->Range(4, 64);

void BM_ReachableCA(benchmark::State& state) {
  const auto th = TheorySpec::make(TheoryId::kCA);
  const Exp e = ring(static_cast<int>(state.range(0)), BinaryOp::probabilistic(Rational(1, 3)));
  for (auto _ : state) benchmark::DoNotOptimize(reachable(e, th).size());
}
BENCHMARK(BM_ReachableCA)->RangeMultiplier(2)->Range(4, 64);

void BM_BisimCycle(benchmark::State& state) {
  const auto th = TheorySpec::make(TheoryId::kSL);
  const Coalgebra c = cycle(th, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bisim_partition(c).count);
}
BENCHMARK(BM_BisimCycle)->RangeMultiplier(2)->Range(4, 128);

void BM_Synthesize(benchmark::State& state) {
  const auto th = TheorySpec::make(TheoryId::kSL);
  const Coalgebra c = cycle(th, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(c, 0).size());
}
BENCHMARK(BM_Synthesize)->RangeMultiplier(2)->Range(2, 16);

void BM_EquivalentUnfolding(benchmark::State& state) {
  const auto th = TheorySpec::make(TheoryId::kSL);
  const Exp e = ring(static_cast<int>(state.range(0)), BinaryOp::plus());
  const Exp unfolded = guarded_subst_exp(e.body(), e, "x0");
  for (auto _ : state) benchmark::DoNotOptimize(equivalent(e, unfolded, th).equivalent);
}
BENCHMARK(BM_EquivalentUnfolding)->RangeMultiplier(2)->Range(4, 32);

void BM_StarEquivalentGS(benchmark::State& state) {
  const auto th = TheorySpec::make(TheoryId::kGS, {"b", "c"});
  const SExp body = parse_sexp("a;b +[b] c", th);
  const SExp star = SExp::star(BinaryOp::guarded(th.parse_guard("b")), body);
  const SExp unrolled = SExp::choice(BinaryOp::guarded(th.parse_guard("b")), SExp::seq(body, star), SExp::one());
  for (auto _ : state) benchmark::DoNotOptimize(star_equivalent(star, unrolled, th).equivalent);
}
BENCHMARK(BM_StarEquivalentGS);

}  // namespace

BENCHMARK_MAIN();
