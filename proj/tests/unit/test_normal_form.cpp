#include <doctest.h>

#include "algproc/io.hpp"
#include "algproc/normal_form.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace algproc;
using namespace algproc::testing;

namespace {

using T = STerm<int>;
using NF = NormalForm<int>;

T random_term(const TheorySpec& th, Rng& rng, int depth, int gens) {
  if (depth <= 0 || rng.coin(25)) {
    if (rng.coin(20)) return T::zero();
    return T::leaf(static_cast<int>(rng.below(static_cast<std::size_t>(gens))));
  }
  return T::node(random_op(th, rng), random_term(th, rng, depth - 1, gens), random_term(th, rng, depth - 1, gens));
}

T schema_term(const SchemaPtr& s, const std::map<std::string, T>& metas, const ParamEnv& env, const TheorySpec& th) {
  switch (s->kind) {
    case SchemaTerm::Kind::kMeta:
      return metas.at(s->meta);
    case SchemaTerm::Kind::kZero:
      return T::zero();
    case SchemaTerm::Kind::kNode:
      break;
  }
  auto op = th.resolve(s->family, s->param, env);
  REQUIRE(op.has_value());
  return T::node(*op, schema_term(s->left, metas, env, th), schema_term(s->right, metas, env, th));
}

ParamEnv random_env(const Axiom& ax, const TheorySpec& th, Rng& rng) {
  for (;;) {
    ParamEnv env;
    for (const auto& p : ax.parameters) {
      if (th.id() == TheoryId::kGS) {
        env.guards[p] = rng.below(th.all_atoms() + 1);
      } else {
        env.probs[p] = random_prob(rng);
      }
    }
    // CA4 needs pq != 1.
    if (ax.name == "CA4" && env.probs["p"] * env.probs["q"] == Rational(1)) continue;
    return env;
  }
}

std::string text(const T& t, const TheorySpec& th) {
  return format_sterm(t, th, [](int g) { return "x" + std::to_string(g); });
}

}  // namespace

TEST_CASE("axioms hold in every backend") {
  Rng rng(11);
  const std::vector<T> values = {T::zero(), T::leaf(0), T::leaf(1), T::leaf(2)};
  for (const auto& th : all_theories()) {
    for (const auto& ax : th.axioms()) {
      CAPTURE(ax.name);
      const int rounds = ax.parameters.empty() ? 1 : 20;
      for (int r = 0; r < rounds; ++r) {
        const ParamEnv env = random_env(ax, th, rng);
        // Every assignment of the metavariables.
        std::vector<std::size_t> pick(ax.metavariables.size(), 0);
        for (;;) {
          std::map<std::string, T> metas;
          for (std::size_t i = 0; i < pick.size(); ++i) metas.insert_or_assign(ax.metavariables[i], values[pick[i]]);
          const T l = schema_term(ax.lhs, metas, env, th);
          const T rr = schema_term(ax.rhs, metas, env, th);
          CHECK(nf_equal(nf_of_term(l, th), nf_of_term(rr, th)));
          CHECK(oracle_equal_terms(l, rr, th));
          std::size_t i = 0;
          while (i < pick.size() && ++pick[i] == values.size()) pick[i++] = 0;
          if (i == pick.size()) break;
        }
      }
    }
  }
}

TEST_CASE("distinct generators have distinct normal forms") {
  for (const auto& th : all_theories()) {
    CHECK_FALSE(nf_equal(NF::unit(th.backend(), 0), NF::unit(th.backend(), 1)));
    CHECK_FALSE(nf_equal(NF::unit(th.backend(), 0), NF::zero(th.backend())));
  }
}

TEST_CASE("normal forms agree with the concrete models") {
  Rng rng(12);
  for (const auto& th : all_theories()) {
    CAPTURE(th.name());
    for (int i = 0; i < 300; ++i) {
      const T a = random_term(th, rng, 3, 2);
      const T b = random_term(th, rng, 3, 2);
      const NF na = nf_of_term(a, th);
      CAPTURE(text(a, th));
      CAPTURE(text(b, th));
      // The canonical reading denotes the same value.
      CHECK(oracle_equal_terms(a, na.to_term(), th));
      CHECK(nf_equal(na, nf_of_term(na.to_term(), th)));
      // Normal forms are canonical: equal exactly when the values are.
      CHECK(nf_equal(na, nf_of_term(b, th)) == oracle_equal_terms(a, b, th));
    }
  }
}

TEST_CASE("functor and monad laws") {
  Rng rng(13);
  for (const auto& th : all_theories()) {
    CAPTURE(th.name());
    const Backend be = th.backend();
    std::vector<NF> pool;
    for (int i = 0; i < 6; ++i) pool.push_back(nf_of_term(random_term(th, rng, 2, 3), th));
    using NF2 = NormalForm<NF>;
    using NF3 = NormalForm<NF2>;
    auto random_nested = [&](int depth) {
      return NF2::of_term(
          random_term(th, rng, depth, 3).map([&](int g) { return pool[static_cast<std::size_t>(g) % pool.size()]; }),
          th);
    };
    for (int i = 0; i < 40; ++i) {
      const NF a = pool[rng.below(pool.size())];
      auto f = [](int g) { return (g + 1) % 3; };
      auto g = [](int x) { return x * 2; };
      CHECK(nf_map(a, [](int x) { return x; }) == a);
      CHECK(nf_map(nf_map(a, f), g) == nf_map(a, [&](int x) { return g(f(x)); }));
      CHECK(nf_flatten(nf_map(a, [&](int x) { return NF::unit(be, x); })) == a);
      CHECK(nf_flatten(NF2::unit(be, a)) == a);

      std::vector<NF2> pool2 = {random_nested(2), random_nested(1), random_nested(2)};
      const NF3 x = NF3::of_term(
          random_term(th, rng, 2, 3).map([&](int k) { return pool2[static_cast<std::size_t>(k)]; }), th);
      CHECK(nf_flatten(nf_flatten(x)) == nf_flatten(nf_map(x, [](const NF2& y) { return nf_flatten(y); })));
    }
  }
}

TEST_CASE("canonical readings") {
  const auto ca = TheorySpec::make(TheoryId::kCA);
  const Rational half = Rational(1) / Rational(2);
  const Rational sixth = Rational(1) / Rational(6);
  const Rational third = Rational(1) / Rational(3);
  const NF d = NF::from_subdist(ca.backend(), {{0, half}, {1, sixth}, {2, third}});
  CHECK(text(d.to_term(), ca) == "x0 +[1/2] (x1 +[1/3] x2)");
  CHECK(text(NF::from_subdist(ca.backend(), {{0, half}}).to_term(), ca) == "x0 +[1/2] 0");
  CHECK(text(NF::zero(ca.backend()).to_term(), ca) == "0");

  const auto gs = TheorySpec::make(TheoryId::kGS, {"b", "c"});
  CHECK(text(NF::from_guarded(gs.backend(), {0, 1}).to_term(), gs) == "x0 +[b] x1");
  CHECK(text(NF::from_guarded(gs.backend(), {std::nullopt, 1}).to_term(), gs) == "0 +[b] x1");
  CHECK(text(NF::from_guarded(gs.backend(), {1, 1}).to_term(), gs) == "x1");

  const auto sl = TheorySpec::make(TheoryId::kSL);
  CHECK(text(NF::from_set(sl.backend(), {2, 0, 1, 0}).to_term(), sl) == "x0 + (x1 + x2)");
  const auto cm = TheorySpec::make(TheoryId::kCM);
  CHECK(text(NF::from_bag(cm.backend(), {{0, 2}, {1, 1}}).to_term(), cm) == "x0 + (x0 + x1)");
}

TEST_CASE("convex canonical form keeps exactly the undominated generators") {
  Rng rng(14);
  const auto cs = TheorySpec::make(TheoryId::kCS);
  for (int i = 0; i < 200; ++i) {
    std::vector<NF::Subdist> gens;
    const std::size_t n = 1 + rng.below(4);
    for (std::size_t k = 0; k < n; ++k) {
      // Up to three coordinates; the missing mass is deadlock.
      NF::Subdist d;
      Rational left(1);
      for (int g = 0; g < 3; ++g) {
        if (rng.coin(40)) continue;
        Rational p = random_prob(rng) * left;
        if (p.is_zero()) continue;
        d[g] = p;
        left -= p;
      }
      gens.push_back(d);
    }
    const NF nf = NF::from_convex(cs.backend(), gens);
    const auto& kept = nf.convex();
    REQUIRE(!kept.empty());
    CHECK(kept.front().empty());
    std::vector<Dist<int>> kept_list(kept.begin() + 1, kept.end());
    for (const auto& g : gens) {
      if (std::find(kept.begin(), kept.end(), g) != kept.end()) continue;
      CHECK(oracle_hull_within<int>({g}, kept_list));
    }
    for (std::size_t k = 0; k < kept_list.size(); ++k) {
      CHECK(std::find(gens.begin(), gens.end(), kept_list[k]) != gens.end());
      auto others = kept_list;
      others.erase(others.begin() + static_cast<std::ptrdiff_t>(k));
      CHECK_FALSE(oracle_hull_within<int>({kept_list[k]}, others));
    }
  }
}

TEST_CASE("convex set of a mixed and a plain generator") {
  // conv({x0 +1/3 x1}, {x2}) with x0 = (a1,e), x1 = (a2,w), x2 = (a2,e).
  const auto cs = TheorySpec::make(TheoryId::kCS);
  const T t = T::node(BinaryOp::plus(),
                      T::node(BinaryOp::probabilistic(Rational(1) / Rational(3)), T::leaf(0), T::leaf(1)), T::leaf(2));
  const NF nf = nf_of_term(t, cs);
  REQUIRE(nf.convex().size() == 3);
  CHECK(text(nf.to_term(), cs) == "x0 +[1/3] x1 + x2");
}

TEST_CASE("backend mismatch is an error") {
  const auto sl = TheorySpec::make(TheoryId::kSL);
  const auto cm = TheorySpec::make(TheoryId::kCM);
  CHECK_THROWS_AS((void)nf_equal(NF::zero(sl.backend()), NF::zero(cm.backend())), TheoryError);
  CHECK_THROWS_AS((void)nf_of_term(T::node(BinaryOp::probabilistic(Rational(1)), T::zero(), T::zero()), sl),
                  TheoryError);
}
