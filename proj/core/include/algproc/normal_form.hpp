#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "algproc/convex.hpp"
#include "algproc/errors.hpp"
#include "algproc/rational.hpp"
#include "algproc/sterm.hpp"
#include "algproc/theory.hpp"

namespace algproc {

/// Canonical element of the free algebra M(G) of one of the built-in theories.
///
///   SL  finite set of generators (sorted, deduplicated)
///   CM  multiset: generator -> positive multiplicity
///   GS  total map atom -> (deadlock | generator)
///   CA  subdistribution: generator -> positive mass, total mass <= 1
///   CS  down-closed convex set of subdistributions, stored as the zero
///       subdistribution followed by its maximal extreme points
///
/// Two normal forms are equal as free-algebra elements iff they are equal
/// structurally. G needs a strict weak order `<` consistent with `==`.
template <class G>
class NormalForm {
 public:
  using Generator = G;
  using SetRep = std::vector<G>;
  using BagRep = std::map<G, std::uint64_t>;
  using GuardRep = std::vector<std::optional<G>>;
  using Subdist = std::map<G, Rational>;
  using ConvexRep = std::vector<Subdist>;

  NormalForm() = default;

  [[nodiscard]] static NormalForm zero(Backend b) {
    NormalForm nf;
    nf.backend_ = b;
    switch (b.id) {
      case TheoryId::kSL: nf.rep_ = SetRep{}; break;
      case TheoryId::kCM: nf.rep_ = BagRep{}; break;
      case TheoryId::kGS: nf.rep_ = GuardRep(b.atom_count); break;
      case TheoryId::kCA: nf.rep_ = Subdist{}; break;
      case TheoryId::kCS: nf.rep_ = ConvexRep{Subdist{}}; break;
    }
    return nf;
  }

  [[nodiscard]] static NormalForm unit(Backend b, G g) {
    NormalForm nf;
    nf.backend_ = b;
    switch (b.id) {
      case TheoryId::kSL: nf.rep_ = SetRep{std::move(g)}; break;
      case TheoryId::kCM: nf.rep_ = BagRep{{std::move(g), 1}}; break;
      case TheoryId::kGS: nf.rep_ = GuardRep(b.atom_count, std::optional<G>(std::move(g))); break;
      case TheoryId::kCA: nf.rep_ = Subdist{{std::move(g), Rational(1)}}; break;
      case TheoryId::kCS: nf.rep_ = ConvexRep{Subdist{}, Subdist{{std::move(g), Rational(1)}}}; break;
    }
    return nf;
  }

  // Raw constructors; each canonicalises its input.
  [[nodiscard]] static NormalForm from_set(Backend b, std::vector<G> gens) {
    require(b, TheoryId::kSL);
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return make(b, std::move(gens));
  }
  [[nodiscard]] static NormalForm from_bag(Backend b, BagRep bag) {
    require(b, TheoryId::kCM);
    std::erase_if(bag, [](const auto& kv) { return kv.second == 0; });
    return make(b, std::move(bag));
  }
  [[nodiscard]] static NormalForm from_guarded(Backend b, GuardRep values) {
    require(b, TheoryId::kGS);
    if (values.size() != b.atom_count) throw TheoryError("guarded value has wrong number of atoms");
    return make(b, std::move(values));
  }
  [[nodiscard]] static NormalForm from_subdist(Backend b, Subdist d) {
    require(b, TheoryId::kCA);
    return make(b, check_subdist(std::move(d)));
  }
  [[nodiscard]] static NormalForm from_convex(Backend b, std::vector<Subdist> gens) {
    require(b, TheoryId::kCS);
    for (auto& g : gens) g = check_subdist(std::move(g));
    return make(b, canonical_convex(std::move(gens)));
  }

  /// Interprets `op` in the free algebra. Operands must share a backend.
  [[nodiscard]] static NormalForm combine(const BinaryOp& op, const NormalForm& a, const NormalForm& b) {
    if (!(a.backend_ == b.backend_)) throw TheoryError("normal forms of different theories combined");
    const Backend be = a.backend_;
    switch (be.id) {
      case TheoryId::kSL: {
        expect(op, OpKind::kPlus);
        SetRep out;
        std::set_union(a.set().begin(), a.set().end(), b.set().begin(), b.set().end(),
                       std::back_inserter(out));
        return make(be, std::move(out));
      }
      case TheoryId::kCM: {
        expect(op, OpKind::kPlus);
        BagRep out = a.bag();
        for (const auto& [g, n] : b.bag()) out[g] += n;
        return make(be, std::move(out));
      }
      case TheoryId::kGS: {
        expect(op, OpKind::kGuarded);
        GuardRep out(be.atom_count);
        for (std::size_t i = 0; i < be.atom_count; ++i)
          out[i] = (op.guard >> i) & 1U ? a.guarded()[i] : b.guarded()[i];
        return make(be, std::move(out));
      }
      case TheoryId::kCA:
        expect(op, OpKind::kProb);
        return make(be, mix(op.prob, a.subdist(), b.subdist()));
      case TheoryId::kCS: {
        std::vector<Subdist> gens;
        if (op.kind == OpKind::kPlus) {
          gens = a.convex();
          gens.insert(gens.end(), b.convex().begin(), b.convex().end());
        } else {
          expect(op, OpKind::kProb);
          for (const auto& x : a.convex())
            for (const auto& y : b.convex()) gens.push_back(mix(op.prob, x, y));
        }
        return make(be, canonical_convex(std::move(gens)));
      }
    }
    throw TheoryError("unknown backend");
  }

  /// Evaluates a term in the free algebra, validating every operation.
  [[nodiscard]] static NormalForm of_term(const STerm<G>& t, const TheorySpec& th) {
    const Backend be = th.backend();
    return t.fold([&] { return zero(be); }, [&](const G& g) { return unit(be, g); },
                  [&](const BinaryOp& op, NormalForm a, NormalForm b) {
                    th.validate(op);
                    return combine(op, a, b);
                  });
  }

  /// Canonical term reading; `of_term(to_term())` reproduces *this.
  [[nodiscard]] STerm<G> to_term() const {
    using T = STerm<G>;
    switch (backend_.id) {
      case TheoryId::kSL:
        return sum_of(set().begin(), set().end(), [](const G& g) { return T::leaf(g); });
      case TheoryId::kCM: {
        std::vector<G> flat;
        for (const auto& [g, n] : bag())
          for (std::uint64_t i = 0; i < n; ++i) flat.push_back(g);
        return sum_of(flat.begin(), flat.end(), [](const G& g) { return T::leaf(g); });
      }
      case TheoryId::kGS:
        return guarded_term();
      case TheoryId::kCA:
        return dist_term(subdist());
      case TheoryId::kCS: {
        const auto& gens = convex();
        return sum_of(gens.begin() + 1, gens.end(), [](const Subdist& d) { return dist_term(d); });
      }
    }
    return T::zero();
  }

  /// Functor action: applies f to every generator and re-canonicalises.
  template <class F>
  [[nodiscard]] auto map(F&& f) const -> NormalForm<std::decay_t<std::invoke_result_t<F&, const G&>>> {
    using H = std::decay_t<std::invoke_result_t<F&, const G&>>;
    using Out = NormalForm<H>;
    switch (backend_.id) {
      case TheoryId::kSL: {
        std::vector<H> out;
        out.reserve(set().size());
        for (const auto& g : set()) out.push_back(f(g));
        return Out::from_set(backend_, std::move(out));
      }
      case TheoryId::kCM: {
        typename Out::BagRep out;
        for (const auto& [g, n] : bag()) out[f(g)] += n;
        return Out::from_bag(backend_, std::move(out));
      }
      case TheoryId::kGS: {
        typename Out::GuardRep out(backend_.atom_count);
        for (std::size_t i = 0; i < out.size(); ++i)
          if (guarded()[i]) out[i] = f(*guarded()[i]);
        return Out::from_guarded(backend_, std::move(out));
      }
      case TheoryId::kCA:
        return Out::from_subdist(backend_, map_subdist<H>(subdist(), f));
      case TheoryId::kCS: {
        std::vector<typename Out::Subdist> out;
        for (const auto& d : convex()) out.push_back(map_subdist<H>(d, f));
        return Out::from_convex(backend_, std::move(out));
      }
    }
    throw TheoryError("unknown backend");
  }

  /// Monad multiplication on M(M(G)).
  [[nodiscard]] static NormalForm flatten(const NormalForm<NormalForm<G>>& nested) {
    const Backend be = nested.backend();
    switch (be.id) {
      case TheoryId::kSL: {
        std::vector<G> out;
        for (const auto& inner : nested.set()) {
          check_inner(be, inner);
          out.insert(out.end(), inner.set().begin(), inner.set().end());
        }
        return from_set(be, std::move(out));
      }
      case TheoryId::kCM: {
        BagRep out;
        for (const auto& [inner, n] : nested.bag()) {
          check_inner(be, inner);
          for (const auto& [g, m] : inner.bag()) out[g] += n * m;
        }
        return from_bag(be, std::move(out));
      }
      case TheoryId::kGS: {
        GuardRep out(be.atom_count);
        for (std::size_t i = 0; i < be.atom_count; ++i) {
          const auto& inner = nested.guarded()[i];
          if (!inner) continue;
          check_inner(be, *inner);
          out[i] = inner->guarded()[i];
        }
        return make(be, std::move(out));
      }
      case TheoryId::kCA: {
        Subdist out;
        for (const auto& [inner, w] : nested.subdist()) {
          check_inner(be, inner);
          for (const auto& [g, m] : inner.subdist()) out[g] += w * m;
        }
        return from_subdist(be, std::move(out));
      }
      case TheoryId::kCS: {
        std::vector<Subdist> gens;
        for (const auto& outer : nested.convex()) {
          // Every choice of one generator per inner set, weighted by the outer masses.
          std::vector<Subdist> partial{Subdist{}};
          for (const auto& [inner, w] : outer) {
            check_inner(be, inner);
            std::vector<Subdist> next;
            for (const auto& acc : partial)
              for (const auto& choice : inner.convex()) {
                Subdist d = acc;
                for (const auto& [g, m] : choice) d[g] += w * m;
                next.push_back(std::move(d));
              }
            partial = canonical_convex(std::move(next));
          }
          gens.insert(gens.end(), partial.begin(), partial.end());
        }
        return make(be, canonical_convex(std::move(gens)));
      }
    }
    throw TheoryError("unknown backend");
  }

  /// Kleisli extension: flatten(map(f)).
  template <class F>
  [[nodiscard]] auto bind(F&& f) const {
    using Inner = std::decay_t<std::invoke_result_t<F&, const G&>>;
    using H = typename Inner::Generator;
    return NormalForm<H>::flatten(map(std::forward<F>(f)));
  }

  /// Every generator occurring in the value, sorted and deduplicated.
  [[nodiscard]] std::vector<G> support() const {
    std::vector<G> out;
    switch (backend_.id) {
      case TheoryId::kSL: out = set(); break;
      case TheoryId::kCM:
        for (const auto& kv : bag()) out.push_back(kv.first);
        break;
      case TheoryId::kGS:
        for (const auto& v : guarded())
          if (v) out.push_back(*v);
        break;
      case TheoryId::kCA:
        for (const auto& kv : subdist()) out.push_back(kv.first);
        break;
      case TheoryId::kCS:
        for (const auto& d : convex())
          for (const auto& kv : d) out.push_back(kv.first);
        break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  [[nodiscard]] bool is_zero() const { return *this == zero(backend_); }
  [[nodiscard]] Backend backend() const { return backend_; }

  [[nodiscard]] const SetRep& set() const { return std::get<SetRep>(rep_); }
  [[nodiscard]] const BagRep& bag() const { return std::get<BagRep>(rep_); }
  [[nodiscard]] const GuardRep& guarded() const { return std::get<GuardRep>(rep_); }
  [[nodiscard]] const Subdist& subdist() const { return std::get<Subdist>(rep_); }
  [[nodiscard]] const ConvexRep& convex() const { return std::get<ConvexRep>(rep_); }

  /// Three-way comparison; equal iff the same free-algebra element.
  [[nodiscard]] int compare(const NormalForm& o) const {
    if (backend_.id != o.backend_.id) return backend_.id < o.backend_.id ? -1 : 1;
    if (backend_.atom_count != o.backend_.atom_count) return backend_.atom_count < o.backend_.atom_count ? -1 : 1;
    switch (backend_.id) {
      case TheoryId::kSL: return cmp_range(set(), o.set(), cmp_value<G>);
      case TheoryId::kCM: return cmp_range(bag(), o.bag(), cmp_pair<std::uint64_t>);
      case TheoryId::kGS:
        return cmp_range(guarded(), o.guarded(), [](const std::optional<G>& a, const std::optional<G>& b) {
          if (!a || !b) return a ? 1 : (b ? -1 : 0);
          return cmp_value(*a, *b);
        });
      case TheoryId::kCA: return cmp_range(subdist(), o.subdist(), cmp_pair<Rational>);
      case TheoryId::kCS:
        return cmp_range(convex(), o.convex(),
                         [](const Subdist& a, const Subdist& b) { return cmp_range(a, b, cmp_pair<Rational>); });
    }
    return 0;
  }

  friend bool operator==(const NormalForm& a, const NormalForm& b) { return a.compare(b) == 0; }
  friend bool operator<(const NormalForm& a, const NormalForm& b) { return a.compare(b) < 0; }

 private:
  template <class H>
  friend class NormalForm;

  using Rep = std::variant<SetRep, BagRep, GuardRep, Subdist, ConvexRep>;

  template <class R>
  static NormalForm make(Backend b, R rep) {
    NormalForm nf;
    nf.backend_ = b;
    nf.rep_ = std::move(rep);
    return nf;
  }

  static void require(Backend b, TheoryId id) {
    if (b.id != id) throw TheoryError("normal-form constructor does not match the theory backend");
  }
  static void expect(const BinaryOp& op, OpKind kind) {
    if (op.kind != kind) throw TheoryError("operation is not part of this theory");
  }
  template <class Inner>
  static void check_inner(Backend b, const Inner& inner) {
    if (!(inner.backend() == b)) throw TheoryError("nested normal forms of different theories");
  }

  template <class T>
  static int cmp_value(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
  }
  template <class V>
  static int cmp_pair(const std::pair<const G, V>& a, const std::pair<const G, V>& b) {
    if (int c = cmp_value(a.first, b.first)) return c;
    return cmp_value(a.second, b.second);
  }
  template <class C, class F>
  static int cmp_range(const C& a, const C& b, F&& cmp) {
    auto i = a.begin();
    auto j = b.begin();
    for (; i != a.end() && j != b.end(); ++i, ++j)
      if (int c = cmp(*i, *j)) return c;
    if (i == a.end()) return j == b.end() ? 0 : -1;
    return 1;
  }

  static Subdist check_subdist(Subdist d) {
    Rational total;
    for (auto it = d.begin(); it != d.end();) {
      if (it->second.sign() < 0) throw TheoryError("negative mass in subdistribution");
      if (it->second.is_zero()) {
        it = d.erase(it);
      } else {
        total += it->second;
        ++it;
      }
    }
    if (total > Rational(1)) throw TheoryError("subdistribution has total mass above 1");
    return d;
  }

  static Subdist mix(const Rational& p, const Subdist& a, const Subdist& b) {
    Subdist out;
    const Rational q = Rational(1) - p;
    if (!p.is_zero())
      for (const auto& [g, m] : a) out[g] += p * m;
    if (!q.is_zero())
      for (const auto& [g, m] : b) out[g] += q * m;
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
  }

  template <class H, class F>
  static std::map<H, Rational> map_subdist(const Subdist& d, F& f) {
    std::map<H, Rational> out;
    for (const auto& [g, m] : d) out[f(g)] += m;
    return out;
  }

  /// Keeps the zero subdistribution plus every generator that is not below a
  /// convex combination of the remaining ones; the result is sorted.
  static ConvexRep canonical_convex(std::vector<Subdist> gens) {
    std::erase_if(gens, [](const Subdist& d) { return d.empty(); });
    std::sort(gens.begin(), gens.end(), [](const Subdist& a, const Subdist& b) {
      return cmp_range(a, b, cmp_pair<Rational>) < 0;
    });
    gens.erase(std::unique(gens.begin(), gens.end(),
                           [](const Subdist& a, const Subdist& b) { return cmp_range(a, b, cmp_pair<Rational>) == 0; }),
               gens.end());
    if (gens.size() > 1) {
      std::vector<G> coords;
      for (const auto& d : gens)
        for (const auto& kv : d) coords.push_back(kv.first);
      std::sort(coords.begin(), coords.end());
      coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
      auto index = [&](const G& g) {
        return static_cast<std::size_t>(std::lower_bound(coords.begin(), coords.end(), g) - coords.begin());
      };
      std::vector<RationalVector> vecs;
      for (const auto& d : gens) {
        RationalVector v(coords.size());
        for (const auto& [g, m] : d) v[index(g)] = m;
        vecs.push_back(std::move(v));
      }
      std::vector<bool> alive(gens.size(), true);
      for (std::size_t i = 0; i < gens.size(); ++i) {
        std::vector<RationalVector> others;
        for (std::size_t j = 0; j < gens.size(); ++j)
          if (j != i && alive[j]) others.push_back(vecs[j]);
        if (dominated_by_hull(vecs[i], others)) alive[i] = false;
      }
      std::vector<Subdist> kept;
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (alive[i]) kept.push_back(std::move(gens[i]));
      gens = std::move(kept);
    }
    gens.insert(gens.begin(), Subdist{});
    return gens;
  }

  template <class It, class F>
  static STerm<G> sum_of(It first, It last, F&& leaf) {
    if (first == last) return STerm<G>::zero();
    std::vector<STerm<G>> parts;
    for (; first != last; ++first) parts.push_back(leaf(*first));
    STerm<G> acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = STerm<G>::node(BinaryOp::plus(), parts[i], acc);
    return acc;
  }

  static STerm<G> dist_term(const Subdist& d) {
    using T = STerm<G>;
    if (d.empty()) return T::zero();
    std::vector<std::pair<G, Rational>> items(d.begin(), d.end());
    std::vector<Rational> weights;  // conditional probabilities
    Rational remaining(1);
    for (const auto& [g, m] : items) {
      weights.push_back(m / remaining);
      remaining -= m;
    }
    T acc = T::zero();
    std::size_t n = items.size();
    if (weights.back() == Rational(1)) {
      acc = T::leaf(items.back().first);
    } else {
      acc = T::node(BinaryOp::probabilistic(weights.back()), T::leaf(items.back().first), T::zero());
    }
    for (std::size_t i = n - 1; i-- > 0;)
      acc = T::node(BinaryOp::probabilistic(weights[i]), T::leaf(items[i].first), acc);
    return acc;
  }

  STerm<G> guarded_term() const {
    using T = STerm<G>;
    const auto& vals = guarded();
    // Group atoms by value, ordered by each group's first atom.
    std::vector<std::pair<std::optional<G>, GuardMask>> groups;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& grp) {
        if (!grp.first || !vals[i]) return !grp.first && !vals[i];
        return *grp.first == *vals[i];
      });
      if (it == groups.end()) {
        groups.emplace_back(vals[i], GuardMask{1} << i);
      } else {
        it->second |= GuardMask{1} << i;
      }
    }
    auto leaf = [](const std::optional<G>& v) { return v ? T::leaf(*v) : T::zero(); };
    if (groups.empty()) return T::zero();
    T acc = leaf(groups.back().first);
    for (std::size_t i = groups.size() - 1; i-- > 0;)
      acc = T::node(BinaryOp::guarded(groups[i].second), leaf(groups[i].first), acc);
    return acc;
  }

  Backend backend_{};
  Rep rep_{SetRep{}};
};

/// nf_of_term / nf_equal / nf_map / nf_flatten in free-function form.
template <class G>
[[nodiscard]] NormalForm<G> nf_of_term(const STerm<G>& t, const TheorySpec& th) {
  return NormalForm<G>::of_term(t, th);
}

template <class G>
[[nodiscard]] bool nf_equal(const NormalForm<G>& a, const NormalForm<G>& b) {
  if (!(a.backend() == b.backend())) throw TheoryError("comparing normal forms of different theories");
  return a == b;
}

template <class G, class F>
[[nodiscard]] auto nf_map(const NormalForm<G>& a, F&& f) {
  return a.map(std::forward<F>(f));
}

template <class G>
[[nodiscard]] NormalForm<G> nf_flatten(const NormalForm<NormalForm<G>>& a) {
  return NormalForm<G>::flatten(a);
}

}  // namespace algproc
