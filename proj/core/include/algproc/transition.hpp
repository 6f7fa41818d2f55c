#pragma once

#include <string>
#include <utility>

namespace algproc {

/// A leaf of a transition structure: an output variable, an action step into
/// a target, or the successful-termination tick of the star fragment.
/// Ordered by kind (Step < Output < Tick), then by fields.
template <class T>
struct Transition {
  enum class Kind { kStep, kOutput, kTick };

  Kind kind = Kind::kTick;
  std::string name;  // action for Step, variable for Output
  T target{};

  static Transition step(std::string action, T target) {
    return {Kind::kStep, std::move(action), std::move(target)};
  }
  static Transition output(std::string var) { return {Kind::kOutput, std::move(var), T{}}; }
  static Transition tick() { return {Kind::kTick, {}, T{}}; }

  [[nodiscard]] bool is_step() const { return kind == Kind::kStep; }
  [[nodiscard]] bool is_output() const { return kind == Kind::kOutput; }
  [[nodiscard]] bool is_tick() const { return kind == Kind::kTick; }

  /// Same leaf with the step target replaced by f(target).
  template <class F>
  auto retarget(F&& f) const -> Transition<std::decay_t<decltype(f(target))>> {
    using U = std::decay_t<decltype(f(target))>;
    if (kind == Kind::kStep) return Transition<U>::step(name, f(target));
    return {static_cast<typename Transition<U>::Kind>(kind), name, U{}};
  }

  friend bool operator==(const Transition& a, const Transition& b) {
    return a.kind == b.kind && a.name == b.name && (a.kind != Kind::kStep || a.target == b.target);
  }
  friend bool operator<(const Transition& a, const Transition& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.name != b.name) return a.name < b.name;
    if (a.kind != Kind::kStep) return false;
    return a.target < b.target;
  }
};

}  // namespace algproc
