#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "algproc/exp.hpp"
#include "algproc/theory.hpp"

namespace algproc::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kInternal = 2;
inline constexpr int kInequivalent = 10;
inline constexpr int kRejected = 11;

struct Globals {
  std::string theory = "sl";
  std::string atoms;    // comma separated
  std::string actions;  // comma separated
  std::string format;   // text | json | dot; empty picks the command default
  bool gkat = false;
  std::size_t cap = 10000;
  std::optional<std::uint64_t> seed;
};

[[nodiscard]] TheorySpec theory_of(const Globals& g);
[[nodiscard]] ParseOptions parse_options_of(const Globals& g);

int cmd_step(const Globals& g, const std::string& term, std::ostream& out);
int cmd_lts(const Globals& g, const std::string& term, std::ostream& out);
int cmd_equiv(const Globals& g, const std::string& lhs, const std::string& rhs, std::ostream& out);
int cmd_solve(const Globals& g, const std::string& path, const std::string& state, bool check, std::ostream& out);
int cmd_prove(const Globals& g, const std::string& path, std::ostream& out);
int cmd_skew(const Globals& g, std::ostream& out);

int cmd_star_step(const Globals& g, const std::string& sexp, std::ostream& out);
int cmd_star_lts(const Globals& g, const std::string& sexp, std::ostream& out);
int cmd_star_equiv(const Globals& g, const std::string& lhs, const std::string& rhs, std::ostream& out);

struct EStarArgs {
  std::string axiom;
  std::string e = "0";
  std::string f = "0";
  std::string g = "0";
  std::string sigma = "+";
  std::string tau = "+";
  bool ignore_side = false;
};
int cmd_star_estar(const Globals& g, const EStarArgs& args, std::ostream& out);
int cmd_star_deriv(const Globals& g, const std::string& sexp, std::ostream& out);

}  // namespace algproc::cli
