#include <doctest.h>

#include "algproc/io.hpp"
#include "random.hpp"

using namespace algproc;
using namespace algproc::testing;

TEST_CASE("coalgebra json round trip") {
  Rng rng(91);
  for (const auto& th : all_theories()) {
    CAPTURE(th.name());
    for (int i = 0; i < 100; ++i) {
      const Coalgebra c = random_coalgebra(th, rng);
      const std::string text = coalgebra_to_json(c);
      CAPTURE(text);
      const Coalgebra d = coalgebra_from_json(text);
      CHECK(d.theory.id() == th.id());
      CHECK(d.theory.atoms() == th.atoms());
      CHECK(d.names == c.names);
      CHECK(d.structure == c.structure);
      CHECK(coalgebra_to_json(d) == text);
    }
  }
}

TEST_CASE("coalgebra json input") {
  const Coalgebra c = coalgebra_from_json(R"({
    "theory": "ca",
    "states": ["s", "t"],
    "structure": {
      "s": {"op": "+", "prob": "1/2", "args": [{"act": "a", "to": "t"}, {"out": "u"}]},
      "t": {"const": "0"}
    }
  })");
  REQUIRE(c.size() == 2);
  CHECK(c.structure[1].is_zero());
  CHECK(format_branching(c.structure[0], c) == "(a, t) +[1/2] u");

  CHECK_THROWS_AS((void)coalgebra_from_json("{"), FormatError);
  CHECK_THROWS_AS((void)coalgebra_from_json(R"({"theory":"sl","states":["s"]})"), FormatError);
  CHECK_THROWS_AS((void)coalgebra_from_json(R"({"theory":"sl","states":["s","s"],"structure":{}})"), FormatError);
  CHECK_THROWS_AS(
      (void)coalgebra_from_json(R"({"theory":"sl","states":["s"],"structure":{"s":{"act":"a","to":"t"}}})"),
      FormatError);
  CHECK_THROWS_AS((void)coalgebra_from_json(
                      R"({"theory":"sl","states":["s"],"structure":{"s":{"op":"+","prob":"1/2","args":[{"out":"u"},{"out":"v"}]}}})"),
                  TheoryError);
  CHECK_THROWS_AS((void)coalgebra_from_json(R"({"theory":"xx","states":[],"structure":{}})"), TheoryError);
}

TEST_CASE("dot and text renderings") {
  const auto th = TheorySpec::make(TheoryId::kGS, {"b", "c"});
  const Coalgebra c = reachable(parse_exp("mu w. (a1.(v +[b] a2.w) +[b] u)", th), th);
  const std::string dot = coalgebra_to_dot(c);
  CHECK(dot.rfind("digraph", 0) == 0);
  for (const auto& n : c.names) CHECK(dot.find("\"" + n + "\"") != std::string::npos);
  CHECK(dot.find("b|a1") != std::string::npos);
  CHECK(dot.back() == '\n');

  const std::string plain = coalgebra_to_text(c);
  CHECK(plain.rfind(c.names[0] + "\n  ", 0) == 0);
  const std::string text = coalgebra_to_text(c, [&](std::size_t i) { return to_string(c.labels[i], th); });
  for (std::size_t i = 0; i < c.size(); ++i)
    CHECK(text.find(c.names[i] + ": " + to_string(c.labels[i], th)) != std::string::npos);
}
