#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "ast_generator.hpp"
#include "feqlab/expr.hpp"

using namespace feqlab;
using feqlab::testing::AstGenerator;

TEST_SUITE("properties") {

TEST_CASE("parse(print(t)) == t for generated trees") {
  AstGenerator gen(20240611);
  for (int i = 0; i < 10000; ++i) {
    const Expr t = gen(1 + i % 6);
    const std::string text = print(t);
    CAPTURE(text);
    const Expr back = parse(text, h_variables());
    REQUIRE(back == t);
    CHECK(print(back) == text);
  }
}

TEST_CASE("eval is pure") {
  AstGenerator gen(99);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  int evaluated = 0;
  for (int i = 0; i < 3000; ++i) {
    const Expr t = gen(4);
    const double slots[] = {val(rng), val(rng), val(rng), val(rng)};
    double first = 0.0;
    try {
      first = eval(t, slots);
    } catch (const ExprError&) {
      CHECK_THROWS_AS(eval(t, slots), ExprError);
      continue;
    }
    const double second = eval(t, slots);
    CHECK(std::bit_cast<std::uint64_t>(first) == std::bit_cast<std::uint64_t>(second));
    CHECK(std::isfinite(first));
    ++evaluated;
  }
  CHECK(evaluated > 500);
}

}  // TEST_SUITE
