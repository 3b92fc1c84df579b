#include <doctest.h>

#include <cmath>
#include <random>

#include "feqlab/hypotheses.hpp"
#include "oracles.hpp"

using namespace feqlab;

namespace {

Expr F(std::string_view src) { return parse(src, f_variables()); }

DynSystem system_of(std::string_view f, double a, double b) {
  return make_system(F(f), Interval(a, b));
}

}  // namespace

TEST_SUITE("hypotheses") {

TEST_CASE("check_maps_into") {
  const Interval unit(0.0, 1.0);
  auto r = check_maps_into(F("0.5*x+0.5*y"), unit, 100);
  CHECK(r.ok);
  CHECK(r.worst == 0.0);

  r = check_maps_into(F("x+y"), unit, 100);
  CHECK_FALSE(r.ok);
  CHECK(r.worst == 1.0);

  const Interval i(1.0, 2.0);
  r = check_maps_into(F("logmean(x,y)"), i, 200);
  CHECK(r.ok);
  CHECK(r.worst == 0.0);
  // Dense independent scan.
  for (int p = 0; p <= 400; ++p) {
    for (int q = 0; q <= 400; q += 7) {
      const double m = oracle::textbook_logmean(1.0 + p / 400.0, 1.0 + q / 400.0);
      CHECK((m >= 1.0 && m <= 2.0));
    }
  }
}

TEST_CASE("check_internality") {
  const Interval unit(0.0, 1.0);
  auto r = check_internality(F("0.5*x+0.5*y"), unit, 100);
  CHECK(r.ok);
  CHECK(r.worst == 0.0);

  r = check_internality(F("min(x,y)"), unit, 100);
  CHECK_FALSE(r.ok);
  CHECK(r.worst >= 0.0);

  r = check_internality(F("logmean(x,y)"), Interval(1.0, 2.0), 100);
  CHECK(r.ok);
  CHECK(r.worst == 0.0);

  r = check_internality(F("x"), unit, 100);
  CHECK_FALSE(r.ok);
}

TEST_CASE("means on positive intervals are internal") {
  const char* means[] = {
      "0.3*x + 0.7*y",
      "sqrt(x*y)",
      "(0.5*x^2 + 0.5*y^2)^0.5",
      "logmean(x, y)",
      "x^0.25 * y^0.75",
      "2/(1/x + 1/y)",
  };
  for (const char* m : means) {
    for (auto [a, b] : {std::pair{0.5, 3.0}, std::pair{1.0, 2.0}, std::pair{10.0, 11.0}}) {
      CAPTURE(m);
      CHECK(check_internality(F(m), Interval(a, b), 100).ok);
    }
  }
}

TEST_CASE("check_slice_contraction") {
  auto s = check_slice_contraction(system_of("0.5*x+0.5*y", 0.0, 1.0), 1e-3, 1000);
  CHECK(std::abs(s.c1 - 0.5) <= 1e-12);
  CHECK(std::abs(s.c2 - 0.5) <= 1e-12);
  CHECK(s.ok);
  CHECK(s.status == ContractionStatus::contracting);

  s = check_slice_contraction(system_of("min(x,y)", 0.0, 1.0), 1e-3, 1000);
  CHECK(s.c2 == doctest::Approx(1.0));
  CHECK_FALSE(s.ok);
  CHECK(s.status == ContractionStatus::not_contracting);

  s = check_slice_contraction(system_of("(1/3)*x+(2/3)*y", 0.0, 1.0), 1e-3, 1000);
  CHECK(std::abs(s.c1 - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(s.c2 - 1.0 / 3.0) <= 1e-12);
  CHECK(s.ok);

  // Slope within the margin of 1.
  s = check_slice_contraction(system_of("0.0000001*x+0.9999999*y", 0.0, 1.0), 1e-3, 1000);
  CHECK_FALSE(s.ok);
  CHECK(s.status == ContractionStatus::marginal);
  CHECK(std::string(to_string(s.status)) == "marginal");
}

TEST_CASE("find_witnesses") {
  auto w = find_witnesses(system_of("0.5*x+0.5*y", 0.0, 1.0), 1000, 1e-9);
  CHECK(w.x0 == 0.0);
  CHECK(w.y0 == 1.0);
  CHECK(w.r1 == 0.0);
  CHECK(w.r2 == 0.0);
  CHECK(w.ok);

  w = find_witnesses(system_of("logmean(x,y)", 1.0, 2.0), 1000, 1e-9);
  CHECK(w.x0 == 1.0);
  CHECK(w.y0 == 2.0);
  CHECK(w.r1 == 0.0);
  CHECK(w.r2 == 0.0);

  // delta1(x) = 0.5 x^2, delta2(y) = (y + 1) / 2.
  w = find_witnesses(system_of("0.5*x+0.5*y^2", 0.0, 1.0), 1000, 1e-9);
  CHECK(std::abs(w.x0) <= 1e-6);
  CHECK(std::abs(w.y0 - 1.0) <= 1e-12);
  CHECK(w.r1 <= 1e-12);
  CHECK(w.ok);

  // Interior witness: delta1(x) = (x - 0.3)^2 reaches a = 0 only at x = 0.3.
  w = find_witnesses(system_of("(y-0.3)^2 + 0*x", 0.0, 1.0), 7, 1e-9);
  CHECK(std::abs(w.x0 - 0.3) <= 1e-6);
  CHECK(w.r1 <= 1e-12);

  // Slice never reaches a.
  w = find_witnesses(system_of("0.25 + 0*x + 0.5*y", 0.0, 1.0), 100, 1e-9);
  CHECK(w.r1 == doctest::Approx(0.25));
  CHECK_FALSE(w.ok);
}

TEST_CASE("check_cover") {
  auto c = check_cover(system_of("0.5*x+0.5*y", 0.0, 1.0), 1000);
  CHECK(c.ok);
  CHECK(c.gap == 0.0);
  CHECK(c.hull1.lo == 0.0);
  CHECK(c.hull1.hi == 0.5);
  CHECK(c.hull2.lo == 0.5);
  CHECK(c.hull2.hi == 1.0);

  c = check_cover(system_of("0.25*x+0.25*y", 0.0, 1.0), 1000);
  CHECK_FALSE(c.ok);
  CHECK(c.gap == doctest::Approx(0.5));
  CHECK(c.hull1.hi == 0.25);
  CHECK(c.hull2.lo == 0.25);
  CHECK(c.hull2.hi == 0.5);

  c = check_cover(system_of("logmean(x,y)", 1.0, 2.0), 1000);
  CHECK(c.ok);
  CHECK(c.gap == 0.0);
}

TEST_CASE("run_all") {
  const auto cfg = HypothesisConfig::defaults_for(Interval(0.0, 1.0));
  auto r = run_all(make_problem("j", "0.5*x+0.5*y", "0.5*u+0.5*v", 0, 1, 0, 1), cfg);
  CHECK(r.all_ok());
  CHECK_FALSE(r.preconditions_violated);

  r = run_all(make_problem("m", "min(x,y)", "0.5*u+0.5*v", 0, 1, 0, 1), cfg);
  CHECK_FALSE(r.all_ok());
  CHECK_FALSE(r.slice_contraction.ok);

  r = run_all(make_problem("s", "x+y", "u", 0, 1, 0, 1), cfg);
  CHECK_FALSE(r.all_ok());
  CHECK(r.preconditions_violated);
  CHECK(r.maps_into.worst == 1.0);

  const auto lcfg = HypothesisConfig::defaults_for(Interval(1.0, 2.0));
  r = run_all(make_problem("l", "logmean(x,y)", "logmean(u,v)", 1, 2, 1, 2), lcfg);
  CHECK(r.all_ok());
  CHECK(r.internality.ok);
}

TEST_CASE("affine systems have exact moduli and endpoint witnesses") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> alpha_dist(0.05, 0.95);
  std::uniform_real_distribution<double> end_dist(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double alpha = alpha_dist(rng);
    const double beta = 1.0 - alpha;
    double a = end_dist(rng);
    double b = end_dist(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 0.1) b = a + 0.1;
    const Expr f = Expr::binary(
        BinaryOp::add,
        Expr::binary(BinaryOp::mul, Expr::constant(alpha), Expr::variable("x", 0)),
        Expr::binary(BinaryOp::mul, Expr::constant(beta), Expr::variable("y", 1)));
    const auto sys = make_system(f, Interval(a, b));
    const auto s = check_slice_contraction(sys, 1e-2 * (b - a), 400);
    CHECK(std::abs(s.c1 - beta) <= 1e-12);
    CHECK(std::abs(s.c2 - alpha) <= 1e-12);
    const auto w = find_witnesses(sys, 400, 1e-9 * (b - a));
    CHECK(w.x0 == a);
    CHECK(w.y0 == b);
    CHECK(w.r1 <= 1e-15);
    CHECK(w.r2 <= 1e-15);
  }
}

TEST_CASE("run_all is deterministic") {
  const auto p = make_problem("l", "logmean(x,y)", "logmean(u,v)", 1, 2, 1, 2);
  const auto cfg = HypothesisConfig::defaults_for(p.interval);
  const auto r1 = run_all(p, cfg);
  const auto r2 = run_all(p, cfg);
  CHECK(r1.slice_contraction.c1 == r2.slice_contraction.c1);
  CHECK(r1.slice_contraction.c2 == r2.slice_contraction.c2);
  CHECK(r1.witnesses.x0 == r2.witnesses.x0);
  CHECK(r1.cover.gap == r2.cover.gap);
  CHECK(r1.maps_into.worst == r2.maps_into.worst);
}

}  // TEST_SUITE
