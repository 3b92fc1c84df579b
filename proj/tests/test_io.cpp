#include <doctest.h>

#include <sstream>

#include "feqlab/io.hpp"

using namespace feqlab;

TEST_SUITE("io") {

TEST_CASE("format_real uses 17 significant digits") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(-0.25) == "-0.25");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("solution CSV round trip") {
  const auto f = TabulatedFunction::uniform(Interval(0.0, 1.0), {0.0, 1.0 / 3.0, 0.7, 1.0});
  std::ostringstream out;
  write_solution_csv(out, f);
  const std::string text = out.str();
  CHECK(text.rfind("z,f\n0,0\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  std::istringstream in(text);
  const auto g = read_solution_csv(in);
  CHECK(g.grid() == f.grid());
  CHECK(g.values() == f.values());
}

TEST_CASE("malformed solution CSV") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_solution_csv(in);
    } catch (const CsvError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("") == 1);
  CHECK(line_of("x,y\n0,0\n1,1\n") == 1);
  CHECK(line_of("z,f\n0,0\n1\n") == 3);
  CHECK(line_of("z,f\n0,0\n0.5,abc\n") == 3);
  CHECK(line_of("z,f\n0,0\n0,1\n") == 3);
  CHECK(line_of("z,f\n0,0\n1,inf\n") == 3);
  CHECK(line_of("z,f\n0,0\n") != 0);
  CHECK(line_of("z,f\r\n0,0\r\n1,1\r\n") == 0);
}

TEST_CASE("orbit CSV") {
  OrbitTable t;
  t.seed = 0.0;
  t.nodes = {{0.0, ""}, {0.5, "2"}, {0.75, "22"}};
  std::ostringstream out;
  write_orbit_csv(out, t);
  CHECK(out.str() == "point,depth,word\n0,0,\n0.5,1,2\n0.75,2,22\n");
}

TEST_CASE("JSON field names") {
  ResidualReport r;
  r.domain = ResidualDomain::square;
  r.grid_n = 10;
  r.sup = 0.5;
  r.argmax_x = 0.25;
  r.argmax_y = 1.0;
  nlohmann::json j = r;
  CHECK(j["domain"] == "square");
  CHECK(j["grid_n"] == 10);
  CHECK(j["argmax"] == nlohmann::json::array({0.25, 1.0}));
  CHECK(j.contains("sup_at_samples"));
  CHECK(j["sup_at_samples"].is_null());

  HypothesisReport h;
  nlohmann::json hj = h;
  for (const char* key : {"maps_into", "internality", "slice_contraction", "witnesses", "cover",
                          "grid_n", "epsilon"}) {
    CHECK(hj.contains(key));
  }
  for (const char* key : {"c1", "c2", "ok"}) CHECK(hj["slice_contraction"].contains(key));
  for (const char* key : {"x0", "r1", "y0", "r2"}) CHECK(hj["witnesses"].contains(key));
  for (const char* key : {"ok", "gap"}) CHECK(hj["cover"].contains(key));
}

}  // TEST_SUITE
