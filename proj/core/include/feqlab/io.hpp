#pragma once

// CSV and JSON forms of the library's tables and reports. CSV files use a
// header row, ',' separators, '.' decimals, LF line endings and 17
// significant digits.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "feqlab/dynsys.hpp"
#include "feqlab/hypotheses.hpp"
#include "feqlab/solver.hpp"
#include "feqlab/tabulated.hpp"
#include "feqlab/verify.hpp"

namespace feqlab {

class CsvError : public Error {
 public:
  CsvError(const std::string& what, std::size_t line) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// %.17g formatting.
std::string format_real(double value);

/// Header `point,depth,word`, ascending points.
void write_orbit_csv(std::ostream& out, const OrbitTable& table);

/// Header `z,f`, grid order.
void write_solution_csv(std::ostream& out, const TabulatedFunction& f);

TabulatedFunction read_solution_csv(std::istream& in);

void to_json(nlohmann::json& j, const CheckResult& r);
void to_json(nlohmann::json& j, const HypothesisReport& r);
void to_json(nlohmann::json& j, const DensityCertificate& c);
void to_json(nlohmann::json& j, const ResidualReport& r);
void to_json(nlohmann::json& j, const BoundaryCheck& b);
void to_json(nlohmann::json& j, const ClosedFormComparison& c);
void to_json(nlohmann::json& j, const SolveReport& r);

}  // namespace feqlab
