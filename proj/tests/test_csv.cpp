#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qfluct/csv.hpp"
#include "qfluct/error.hpp"

using namespace qfluct;

TEST_CASE("17 significant digits round-trip any double") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 20000; ++i) {
    const double v = std::ldexp(mant(gen), expo(gen));
    CHECK(std::strtod(csv::format_double(v).c_str(), nullptr) == v);
  }
  CHECK(csv::format_double(0.0) == "0");
  CHECK(csv::format_double(1.0) == "1");
  CHECK(csv::format_double(20000.0) == "20000");
}

TEST_CASE("sweep CSV re-serializes byte-identically") {
  SweepConfig cfg;
  cfg.n_points = 25;
  cfg.steps_per_point = 500;
  const auto result = correlation_sweep(CorrelationKernel::scalar_lorentzian(),
                                        CalibrationModel::exact(SamplerMode::PairMode), cfg);
  std::ostringstream first;
  csv::write(first, csv::to_table(result));
  CHECK(first.str().rfind("t0,c_analytic,f_shift,c_simulated,stderr,n_steps\n", 0) == 0);
  std::istringstream in(first.str());
  std::ostringstream second;
  csv::write(second, csv::read(in));
  CHECK(first.str() == second.str());
}

TEST_CASE("NaN cells survive a round trip") {
  csv::NumericTable t{{"a", "b"}, {{1.5, std::numeric_limits<double>::quiet_NaN()}}};
  std::ostringstream first;
  csv::write(first, t);
  std::istringstream in(first.str());
  std::ostringstream second;
  csv::write(second, csv::read(in));
  CHECK(first.str() == second.str());
}

TEST_CASE("calibration table CSV") {
  const std::vector<double> grid = {-0.5, 0.0, 0.5, 0.7};
  const auto table = calibrate_monte_carlo(SamplerMode::ChainRaw, 1.0, grid, 10000, 2);
  std::ostringstream out;
  csv::write(out, csv::to_table(table));
  CHECK(out.str().rfind("f,c_estimate,stderr,n_steps\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = csv::calibration_from_table(csv::read(in), SamplerMode::ChainRaw, 1.0);
  CHECK(back.rows().size() == 4);
  CHECK(back.rows()[2].c_estimate == table.rows()[2].c_estimate);
  CHECK(back.rows()[3].n_steps == 10000);
}

TEST_CASE("malformed CSV") {
  std::istringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(csv::read(ragged), PreconditionError);
  std::istringstream junk("a\nxyz\n");
  CHECK_THROWS_AS(csv::read(junk), PreconditionError);
  std::istringstream empty("");
  CHECK_THROWS_AS(csv::read(empty), PreconditionError);
  csv::NumericTable wrong{{"x", "y"}, {}};
  CHECK_THROWS_AS(csv::calibration_from_table(wrong, SamplerMode::ChainRaw, 1.0), PreconditionError);
}
