#include <cmath>
#include <vector>

#include "doctest.h"
#include "qfluct/error.hpp"
#include "qfluct/sampler.hpp"

using namespace qfluct;

namespace {

std::vector<double> draw(const ChainConfig& cfg, std::size_t n, std::uint64_t seed) {
  ShiftChain chain(cfg, RngStream(seed, 0));
  std::vector<double> xs(n);
  for (auto& x : xs) x = chain.draw_next();
  return xs;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_sampler_mode("pair") == SamplerMode::PairMode);
  CHECK(parse_sampler_mode("chain-raw") == SamplerMode::ChainRaw);
  CHECK(parse_sampler_mode("chain-normalized") == SamplerMode::ChainNormalized);
  CHECK_THROWS_AS(parse_sampler_mode("ar2"), PreconditionError);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(ShiftChain({1.0, 1.0, SamplerMode::ChainRaw}, RngStream(1, 0)), NonStationaryError);
  CHECK_THROWS_AS(ShiftChain({-1.0, 1.0, SamplerMode::ChainRaw}, RngStream(1, 0)), NonStationaryError);
  CHECK_THROWS_AS(ShiftChain({1.5, 1.0, SamplerMode::PairMode}, RngStream(1, 0)), PreconditionError);
  CHECK_THROWS_AS(ShiftChain({0.5, 0.0, SamplerMode::PairMode}, RngStream(1, 0)), PreconditionError);
  CHECK_NOTHROW(ShiftChain({1.0, 1.0, SamplerMode::ChainNormalized}, RngStream(1, 0)));
  CHECK_THROWS_AS(estimate_lag1({0.0, 1.0, SamplerMode::ChainRaw}, 1, 1), PreconditionError);
}

TEST_CASE("f = 0 gives iid draws in every mode") {
  for (SamplerMode mode : {SamplerMode::PairMode, SamplerMode::ChainRaw, SamplerMode::ChainNormalized}) {
    const auto xs = draw({0.0, 1.0, mode}, 100000, 17);
    CHECK(std::fabs(mean(xs)) < 4.0 / std::sqrt(1e5));
  }
  const Lag1Estimate e = estimate_lag1({0.0, 1.0, SamplerMode::ChainRaw}, 20000, 5);
  CHECK(std::fabs(e.estimate) < 3.0 * e.std_error);
  CHECK(e.std_error == doctest::Approx(std::sqrt(3.0 / 20000)).epsilon(0.05));
}

TEST_CASE("raw chain lag-1 covariance at f = 0.5") {
  const Lag1Estimate e = estimate_lag1({0.5, 1.0, SamplerMode::ChainRaw}, 1000000, 11);
  CHECK(std::fabs(e.estimate - 2.0 / 3.0) < 0.005);
  CHECK(e.products == 999999);
}

TEST_CASE("normalized chain keeps unit variance") {
  const auto xs = draw({0.5, 1.0, SamplerMode::ChainNormalized}, 1000000, 12);
  double s2 = 0, lag = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s2 += xs[i] * xs[i];
    if (i + 1 < xs.size()) lag += xs[i] * xs[i + 1];
  }
  CHECK(std::fabs(s2 / xs.size() - 1.0) < 0.006);
  CHECK(std::fabs(lag / (xs.size() - 1) - 0.5) < 0.005);
}

TEST_CASE("golden-ratio shift reproduces unit covariance in the raw chain") {
  const double f = (std::sqrt(5.0) - 1.0) / 2.0;
  const Lag1Estimate e = estimate_lag1({f, 1.0, SamplerMode::ChainRaw}, 20000, 21);
  CHECK(std::fabs(e.estimate - 1.0) < 3.0 * e.std_error);
}

TEST_CASE("pair mode averages only within-pair products") {
  const Lag1Estimate e = estimate_lag1({0.5, 2.0, SamplerMode::PairMode}, 1000000, 3);
  CHECK(e.products == 500000);
  CHECK(std::fabs(e.estimate - 1.0) < 5.0 * e.std_error);
}

TEST_CASE("stationary variance law in the raw chain") {
  for (double f : {-0.6, -0.3, 0.3, 0.6}) {
    const auto xs = draw({f, 1.0, SamplerMode::ChainRaw}, 1000000, 40);
    double s2 = 0;
    for (double x : xs) s2 += x * x;
    CHECK(std::fabs(s2 / xs.size() / (1.0 / (1.0 - f * f)) - 1.0) < 0.01);
  }
}

TEST_CASE("covariance laws") {
  for (double f : {-0.6, -0.3, 0.3, 0.6}) {
    for (SamplerMode mode : {SamplerMode::PairMode, SamplerMode::ChainRaw, SamplerMode::ChainNormalized}) {
      const Lag1Estimate e = estimate_lag1({f, 1.5, mode}, 1000000, 77);
      const double expected = lag_covariance(mode, f, 1.5, 1);
      CHECK(std::fabs(e.estimate - expected) < 5.0 * e.std_error);
    }
    const Lag1Estimate l2 = estimate_lag({f, 1.0, SamplerMode::ChainRaw}, 2, 1000000, 78);
    CHECK(std::fabs(l2.estimate - f * f / (1.0 - f * f)) < 5.0 * l2.std_error);
  }
}

TEST_CASE("closed-form covariances") {
  CHECK(lag_covariance(SamplerMode::PairMode, 0.3, 2.0, 1) == doctest::Approx(0.6));
  CHECK(lag_covariance(SamplerMode::ChainRaw, 0.5, 1.0, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(lag_covariance(SamplerMode::ChainRaw, 0.5, 1.0, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(lag_covariance(SamplerMode::ChainNormalized, 0.5, 1.0, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(lag_covariance(SamplerMode::PairMode, 0.3, 1.0, 2), PreconditionError);
}

TEST_CASE("standardized innovations are Gaussian") {
  const double f = 0.6;
  for (SamplerMode mode : {SamplerMode::ChainRaw, SamplerMode::ChainNormalized}) {
    ShiftChain chain({f, 1.0, mode}, RngStream(8, 0));
    double prev = chain.draw_next();
    const double s = chain.innovation_sd();
    double m2 = 0, m4 = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double x = chain.draw_next();
      const double z = (x - f * prev) / s;
      m2 += z * z;
      m4 += z * z * z * z;
      prev = x;
    }
    CHECK(std::fabs(m4 / n - 3.0) < 0.1);
    CHECK(std::fabs(m2 / n - 1.0) < 0.01);
  }
}

TEST_CASE("estimates are reproducible per (seed, stream)") {
  const ChainConfig cfg{0.4, 1.0, SamplerMode::ChainRaw};
  CHECK(estimate_lag1(cfg, 5000, 9, 3).estimate == estimate_lag1(cfg, 5000, 9, 3).estimate);
  CHECK(estimate_lag1(cfg, 5000, 9, 3).estimate != estimate_lag1(cfg, 5000, 9, 4).estimate);
}
