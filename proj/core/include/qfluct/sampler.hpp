#pragma once

#include <cstdint>
#include <string_view>

#include "qfluct/rng.hpp"

namespace qfluct {

/// How successive draws are linked.
///
/// PairMode:        independent pairs; the first draw of a pair is N(0, s2),
///                  the second N(f x1, s2). Lag-1 covariance f s2.
/// ChainRaw:        x[n+1] ~ N(f x[n], s2). Stationary variance s2/(1-f^2),
///                  lag-1 covariance f s2/(1-f^2). Needs |f| < 1.
/// ChainNormalized: x[n+1] ~ N(f x[n], s2 (1-f^2)). Stationary variance s2,
///                  lag-1 covariance f s2.
enum class SamplerMode { PairMode, ChainRaw, ChainNormalized };

std::string_view to_string(SamplerMode mode);
/// Accepts "pair", "chain-raw", "chain-normalized". Throws PreconditionError.
SamplerMode parse_sampler_mode(std::string_view name);

/// Closed-form lag-k covariance of the mode at stationarity.
double lag_covariance(SamplerMode mode, double f, double sigma2, int lag);
/// Closed-form stationary marginal variance.
double stationary_variance(SamplerMode mode, double f, double sigma2);

struct ChainConfig {
  double f = 0.0;
  double sigma2 = 1.0;
  SamplerMode mode = SamplerMode::ChainRaw;

  /// Throws PreconditionError for |f| > 1 or sigma2 <= 0, and
  /// NonStationaryError for ChainRaw with |f| = 1.
  void validate() const;
};

/// Correlated Gaussian sampler: each draw is centred at f times the previous
/// outcome. Single-owner mutable state.
class ShiftChain {
 public:
  ShiftChain(const ChainConfig& config, RngStream rng);

  /// Next outcome; advances the chain.
  double draw_next();

  /// Draws so far.
  std::uint64_t draws() const noexcept { return draws_; }
  double last_outcome() const noexcept { return last_; }
  /// Standard deviation of the innovation added to f * last.
  double innovation_sd() const noexcept { return innovation_sd_; }
  const ChainConfig& config() const noexcept { return config_; }

  /// True when the next draw starts a fresh pair (PairMode only) or is the
  /// very first draw of the chain.
  bool at_pair_start() const noexcept;

 private:
  ChainConfig config_;
  RngStream rng_;
  double innovation_sd_;
  double initial_sd_;
  double last_ = 0.0;
  std::uint64_t draws_ = 0;
};

struct Lag1Estimate {
  double estimate;
  /// Empirical standard error of the mean product, inflated by sqrt(3) to
  /// cover serial dependence between neighbouring products.
  double std_error;
  std::uint64_t products;
};

/// Average of x[i] x[i+1] over a fresh sequence of n_steps draws from stream
/// (seed, stream_id). In PairMode only within-pair products are averaged,
/// giving n_steps / 2 products. Requires n_steps >= 2.
Lag1Estimate estimate_lag1(const ChainConfig& config, std::uint64_t n_steps, std::uint64_t seed,
                           std::uint64_t stream_id = 0);

/// Lag-k analogue for the chain modes; PairMode is rejected for lag > 1.
Lag1Estimate estimate_lag(const ChainConfig& config, int lag, std::uint64_t n_steps,
                          std::uint64_t seed, std::uint64_t stream_id = 0);

}  // namespace qfluct
