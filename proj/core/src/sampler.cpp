#include "qfluct/sampler.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qfluct/error.hpp"

namespace qfluct {

std::string_view to_string(SamplerMode mode) {
  switch (mode) {
    case SamplerMode::PairMode: return "pair";
    case SamplerMode::ChainRaw: return "chain-raw";
    case SamplerMode::ChainNormalized: return "chain-normalized";
  }
  return "unknown";
}

SamplerMode parse_sampler_mode(std::string_view name) {
  if (name == "pair") return SamplerMode::PairMode;
  if (name == "chain-raw" || name == "raw") return SamplerMode::ChainRaw;
  if (name == "chain-normalized" || name == "normalized") return SamplerMode::ChainNormalized;
  throw PreconditionError("unknown sampler mode '" + std::string(name) +
                          "' (expected pair, chain-raw or chain-normalized)");
}

double stationary_variance(SamplerMode mode, double f, double sigma2) {
  switch (mode) {
    case SamplerMode::ChainRaw:
      if (std::fabs(f) >= 1.0) throw NonStationaryError("raw chain with |f| = 1 is not stationary");
      return sigma2 / (1.0 - f * f);
    case SamplerMode::ChainNormalized: return sigma2;
    case SamplerMode::PairMode: break;
  }
  throw PreconditionError("pair mode has no single stationary marginal");
}

double lag_covariance(SamplerMode mode, double f, double sigma2, int lag) {
  if (lag < 0) throw PreconditionError("lag must be nonnegative");
  if (mode == SamplerMode::PairMode) {
    if (lag != 1) throw PreconditionError("pair mode only defines the lag-1 covariance");
    return f * sigma2;
  }
  return stationary_variance(mode, f, sigma2) * std::pow(f, lag);
}

void ChainConfig::validate() const {
  if (!std::isfinite(f) || std::fabs(f) > 1.0) throw PreconditionError("shift factor must satisfy |f| <= 1");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw PreconditionError("sigma2 must be positive");
  if (mode == SamplerMode::ChainRaw && std::fabs(f) == 1.0)
    throw NonStationaryError("raw chain with |f| = 1 is not stationary");
}

ShiftChain::ShiftChain(const ChainConfig& config, RngStream rng) : config_(config), rng_(rng) {
  config_.validate();
  const double sd = std::sqrt(config_.sigma2);
  switch (config_.mode) {
    case SamplerMode::PairMode:
      innovation_sd_ = sd;
      initial_sd_ = sd;
      break;
    case SamplerMode::ChainRaw:
      innovation_sd_ = sd;
      initial_sd_ = sd / std::sqrt(1.0 - config_.f * config_.f);
      break;
    case SamplerMode::ChainNormalized:
      innovation_sd_ = sd * std::sqrt(1.0 - config_.f * config_.f);
      initial_sd_ = sd;
      break;
  }
}

bool ShiftChain::at_pair_start() const noexcept {
  if (draws_ == 0) return true;
  return config_.mode == SamplerMode::PairMode && draws_ % 2 == 0;
}

double ShiftChain::draw_next() {
  const double z = rng_.gaussian();
  if (at_pair_start()) {
    last_ = initial_sd_ * z;
  } else {
    last_ = config_.f * last_ + innovation_sd_ * z;
  }
  ++draws_;
  return last_;
}

Lag1Estimate estimate_lag(const ChainConfig& config, int lag, std::uint64_t n_steps, std::uint64_t seed,
                          std::uint64_t stream_id) {
  if (lag < 1) throw PreconditionError("lag must be >= 1");
  if (config.mode == SamplerMode::PairMode && lag != 1)
    throw PreconditionError("pair mode only supports lag 1");
  if (n_steps < static_cast<std::uint64_t>(lag) + 1)
    throw PreconditionError("n_steps must exceed the lag (n_steps >= 2 for lag 1)");

  ShiftChain chain(config, RngStream::derive(seed, stream_id));

  // Welford on the products keeps the variance accurate for long runs.
  double mean = 0.0, m2 = 0.0;
  std::uint64_t count = 0;
  auto push = [&](double p) {
    ++count;
    const double delta = p - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (p - mean);
  };

  if (config.mode == SamplerMode::PairMode) {
    for (std::uint64_t i = 0; i + 1 < n_steps; i += 2) {
      const double x1 = chain.draw_next();
      const double x2 = chain.draw_next();
      push(x1 * x2);
    }
  } else {
    std::vector<double> window(static_cast<std::size_t>(lag) + 1);
    for (int i = 0; i <= lag; ++i) window[static_cast<std::size_t>(i)] = chain.draw_next();
    std::size_t head = 0;  // index of the oldest element
    push(window[head] * window[static_cast<std::size_t>(lag)]);
    for (std::uint64_t i = static_cast<std::uint64_t>(lag) + 1; i < n_steps; ++i) {
      const double x = chain.draw_next();
      window[head] = x;
      head = (head + 1) % window.size();
      push(window[head] * x);
    }
  }

  const double var = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  const double se = std::sqrt(3.0 * var / static_cast<double>(count));
  return {mean, se, count};
}

Lag1Estimate estimate_lag1(const ChainConfig& config, std::uint64_t n_steps, std::uint64_t seed,
                           std::uint64_t stream_id) {
  return estimate_lag(config, 1, n_steps, seed, stream_id);
}

}  // namespace qfluct
