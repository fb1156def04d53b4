#include "qfluct/walker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qfluct/error.hpp"
#include "qfluct/parallel.hpp"
#include "qfluct/rng.hpp"

namespace qfluct {
namespace {

constexpr std::size_t kMaxBlocks = 64;
constexpr std::size_t kMinBlockSize = 256;

struct BlockSums {
  std::vector<double> y2;
  std::vector<double> y4;
  double slope = 0.0, slope2 = 0.0;
  double intercept = 0.0, intercept2 = 0.0;
};

// OLS weights: slope = sum w_N v_N, intercept = sum u_N v_N over the window.
struct LinearWeights {
  std::vector<double> slope;
  std::vector<double> intercept;
};

LinearWeights ols_weights(FitWindow window) {
  const std::size_t m = window.last - window.first + 1;
  double mean_n = 0.0;
  for (std::size_t n = window.first; n <= window.last; ++n) mean_n += static_cast<double>(n);
  mean_n /= static_cast<double>(m);
  double sxx = 0.0;
  for (std::size_t n = window.first; n <= window.last; ++n) {
    const double d = static_cast<double>(n) - mean_n;
    sxx += d * d;
  }
  LinearWeights w;
  w.slope.resize(m);
  w.intercept.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double d = static_cast<double>(window.first + j) - mean_n;
    w.slope[j] = d / sxx;
    w.intercept[j] = 1.0 / static_cast<double>(m) - mean_n * d / sxx;
  }
  return w;
}

void check_window(FitWindow window, std::size_t n_steps) {
  if (window.first > window.last || window.last > n_steps)
    throw PreconditionError("fit window outside the simulated step range");
  if (window.last - window.first + 1 < 10) throw PreconditionError("fit window needs at least 10 points");
}

double sample_std_error(double sum, double sum_sq, double count) {
  if (count < 2.0) return 0.0;
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq - sum * mean) / (count - 1.0));
  return std::sqrt(var / count);
}

}  // namespace

WalkEnsembleResult run_walk_ensemble(const WalkConfig& config) {
  if (config.n_steps < 1) throw PreconditionError("n_steps must be >= 1");
  if (config.n_walkers < 1) throw PreconditionError("n_walkers must be >= 1");
  const ChainConfig chain_cfg{config.f, config.sigma2, config.mode};
  chain_cfg.validate();

  const std::size_t n = config.n_steps;
  const FitWindow window = config.fit_window.value_or(FitWindow{1, std::min<std::size_t>(100, n)});
  const bool fit_possible = window.first <= window.last && window.last <= n &&
                            window.last - window.first + 1 >= 10;
  if (config.fit_window) check_window(window, n);
  const LinearWeights weights = fit_possible ? ols_weights(window) : LinearWeights{};

  const std::size_t block_size =
      std::max(kMinBlockSize, (config.n_walkers + kMaxBlocks - 1) / kMaxBlocks);
  const std::size_t n_blocks = (config.n_walkers + block_size - 1) / block_size;
  std::vector<BlockSums> blocks(n_blocks);

  parallel_for(n_blocks, config.threads, [&](std::size_t b) {
    BlockSums& sums = blocks[b];
    sums.y2.assign(n + 1, 0.0);
    sums.y4.assign(n + 1, 0.0);
    std::vector<double> y2(n + 1, 0.0);
    const std::size_t begin = b * block_size;
    const std::size_t end = std::min(config.n_walkers, begin + block_size);
    for (std::size_t w = begin; w < end; ++w) {
      ShiftChain chain(chain_cfg, RngStream::derive(config.seed, w));
      double y = 0.0;
      for (std::size_t step = 1; step <= n; ++step) {
        y += chain.draw_next();
        const double sq = y * y;
        y2[step] = sq;
        sums.y2[step] += sq;
        sums.y4[step] += sq * sq;
      }
      if (fit_possible) {
        double slope = 0.0, intercept = 0.0;
        for (std::size_t j = 0; j < weights.slope.size(); ++j) {
          slope += weights.slope[j] * y2[window.first + j];
          intercept += weights.intercept[j] * y2[window.first + j];
        }
        sums.slope += slope;
        sums.slope2 += slope * slope;
        sums.intercept += intercept;
        sums.intercept2 += intercept * intercept;
      }
    }
  });

  BlockSums total;
  total.y2.assign(n + 1, 0.0);
  total.y4.assign(n + 1, 0.0);
  for (const BlockSums& b : blocks) {
    for (std::size_t i = 0; i <= n; ++i) {
      total.y2[i] += b.y2[i];
      total.y4[i] += b.y4[i];
    }
    total.slope += b.slope;
    total.slope2 += b.slope2;
    total.intercept += b.intercept;
    total.intercept2 += b.intercept2;
  }

  const double count = static_cast<double>(config.n_walkers);
  WalkEnsembleResult result;
  result.f = config.f;
  result.sigma2 = config.sigma2;
  result.mode = config.mode;
  result.n_walkers = config.n_walkers;
  result.seed = config.seed;
  result.msd.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    result.msd.push_back({i, total.y2[i] / count, sample_std_error(total.y2[i], total.y4[i], count)});
  result.fit_window = window;
  if (fit_possible) {
    result.fit = fit_sqrt_growth(result, window);
    result.c1_std_error = sample_std_error(total.slope, total.slope2, count);
    result.c0_std_error = sample_std_error(total.intercept, total.intercept2, count);
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    result.fit = {nan, nan};
    result.c1_std_error = nan;
    result.c0_std_error = nan;
  }
  return result;
}

GrowthFit fit_sqrt_growth(const WalkEnsembleResult& result, FitWindow window) {
  if (result.msd.empty()) throw PreconditionError("empty walk result");
  check_window(window, result.msd.size() - 1);
  const LinearWeights w = ols_weights(window);
  GrowthFit fit{0.0, 0.0};
  for (std::size_t j = 0; j < w.slope.size(); ++j) {
    const double v = result.msd[window.first + j].msd;
    fit.c1 += w.slope[j] * v;
    fit.c0 += w.intercept[j] * v;
  }
  return fit;
}

double loglog_growth_exponent(const WalkEnsembleResult& result, FitWindow window) {
  if (result.msd.empty()) throw PreconditionError("empty walk result");
  check_window(window, result.msd.size() - 1);
  if (window.first < 1) throw PreconditionError("log-log fit needs N >= 1");
  const std::size_t m = window.last - window.first + 1;
  std::vector<double> x(m), y(m);
  for (std::size_t j = 0; j < m; ++j) {
    const MsdPoint& p = result.msd[window.first + j];
    if (!(p.msd > 0.0)) throw PreconditionError("log-log fit needs positive msd");
    x[j] = std::log(static_cast<double>(p.n));
    y[j] = std::log(p.msd);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    sxy += (x[j] - mx) * (y[j] - my);
    sxx += (x[j] - mx) * (x[j] - mx);
  }
  return sxy / sxx;
}

double partial_sum_variance(SamplerMode mode, double f, double sigma2, std::size_t n) {
  ChainConfig{f, sigma2, mode}.validate();
  const double N = static_cast<double>(n);
  if (mode == SamplerMode::PairMode) {
    const double pairs = static_cast<double>(n / 2);
    return sigma2 * (pairs * (1.0 + (1.0 + f) * (1.0 + f)) + static_cast<double>(n % 2));
  }
  if (f == 1.0) return sigma2 * N * N;  // normalized chain, fully correlated
  const double var = stationary_variance(mode, f, sigma2);
  const double g = 1.0 - f;
  return var * (N * (1.0 + f) / g - 2.0 * f * (1.0 - std::pow(f, N)) / (g * g));
}

}  // namespace qfluct
