#include "uniband/bootstrap.hpp"

#include "uniband/errors.hpp"
#include "uniband/rng.hpp"
#include "uniband/threading.hpp"

#include <algorithm>
#include <cmath>

namespace uniband {

namespace {

void ensure_config(const BootstrapConfig& config)
{
  if (config.draws < 100) {
    throw config_error("bootstrap needs at least 100 draws for quantile use");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw config_error("alpha must lie in (0, 1)");
  }
}

//! Smallest k with k/B >= 1 - alpha; the 1e-9 nudge absorbs the rounding of
//! (1-alpha)*B when the product is an exact integer.
int order_statistic_index(int draws, double alpha)
{
  const double target = (1.0 - alpha) * static_cast<double>(draws);
  int k = static_cast<int>(std::ceil(target - 1e-9));
  return std::clamp(k, 1, draws);
}

//! Studentized weighted sums for one weight vector, written into `out`.
void draw_into(const StudentizedEvaluation& eval,
               const Eigen::Ref<const Eigen::VectorXd>& weights, Eigen::VectorXd& out)
{
  const double n = static_cast<double>(eval.n());
  const double weight_sum = weights.sum();
  out.resize(eval.p());
  for (Eigen::Index j = 0; j < eval.p(); ++j) {
    const double centered = eval.psi.col(j).dot(weights) - eval.fhat[j] * weight_sum;
    out[j] = centered / (n * eval.sigma_hat[j]);
  }
}

} // namespace

Eigen::VectorXd bootstrap_draw(const StudentizedEvaluation& eval,
                               const Eigen::Ref<const Eigen::VectorXd>& weights)
{
  if (weights.size() != eval.n()) {
    throw config_error("weight vector length must match the sample size");
  }
  Eigen::VectorXd out;
  draw_into(eval, weights, out);
  return out;
}

CriticalValue critical_value(const StudentizedEvaluation& eval, const BootstrapConfig& config)
{
  ensure_config(config);

  const auto draws = static_cast<std::size_t>(config.draws);
  Eigen::VectorXd maxima(config.draws);
  Eigen::VectorXd first_draw;

  parallel_for(draws, resolve_threads(config.threads), [&](std::size_t b) {
    Rng rng = Rng::substream(config.master_seed, b, rng_tags::bootstrap);
    Eigen::VectorXd weights(eval.n());
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      weights[i] = rng.normal();
    }
    Eigen::VectorXd stats;
    draw_into(eval, weights, stats);
    maxima[static_cast<Eigen::Index>(b)] = stats.cwiseAbs().maxCoeff();
    if (b == 0) {
      first_draw = std::move(stats);
    }
  });

  std::sort(maxima.begin(), maxima.end());
  const int k = order_statistic_index(config.draws, config.alpha);

  CriticalValue out;
  out.c_hat = maxima[k - 1];
  out.draws.maxima = std::move(maxima);
  out.draws.first_draw = std::move(first_draw);
  return out;
}

NestedCriticalValues critical_value_nested(const StudentizedEvaluation& eval_fine,
                                           const std::vector<Eigen::Index>& coarse_subset,
                                           const BootstrapConfig& config)
{
  ensure_config(config);
  if (coarse_subset.empty()) {
    throw config_error("coarse subset must not be empty");
  }
  for (const Eigen::Index j : coarse_subset) {
    if (j < 0 || j >= eval_fine.p()) {
      throw config_error("coarse subset index out of range");
    }
  }

  const auto draws = static_cast<std::size_t>(config.draws);
  Eigen::VectorXd maxima_fine(config.draws);
  Eigen::VectorXd maxima_coarse(config.draws);

  parallel_for(draws, resolve_threads(config.threads), [&](std::size_t b) {
    Rng rng = Rng::substream(config.master_seed, b, rng_tags::bootstrap);
    Eigen::VectorXd weights(eval_fine.n());
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      weights[i] = rng.normal();
    }
    Eigen::VectorXd stats;
    draw_into(eval_fine, weights, stats);
    maxima_fine[static_cast<Eigen::Index>(b)] = stats.cwiseAbs().maxCoeff();
    double coarse = 0.0;
    for (const Eigen::Index j : coarse_subset) {
      coarse = std::max(coarse, std::abs(stats[j]));
    }
    maxima_coarse[static_cast<Eigen::Index>(b)] = coarse;
  });

  std::sort(maxima_fine.begin(), maxima_fine.end());
  std::sort(maxima_coarse.begin(), maxima_coarse.end());
  const int k = order_statistic_index(config.draws, config.alpha);
  return NestedCriticalValues{ maxima_coarse[k - 1], maxima_fine[k - 1] };
}

} // namespace uniband
