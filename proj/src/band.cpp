#include "uniband/band.hpp"

#include "uniband/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace uniband {

double sample_quantile(const Eigen::Ref<const Eigen::VectorXd>& sample, double prob)
{
  if (sample.size() < 1 || !(prob >= 0.0 && prob <= 1.0)) {
    throw config_error("sample_quantile requires data and prob in [0, 1]");
  }
  std::vector<double> sorted(sample.data(), sample.data() + sample.size());
  std::sort(sorted.begin(), sorted.end());
  const double idx = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(idx));
  const auto hi = static_cast<std::size_t>(std::ceil(idx));
  const double w = idx - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

double auto_bandwidth(const Eigen::Ref<const Eigen::VectorXd>& sample)
{
  const auto n = sample.size();
  if (n < 2) {
    throw config_error("auto bandwidth requires at least 2 observations");
  }
  const double mean = sample.mean();
  const double sd =
    std::sqrt((sample.array() - mean).square().sum() / static_cast<double>(n - 1));
  if (!(sd > 0.0)) {
    throw config_error("auto bandwidth requires nonzero dispersion");
  }
  const double iqr = sample_quantile(sample, 0.75) - sample_quantile(sample, 0.25);
  double scale = std::min(sd, iqr / 1.34);
  if (!(scale > 0.0)) {
    scale = sd;
  }
  return 1.06 * scale * std::pow(static_cast<double>(n), -0.2);
}

UniformBand build_band(const BandRequest& request)
{
  if (!(request.alpha > 0.0 && request.alpha < 1.0)) {
    throw config_error("alpha must lie in (0, 1)");
  }
  if (request.sample.size() < 2 || !request.sample.allFinite()) {
    throw config_error("sample must contain at least 2 finite observations");
  }

  // region defaults to central sample quantiles, keeping the density
  // bounded away from zero on the inference region
  double lower = request.region_lower;
  double upper = request.region_upper;
  if (std::isnan(lower) || std::isnan(upper)) {
    lower = sample_quantile(request.sample, 0.05);
    upper = sample_quantile(request.sample, 0.95);
  }
  if (!(lower < upper)) {
    throw config_error("region must satisfy lower < upper");
  }

  const double h = std::isnan(request.bandwidth) ? auto_bandwidth(request.sample)
                                                 : request.bandwidth;
  if (!(h > 0.0)) {
    throw config_error("bandwidth must be positive");
  }

  const Kernel kernel = kernel_constants(request.kernel);
  const auto n = static_cast<std::size_t>(request.sample.size());
  const PluginDensityExtrema extrema =
    plugin_extrema(request.sample, lower, upper, request.histogram_bins);
  const double eps = std::isnan(request.epsilon) ? default_epsilon(n, h) : request.epsilon;
  if (!(eps > 0.0 && eps < 1.0)) {
    throw config_error("epsilon must lie in (0, 1)");
  }

  Grid grid;
  ConstantsReport constants;
  switch (request.rule.kind) {
    case GridRuleKind::SolvedMesh: {
      MeshSolution solved = solve_mesh(kernel, h, n, lower, upper, extrema, eps);
      grid = std::move(solved.grid);
      constants = std::move(solved.report);
      break;
    }
    case GridRuleKind::SimpleRule:
      grid = simple_grid_rule(n, h, lower, upper, request.rule.c_delta, request.rule.gamma);
      constants = constants_for_grid(kernel, h, n, extrema, eps, grid);
      break;
    case GridRuleKind::ExplicitDelta:
      grid = build_grid(lower, upper, request.rule.delta);
      constants = constants_for_grid(kernel, h, n, extrema, eps, grid);
      break;
  }

  const LinearStatistic stat = kde_statistic(kernel, h);
  const StudentizedEvaluation eval = evaluate_on_grid(request.sample, stat, grid);

  BootstrapConfig boot = request.bootstrap;
  boot.alpha = request.alpha;
  const CriticalValue cv = critical_value(eval, boot);

  UniformBand band;
  band.grid = std::move(grid);
  band.center = eval.fhat;
  band.half_width = cv.c_hat * eval.sigma_hat;
  band.c_hat = cv.c_hat;
  band.constants = std::move(constants);
  band.kernel = request.kernel;
  band.bandwidth = h;
  band.alpha = request.alpha;
  band.n = n;
  band.draws = boot.draws;
  band.seed = boot.master_seed;

  // the gap condition is re-checked on the assembled band, not trusted from
  // the solver
  if (request.rule.kind == GridRuleKind::SolvedMesh) {
    if (!(band.constants.l_tilde * band.grid.max_gap / 2.0 <= band.constants.r)) {
      throw numeric_error("assembled band violates the gap condition");
    }
  } else if (!band.constants.indicator_ok) {
    band.warnings.push_back("gap condition not satisfied by the chosen mesh "
                            "(l_tilde*max_gap/2 > r)");
  }
  if (band.constants.hd_ratio > 0.5) {
    band.warnings.push_back("grid may be too dense for the high-dimensional approximation "
                            "(b_n^2*log^5(n*p)/n > 0.5)");
  }
  for (const auto& note : band.constants.notes) {
    band.warnings.push_back(note);
  }
  return band;
}

} // namespace uniband
