#include "uniband/kde.hpp"

#include "uniband/errors.hpp"
#include "uniband/grid.hpp"

#include <cmath>
#include <utility>

namespace uniband {

namespace {

void ensure_valid_sample(const Eigen::Ref<const Eigen::VectorXd>& sample)
{
  if (sample.size() < 2) {
    throw config_error("sample must contain at least 2 observations");
  }
  if (!sample.allFinite()) {
    throw config_error("sample contains non-finite values");
  }
}

} // namespace

LinearStatistic kde_statistic(const Kernel& kernel, double bandwidth)
{
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw config_error("bandwidth must be positive and finite");
  }
  auto eval0 = kernel.eval0;
  return LinearStatistic{
    [eval0, bandwidth](double obs, double x) { return eval0((obs - x) / bandwidth) / bandwidth; },
    bandwidth,
  };
}

double kde_at(const Eigen::Ref<const Eigen::VectorXd>& sample, const LinearStatistic& stat,
              double x)
{
  ensure_valid_sample(sample);
  if (!std::isfinite(x)) {
    throw config_error("evaluation point must be finite");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    sum += stat.psi(sample[i], x);
  }
  return sum / static_cast<double>(sample.size());
}

VarianceEstimate variance_hat_at(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                 const LinearStatistic& stat, double x)
{
  ensure_valid_sample(sample);
  if (!std::isfinite(x)) {
    throw config_error("evaluation point must be finite");
  }
  const double n = static_cast<double>(sample.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    const double v = stat.psi(sample[i], x);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  double value = (sum_sq / n - mean * mean) / n;
  if (value < 0.0) {
    value = 0.0; // cancellation can push the estimate marginally negative
  }
  return VarianceEstimate{ value, value < variance_floor };
}

StudentizedEvaluation evaluate_at(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                  const LinearStatistic& stat,
                                  const Eigen::Ref<const Eigen::VectorXd>& locations)
{
  ensure_valid_sample(sample);
  if (locations.size() < 1) {
    throw config_error("at least one evaluation point is required");
  }
  if (!locations.allFinite()) {
    throw config_error("evaluation points must be finite");
  }

  Eigen::MatrixXd psi(sample.size(), locations.size());
  for (Eigen::Index j = 0; j < locations.size(); ++j) {
    const double x = locations[j];
    for (Eigen::Index i = 0; i < sample.size(); ++i) {
      psi(i, j) = stat.psi(sample[i], x);
    }
  }
  return evaluation_from_psi(std::move(psi), locations);
}

StudentizedEvaluation evaluate_on_grid(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                       const LinearStatistic& stat, const Grid& grid)
{
  return evaluate_at(sample, stat, grid.points);
}

StudentizedEvaluation evaluation_from_psi(Eigen::MatrixXd psi, Eigen::VectorXd locations)
{
  if (psi.cols() != locations.size()) {
    throw config_error("summand matrix width must match the number of locations");
  }
  if (psi.rows() < 2) {
    throw config_error("summand matrix must have at least 2 rows");
  }

  const double n = static_cast<double>(psi.rows());
  StudentizedEvaluation eval;
  eval.fhat = psi.colwise().mean();
  eval.sigma_hat.resize(psi.cols());
  for (Eigen::Index j = 0; j < psi.cols(); ++j) {
    const double mean_sq = psi.col(j).squaredNorm() / n;
    double var = (mean_sq - eval.fhat[j] * eval.fhat[j]) / n;
    if (var < variance_floor) {
      throw degenerate_variance_error(locations[j], var);
    }
    eval.sigma_hat[j] = std::sqrt(var);
  }
  eval.locations = std::move(locations);
  eval.psi = std::move(psi);
  return eval;
}

double studentized_sup(const StudentizedEvaluation& eval,
                       const Eigen::Ref<const Eigen::VectorXd>& targets)
{
  if (targets.size() != eval.fhat.size()) {
    throw config_error("target vector length must match the evaluation grid");
  }
  return ((eval.fhat - targets).cwiseAbs().cwiseQuotient(eval.sigma_hat)).maxCoeff();
}

} // namespace uniband
