#include "uniband/kde.hpp"

#include "uniband/errors.hpp"
#include "uniband/quadrature.hpp"
#include "uniband/rng.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using uniband::evaluate_at;
using uniband::kde_at;
using uniband::kde_statistic;
using uniband::Kernel;
using uniband::KernelId;
using uniband::LinearStatistic;
using uniband::Rng;
using uniband::StudentizedEvaluation;

namespace {

const Kernel& gaussian()
{
  static const Kernel k = uniband::kernel_constants(KernelId::Gaussian);
  return k;
}

const Kernel& triweight()
{
  static const Kernel k = uniband::kernel_constants(KernelId::Triweight);
  return k;
}

Eigen::VectorXd equispaced(int n, double lo, double hi)
{
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

} // namespace

TEST_CASE("point estimates at hand-checked values")
{
  const LinearStatistic stat = kde_statistic(gaussian(), 1.0);
  CHECK(kde_at(Eigen::Vector2d(0.0, 0.0), stat, 0.0) ==
        doctest::Approx(0.398942).epsilon(1e-6)); // phi(0)
  CHECK(kde_at(Eigen::Vector2d(-1.0, 1.0), stat, 0.0) ==
        doctest::Approx(0.241971).epsilon(1e-6)); // phi(1)

  const LinearStatistic tri = kde_statistic(triweight(), 1.0);
  Eigen::VectorXd sample(3);
  sample << 0.2, 0.5, 0.9;
  CHECK(kde_at(sample, tri, sample.maxCoeff() + 1.0000001) == 0.0); // compact support
}

TEST_CASE("variance estimator at hand-checked values")
{
  const LinearStatistic stat = kde_statistic(gaussian(), 1.0);

  auto flat = uniband::variance_hat_at(Eigen::Vector3d(0.7, 0.7, 0.7), stat, 0.3);
  CHECK(flat.value == doctest::Approx(0.0));
  CHECK(flat.degenerate);

  auto symmetric = uniband::variance_hat_at(Eigen::Vector2d(-1.0, 1.0), stat, 0.0);
  CHECK(symmetric.value == doctest::Approx(0.0));
  CHECK(symmetric.degenerate);

  auto generic = uniband::variance_hat_at(Eigen::Vector2d(0.0, 1.0), stat, 0.0);
  CHECK(generic.value == doctest::Approx(0.00308).epsilon(1e-3));
  CHECK(generic.value == doctest::Approx(0.0030800091).epsilon(1e-7));
  CHECK(!generic.degenerate);
}

TEST_CASE("grid evaluation matches the brute-force double loop")
{
  const Eigen::VectorXd sample = equispaced(50, 0.0, 1.0);
  const LinearStatistic stat = kde_statistic(gaussian(), 0.3);
  Eigen::Vector3d grid(0.25, 0.5, 0.75);

  const StudentizedEvaluation eval = evaluate_at(sample, stat, grid);
  for (int j = 0; j < 3; ++j) {
    const double fh = oracle::kde_brute(sample, gaussian().eval0, 0.3, grid[j]);
    const double var = oracle::variance_brute(sample, gaussian().eval0, 0.3, grid[j]);
    CHECK(eval.fhat[j] == doctest::Approx(fh).epsilon(1e-12));
    CHECK(eval.sigma_hat[j] == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
  }
}

TEST_CASE("degenerate variance on a grid names the first offending point")
{
  const LinearStatistic stat = kde_statistic(gaussian(), 0.5);
  Eigen::Vector2d sample(0.4, 0.4);
  try {
    evaluate_at(sample, stat, Eigen::Vector2d(0.1, 0.2));
    FAIL("expected degenerate_variance_error");
  } catch (const uniband::degenerate_variance_error& e) {
    CHECK(e.location == doctest::Approx(0.1));
  }
}

TEST_CASE("conditional-variance identity over random configurations")
{
  Rng rng = Rng::substream(202501, 0, uniband::rng_tags::generic);
  for (int config = 0; config < 100; ++config) {
    const int n = 5 + static_cast<int>(rng.uniform01() * 115);
    const double h = 0.05 + 1.95 * rng.uniform01();
    Eigen::VectorXd sample(n);
    for (int i = 0; i < n; ++i) {
      sample[i] = 3.0 * rng.normal();
    }
    // anchor grid points near observations so the variance stays away from
    // the degeneracy floor even at small bandwidths
    const int p = 1 + static_cast<int>(rng.uniform01() * 11);
    Eigen::VectorXd grid(p);
    for (int j = 0; j < p; ++j) {
      const int anchor = static_cast<int>(rng.uniform01() * n);
      grid[j] = sample[anchor] + 0.1 * h * rng.normal();
    }

    const LinearStatistic stat = kde_statistic(gaussian(), h);
    const StudentizedEvaluation eval = evaluate_at(sample, stat, grid);
    for (int j = 0; j < p; ++j) {
      double centered_sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = eval.psi(i, j) - eval.fhat[j];
        centered_sq += d * d;
      }
      const double n2 = static_cast<double>(n) * static_cast<double>(n);
      const double ratio = centered_sq / (n2 * eval.sigma_hat[j] * eval.sigma_hat[j]);
      CHECK(ratio == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("the density estimate integrates to one")
{
  Rng rng = Rng::substream(202501, 1, uniband::rng_tags::generic);
  Eigen::VectorXd sample(40);
  for (int i = 0; i < 40; ++i) {
    sample[i] = rng.normal();
  }
  const double h = 0.4;
  const LinearStatistic stat = kde_statistic(gaussian(), h);
  const double mass = uniband::integrate(
    [&](double x) { return kde_at(sample, stat, x); }, sample.minCoeff() - 10.0 * h,
    sample.maxCoeff() + 10.0 * h, 1e-6);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("translation equivariance")
{
  Rng rng = Rng::substream(202501, 2, uniband::rng_tags::generic);
  Eigen::VectorXd sample(30);
  for (int i = 0; i < 30; ++i) {
    sample[i] = rng.normal();
  }
  Eigen::VectorXd grid = equispaced(7, -1.0, 1.0);
  const LinearStatistic stat = kde_statistic(gaussian(), 0.35);

  const double shift = 7.25;
  const StudentizedEvaluation base = evaluate_at(sample, stat, grid);
  const StudentizedEvaluation moved =
    evaluate_at(sample.array() + shift, stat, grid.array() + shift);
  for (int j = 0; j < 7; ++j) {
    CHECK(moved.fhat[j] == doctest::Approx(base.fhat[j]).epsilon(1e-12));
    CHECK(moved.sigma_hat[j] == doctest::Approx(base.sigma_hat[j]).epsilon(1e-12));
  }
}

TEST_CASE("studentized sup")
{
  const Eigen::VectorXd sample = equispaced(50, 0.0, 1.0);
  const LinearStatistic stat = kde_statistic(gaussian(), 0.3);
  const StudentizedEvaluation eval = evaluate_at(sample, stat, Eigen::Vector3d(0.3, 0.5, 0.7));

  CHECK(uniband::studentized_sup(eval, eval.fhat) == 0.0); // identity targets

  // a unit ratio at a single point
  const StudentizedEvaluation one = evaluate_at(sample, stat, Eigen::VectorXd::Constant(1, 0.5));
  Eigen::VectorXd target(1);
  target << one.fhat[0] - one.sigma_hat[0];
  CHECK(uniband::studentized_sup(one, target) == doctest::Approx(1.0).epsilon(1e-14));

  // random targets against a direct loop
  Rng rng = Rng::substream(202501, 3, uniband::rng_tags::generic);
  Eigen::VectorXd targets(3);
  for (int j = 0; j < 3; ++j) {
    targets[j] = eval.fhat[j] + 0.1 * rng.normal();
  }
  double brute = 0.0;
  for (int j = 0; j < 3; ++j) {
    brute = std::max(brute, std::abs(eval.fhat[j] - targets[j]) / eval.sigma_hat[j]);
  }
  CHECK(uniband::studentized_sup(eval, targets) == doctest::Approx(brute).epsilon(1e-14));

  CHECK_THROWS_AS(uniband::studentized_sup(eval, Eigen::Vector2d(0.0, 0.0)),
                  uniband::config_error);
}

TEST_CASE("input contracts")
{
  const LinearStatistic stat = kde_statistic(gaussian(), 1.0);
  CHECK_THROWS_AS(kde_at(Eigen::VectorXd::Constant(1, 0.0), stat, 0.0), uniband::config_error);
  CHECK_THROWS_AS(kde_statistic(gaussian(), 0.0), uniband::config_error);
  CHECK_THROWS_AS(kde_statistic(gaussian(), -1.0), uniband::config_error);
  Eigen::Vector2d bad(0.0, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(kde_at(bad, stat, 0.0), uniband::config_error);
  CHECK_THROWS_AS(kde_at(Eigen::Vector2d(0.0, 1.0), stat,
                         std::numeric_limits<double>::infinity()),
                  uniband::config_error);
}
