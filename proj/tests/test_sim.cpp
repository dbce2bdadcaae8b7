#include "uniband/sim.hpp"

#include "uniband/errors.hpp"
#include "uniband/serialize.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using uniband::CoverageConfig;
using uniband::coverage_run;
using uniband::Dgp;
using uniband::DgpId;
using uniband::expected_fhat;
using uniband::Kernel;
using uniband::KernelId;
using uniband::make_dgp;
using uniband::psi_variance;
using uniband::true_sigma;

namespace {

const Kernel& gaussian()
{
  static const Kernel k = uniband::kernel_constants(KernelId::Gaussian);
  return k;
}

double normal_density(double x, double variance)
{
  return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * std::acos(-1.0) * variance);
}

} // namespace

TEST_CASE("densities integrate to one and are positive on their regions")
{
  for (const DgpId id : { DgpId::StdNormal, DgpId::NormalMixture, DgpId::Beta22 }) {
    const Dgp dgp = make_dgp(id);
    const double mass =
      oracle::integrate(dgp.density, dgp.support_lower, dgp.support_upper, 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    for (int i = 0; i <= 20; ++i) {
      const double x =
        dgp.region_lower + (dgp.region_upper - dgp.region_lower) * i / 20.0;
      CHECK(dgp.density(x) > 0.0);
    }
  }
}

TEST_CASE("samplers reproduce their densities in the first two moments")
{
  struct Expected {
    DgpId id;
    double mean;
    double var;
  };
  // mixture: Var = 0.25 + 1; beta(2,2): mean 1/2, var 1/20
  const Expected cases[] = { { DgpId::StdNormal, 0.0, 1.0 },
                             { DgpId::NormalMixture, 0.0, 1.25 },
                             { DgpId::Beta22, 0.5, 0.05 } };
  for (const auto& c : cases) {
    const Dgp dgp = make_dgp(c.id);
    uniband::Rng rng = uniband::Rng::substream(7, 0, uniband::rng_tags::sample);
    const int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = dgp.sample_one(rng);
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / n;
    CHECK(mean == doctest::Approx(c.mean).epsilon(0.02).scale(1.0));
    CHECK(sum_sq / n - mean * mean == doctest::Approx(c.var).epsilon(0.02));
  }
}

TEST_CASE("smoothed mean against Gaussian convolution closed forms")
{
  const Dgp dgp = make_dgp(DgpId::StdNormal);
  // N(0,1) smoothed with a Gaussian kernel at bandwidth h is N(0, 1 + h^2)
  CHECK(expected_fhat(dgp, gaussian(), 1.0, 0.0) ==
        doctest::Approx(0.28209).epsilon(1e-5));
  CHECK(expected_fhat(dgp, gaussian(), 1.0, 0.0) ==
        doctest::Approx(normal_density(0.0, 2.0)).epsilon(1e-9));
  CHECK(expected_fhat(dgp, gaussian(), 0.5, 0.0) ==
        doctest::Approx(0.35682).epsilon(1e-5));
  CHECK(expected_fhat(dgp, gaussian(), 0.5, 0.7) ==
        doctest::Approx(normal_density(0.7, 1.25)).epsilon(1e-9));
}

TEST_CASE("smoothed mean approaches the density as the bandwidth vanishes")
{
  for (const DgpId id : { DgpId::StdNormal, DgpId::NormalMixture, DgpId::Beta22 }) {
    const Dgp dgp = make_dgp(id);
    const double x = 0.5 * (dgp.region_lower + dgp.region_upper);
    const double smoothed = expected_fhat(dgp, gaussian(), 0.001, x);
    CHECK(std::abs(smoothed - dgp.density(x)) / dgp.density(x) < 0.01);
  }
}

TEST_CASE("smoothed mean matches a dense Riemann sum")
{
  const Dgp dgp = make_dgp(DgpId::StdNormal);
  const double h = 0.5;
  const double x = 0.3;
  const int cells = 1000000;
  const double lo = dgp.support_lower;
  const double hi = dgp.support_upper;
  const double dx = (hi - lo) / cells;
  double riemann = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double t = lo + (i + 0.5) * dx;
    riemann += gaussian().eval0((t - x) / h) / h * dgp.density(t) * dx;
  }
  CHECK(expected_fhat(dgp, gaussian(), h, x) == doctest::Approx(riemann).epsilon(1e-6));

  // and the summand variance against the same dense-sum route
  double sq = 0.0;
  double mean = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double t = lo + (i + 0.5) * dx;
    const double psi = gaussian().eval0((t - x) / h) / h;
    sq += psi * psi * dgp.density(t) * dx;
    mean += psi * dgp.density(t) * dx;
  }
  const double var_riemann = sq - mean * mean;
  CHECK(psi_variance(dgp, gaussian(), h, x) == doctest::Approx(var_riemann).epsilon(1e-6));
  CHECK(true_sigma(dgp, gaussian(), h, 750, x) ==
        doctest::Approx(std::sqrt(var_riemann / 750.0)).epsilon(1e-6));
}

TEST_CASE("summand variance approaches its small-bandwidth limit")
{
  const Dgp dgp = make_dgp(DgpId::StdNormal);
  const double h = 0.01;
  for (const double x : { -0.5, 0.0, 0.5 }) {
    const double limit = dgp.density(x) * gaussian().int_k2;
    const double scaled = h * psi_variance(dgp, gaussian(), h, x);
    CHECK(std::abs(scaled - limit) / limit < 0.05);
  }
  // and the scale at zero in absolute terms
  CHECK(h * psi_variance(dgp, gaussian(), h, 0.0) == doctest::Approx(0.11254).epsilon(5e-2));
}

TEST_CASE("studentizing scale: sample-size scaling and symmetry")
{
  const Dgp dgp = make_dgp(DgpId::StdNormal);
  const double s1 = true_sigma(dgp, gaussian(), 0.2, 500, 0.3);
  const double s4 = true_sigma(dgp, gaussian(), 0.2, 2000, 0.3);
  CHECK(s1 / s4 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(true_sigma(dgp, gaussian(), 0.2, 500, 0.6) ==
        doctest::Approx(true_sigma(dgp, gaussian(), 0.2, 500, -0.6)).epsilon(1e-9));
}

TEST_CASE("coverage run: determinism and report invariants")
{
  CoverageConfig config;
  config.dgp = DgpId::StdNormal;
  config.n = 400;
  config.alpha = 0.1;
  config.replications = 100;
  config.draws = 200;
  config.oversample = 4;
  config.seed = 91;

  config.threads = 1;
  const auto serial = coverage_run(config);
  config.threads = 2;
  const auto threaded = coverage_run(config);
  CHECK(uniband::to_json(serial, true).dump() == uniband::to_json(threaded, true).dump());

  CHECK(serial.replications == 100);
  CHECK(serial.failures == 0);
  CHECK(serial.coverage_hat ==
        doctest::Approx(static_cast<double>(serial.hits) / 100.0).epsilon(1e-15));
  CHECK(serial.binomial_se ==
        doctest::Approx(std::sqrt(serial.coverage_hat * (1.0 - serial.coverage_hat) / 100.0))
          .epsilon(1e-12));
  CHECK(serial.trace.size() == 100);
  CHECK(serial.first_p >= 2);
  CHECK(serial.first_bandwidth > 0.0);
  CHECK(serial.first_l_tilde > 0.0);
  CHECK(serial.coverage_hat > 0.5); // loose sanity; the acceptance suite pins the band

  // hits are monotone in the critical value
  for (const auto& t : serial.trace) {
    if (t.hit) {
      CHECK(t.sup_proxy <= t.c_hat + 0.1);
    } else {
      CHECK(t.sup_proxy > t.c_hat);
    }
  }
}

TEST_CASE("coverage run at the median quantile")
{
  CoverageConfig config;
  config.dgp = DgpId::StdNormal;
  config.n = 1000;
  config.alpha = 0.5;
  config.replications = 200;
  config.draws = 400;
  config.oversample = 4;
  config.seed = 17;
  const auto report = coverage_run(config);
  CHECK(std::abs(report.coverage_hat - 0.5) <= 3.0 * report.binomial_se);
}

TEST_CASE("oversample refinement changes the verdicts less and less")
{
  CoverageConfig config;
  config.dgp = DgpId::StdNormal;
  config.n = 400;
  config.alpha = 0.1;
  config.replications = 100;
  config.draws = 200;
  config.seed = 23;

  config.oversample = 4;
  const double c4 = coverage_run(config).coverage_hat;
  config.oversample = 8;
  const double c8 = coverage_run(config).coverage_hat;
  config.oversample = 16;
  const double c16 = coverage_run(config).coverage_hat;
  CHECK(std::abs(c8 - c16) <= std::abs(c4 - c8) + 1e-12);
  CHECK(c8 <= c4); // refining the proxy can only lower the hit count
  CHECK(c16 <= c8);
}

TEST_CASE("coverage preconditions")
{
  CoverageConfig config;
  config.replications = 50;
  CHECK_THROWS_AS(coverage_run(config), uniband::config_error);
  config.replications = 100;
  config.oversample = 2;
  CHECK_THROWS_AS(coverage_run(config), uniband::config_error);
  CHECK_THROWS_AS(uniband::dgp_from_name("cauchy"), uniband::config_error);
}
