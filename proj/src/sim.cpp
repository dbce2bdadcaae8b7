#include "uniband/sim.hpp"

#include "uniband/errors.hpp"
#include "uniband/kde.hpp"
#include "uniband/quadrature.hpp"
#include "uniband/threading.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace uniband {

namespace {

constexpr double inv_sqrt_2pi = 0.3989422804014327;

double phi(double x)
{
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

} // namespace

Dgp make_dgp(DgpId id)
{
  Dgp dgp;
  dgp.id = id;
  switch (id) {
    case DgpId::StdNormal:
      dgp.density = [](double x) { return phi(x); };
      dgp.sample_one = [](Rng& rng) { return rng.normal(); };
      dgp.support_lower = -13.0;
      dgp.support_upper = 13.0;
      dgp.region_lower = -1.0;
      dgp.region_upper = 1.0;
      break;
    case DgpId::NormalMixture:
      dgp.density = [](double x) { return (phi((x + 1.0) / 0.5) + phi((x - 1.0) / 0.5)) / 1.0; };
      dgp.sample_one = [](Rng& rng) {
        const double mean = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        return mean + 0.5 * rng.normal();
      };
      dgp.support_lower = -7.5;
      dgp.support_upper = 7.5;
      dgp.region_lower = -2.0;
      dgp.region_upper = 2.0;
      break;
    case DgpId::Beta22:
      dgp.density = [](double x) { return (x > 0.0 && x < 1.0) ? 6.0 * x * (1.0 - x) : 0.0; };
      // second order statistic of three uniforms
      dgp.sample_one = [](Rng& rng) {
        double a = rng.uniform01();
        double b = rng.uniform01();
        double c = rng.uniform01();
        return std::max(std::min(a, b), std::min(std::max(a, b), c));
      };
      dgp.support_lower = 0.0;
      dgp.support_upper = 1.0;
      dgp.region_lower = 0.2;
      dgp.region_upper = 0.8;
      break;
    default:
      throw config_error("unsupported DGP id");
  }
  return dgp;
}

DgpId dgp_from_name(const std::string& name)
{
  if (name == "stdnormal") return DgpId::StdNormal;
  if (name == "mixture") return DgpId::NormalMixture;
  if (name == "beta22") return DgpId::Beta22;
  throw config_error("unknown DGP \"" + name + "\" (expected stdnormal, mixture, or beta22)");
}

std::string dgp_name(DgpId id)
{
  switch (id) {
    case DgpId::StdNormal: return "stdnormal";
    case DgpId::NormalMixture: return "mixture";
    case DgpId::Beta22: return "beta22";
  }
  throw config_error("unsupported DGP id");
}

double expected_fhat(const Dgp& dgp, const Kernel& kernel, double h, double x)
{
  if (!(h > 0.0)) {
    throw config_error("expected_fhat requires h > 0");
  }
  // u-substitution t = x + u·h keeps the kernel support fixed
  double lo = -kernel.cutoff;
  double hi = kernel.cutoff;
  lo = std::max(lo, (dgp.support_lower - x) / h);
  hi = std::min(hi, (dgp.support_upper - x) / h);
  if (!(lo < hi)) {
    return 0.0;
  }
  return integrate([&](double u) { return kernel.eval0(u) * dgp.density(x + u * h); }, lo, hi,
                   1e-10);
}

double psi_variance(const Dgp& dgp, const Kernel& kernel, double h, double x)
{
  if (!(h > 0.0)) {
    throw config_error("psi_variance requires h > 0");
  }
  double lo = -kernel.cutoff;
  double hi = kernel.cutoff;
  lo = std::max(lo, (dgp.support_lower - x) / h);
  hi = std::min(hi, (dgp.support_upper - x) / h);
  if (!(lo < hi)) {
    return 0.0;
  }
  const double mean_sq = integrate(
    [&](double u) {
      const double k = kernel.eval0(u);
      return k * k * dgp.density(x + u * h);
    },
    lo, hi, 1e-12) / h;
  const double mean = integrate(
    [&](double u) { return kernel.eval0(u) * dgp.density(x + u * h); }, lo, hi, 1e-12);
  return mean_sq - mean * mean;
}

double true_sigma(const Dgp& dgp, const Kernel& kernel, double h, std::size_t n, double x)
{
  if (n < 1) {
    throw config_error("true_sigma requires n >= 1");
  }
  return std::sqrt(psi_variance(dgp, kernel, h, x) / static_cast<double>(n));
}

namespace {

//! The band's grid with `factor` equal subdivisions of every gap.
Eigen::VectorXd refine_grid(const Eigen::VectorXd& points, int factor)
{
  const Eigen::Index gaps = points.size() - 1;
  Eigen::VectorXd out(gaps * factor + 1);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < gaps; ++j) {
    const double lo = points[j];
    const double step = (points[j + 1] - lo) / factor;
    for (int s = 0; s < factor; ++s) {
      out[k++] = lo + s * step;
    }
  }
  out[k] = points[gaps];
  return out;
}

} // namespace

CoverageReport coverage_run(const CoverageConfig& config)
{
  if (config.replications < 100) {
    throw config_error("coverage_run requires at least 100 replications");
  }
  if (config.oversample < 4) {
    throw config_error("coverage_run requires oversample factor >= 4");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw config_error("alpha must lie in (0, 1)");
  }

  const Dgp dgp = make_dgp(config.dgp);
  const Kernel kernel = kernel_constants(config.kernel);
  const double lower = std::isnan(config.region_lower) ? dgp.region_lower : config.region_lower;
  const double upper = std::isnan(config.region_upper) ? dgp.region_upper : config.region_upper;

  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<ReplicationTrace> trace(reps);
  std::vector<ConstantsReport> first_constants(1);
  std::vector<double> first_bandwidth(1, 0.0);

  parallel_for(reps, resolve_threads(config.threads), [&](std::size_t rep) {
    ReplicationTrace& t = trace[rep];
    try {
      Rng rng = Rng::substream(config.seed, rep, rng_tags::sample);
      Eigen::VectorXd sample(static_cast<Eigen::Index>(config.n));
      for (Eigen::Index i = 0; i < sample.size(); ++i) {
        sample[i] = dgp.sample_one(rng);
      }

      BandRequest request;
      request.sample = std::move(sample);
      request.region_lower = lower;
      request.region_upper = upper;
      request.kernel = config.kernel;
      request.bandwidth = config.bandwidth;
      request.alpha = config.alpha;
      request.rule = config.rule;
      request.epsilon = config.epsilon;
      request.histogram_bins = config.histogram_bins;
      request.bootstrap.draws = config.draws;
      request.bootstrap.master_seed =
        Rng::substream(config.seed, rep, rng_tags::bootstrap).next_u64();
      request.bootstrap.threads = 1; // replications are the parallel unit

      const UniformBand band = build_band(request);

      const Eigen::VectorXd fine = refine_grid(band.grid.points, config.oversample);
      const LinearStatistic stat = kde_statistic(kernel, band.bandwidth);
      const StudentizedEvaluation eval = evaluate_at(request.sample, stat, fine);
      Eigen::VectorXd targets(fine.size());
      for (Eigen::Index j = 0; j < fine.size(); ++j) {
        targets[j] = expected_fhat(dgp, kernel, band.bandwidth, fine[j]);
      }

      t.sup_proxy = studentized_sup(eval, targets);
      t.c_hat = band.c_hat;
      t.hit = t.sup_proxy <= band.c_hat;
      t.p = static_cast<long>(band.grid.p());
      t.delta = band.grid.delta;
      t.bandwidth = band.bandwidth;
      if (rep == 0) {
        first_constants[0] = band.constants;
        first_bandwidth[0] = band.bandwidth;
      }
    } catch (const std::exception&) {
      t.failed = true;
    }
  });

  CoverageReport report;
  report.replications = config.replications;
  report.oversample = config.oversample;
  report.draws = config.draws;
  report.seed = config.seed;
  report.dgp = dgp_name(config.dgp);
  report.n = config.n;
  report.alpha = config.alpha;
  report.nominal = 1.0 - config.alpha;
  switch (config.rule.kind) {
    case GridRuleKind::SolvedMesh: report.grid_rule = "proposition1"; break;
    case GridRuleKind::SimpleRule: report.grid_rule = "simple"; break;
    case GridRuleKind::ExplicitDelta: report.grid_rule = "explicit"; break;
  }

  for (const auto& t : trace) {
    if (t.failed) {
      ++report.failures;
    } else if (t.hit) {
      ++report.hits;
    }
  }
  if (report.failures * 50 > config.replications) {
    throw numeric_error("more than 2% of replications failed to build a band");
  }

  const int effective = config.replications - report.failures;
  report.coverage_hat = static_cast<double>(report.hits) / static_cast<double>(effective);
  report.binomial_se = std::sqrt(report.coverage_hat * (1.0 - report.coverage_hat) /
                                 static_cast<double>(effective));
  if (!trace.empty() && !trace[0].failed) {
    report.first_bandwidth = first_bandwidth[0];
    report.first_p = first_constants[0].p;
    report.first_b_n = first_constants[0].b_n;
    report.first_l_tilde = first_constants[0].l_tilde;
    report.first_r = first_constants[0].r;
    report.first_epsilon = first_constants[0].epsilon;
    report.first_delta = first_constants[0].delta;
  }
  report.trace = std::move(trace);
  return report;
}

} // namespace uniband
