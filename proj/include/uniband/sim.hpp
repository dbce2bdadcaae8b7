#pragma once

#include "uniband/band.hpp"
#include "uniband/kernels.hpp"
#include "uniband/rng.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace uniband {

enum class DgpId {
  StdNormal,
  NormalMixture, //!< 0.5·N(−1, 0.25) + 0.5·N(1, 0.25)
  Beta22,        //!< density 6x(1−x) on [0, 1]
};

//! A fully known data generating process: density, seeded sampler, and the
//! ranges the harness integrates/infers over.
struct Dgp {
  DgpId id;
  std::function<double(double)> density;
  std::function<double(Rng&)> sample_one;
  double support_lower = 0.0; //!< integration range for quadrature targets
  double support_upper = 0.0;
  double region_lower = 0.0; //!< default inference region (density positive there)
  double region_upper = 0.0;
};

Dgp make_dgp(DgpId id);
DgpId dgp_from_name(const std::string& name);
std::string dgp_name(DgpId id);

//! E[fhat(x)] = ∫ K(u)·f(x + u·h) du by adaptive quadrature (1e-10 absolute).
double expected_fhat(const Dgp& dgp, const Kernel& kernel, double h, double x);

//! Var[ψ_h(X, x)] for a single observation, by quadrature.
double psi_variance(const Dgp& dgp, const Kernel& kernel, double h, double x);

//! √(Var[ψ_h(X, x)] / n), the studentizing scale of the mean.
double true_sigma(const Dgp& dgp, const Kernel& kernel, double h, std::size_t n, double x);

struct CoverageConfig {
  DgpId dgp = DgpId::StdNormal;
  std::size_t n = 2000;
  double alpha = 0.05;
  GridRule rule;
  int replications = 500;
  int draws = 1000;
  int oversample = 10;
  std::uint64_t seed = 0;
  KernelId kernel = KernelId::Gaussian;
  double bandwidth = std::numeric_limits<double>::quiet_NaN(); //!< NaN = auto per sample
  double region_lower = std::numeric_limits<double>::quiet_NaN(); //!< NaN = DGP default
  double region_upper = std::numeric_limits<double>::quiet_NaN();
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  int histogram_bins = 0;
  int threads = 0;
};

//! Per-replication audit record.
struct ReplicationTrace {
  bool hit = false;
  bool failed = false;
  double sup_proxy = 0.0;
  double c_hat = 0.0;
  long p = 0;
  double delta = 0.0;
  double bandwidth = 0.0;
};

struct CoverageReport {
  int replications = 0;
  int hits = 0;
  int failures = 0;
  double coverage_hat = 0.0;
  double binomial_se = 0.0;
  double nominal = 0.0;
  int oversample = 0;
  int draws = 0;
  std::uint64_t seed = 0;
  std::string dgp;
  std::string grid_rule;
  std::size_t n = 0;
  double alpha = 0.0;

  //! realized values from replication 0, echoed for the ledger
  double first_bandwidth = 0.0;
  long first_p = 0;
  double first_b_n = 0.0;
  double first_l_tilde = 0.0;
  double first_r = 0.0;
  double first_epsilon = 0.0;
  double first_delta = 0.0;

  std::vector<ReplicationTrace> trace;
};

//! Monte Carlo coverage of the bands for the quadrature-exact target
//! E[fhat]: each replication draws a sample, builds a band, refines the
//! band's grid by `oversample`, and scores a hit when the studentized
//! deviation stays within c_hat at every refined point. Replications run on
//! per-index substreams and merge in index order, so the report is
//! byte-stable for any thread count. Aborts if more than 2% of replications
//! fail to build.
CoverageReport coverage_run(const CoverageConfig& config);

} // namespace uniband
