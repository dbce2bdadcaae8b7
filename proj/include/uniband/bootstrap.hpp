#pragma once

#include "uniband/kde.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace uniband {

struct BootstrapConfig {
  int draws = 2000;
  double alpha = 0.05;
  std::uint64_t master_seed = 0;
  int threads = 0; //!< 0 = resolve from env/hardware; output is invariant to it
};

struct BootstrapDraws {
  Eigen::VectorXd maxima;     //!< B per-draw grid maxima, sorted ascending
  Eigen::VectorXd first_draw; //!< studentized values of draw 0, kept for audit
};

struct CriticalValue {
  double c_hat = 0.0;
  BootstrapDraws draws;
};

//! One multiplier draw: (n·sigma_hat_j)⁻¹ Σᵢ wᵢ(ψᵢⱼ − fhat_j) per location.
Eigen::VectorXd bootstrap_draw(const StudentizedEvaluation& eval,
                               const Eigen::Ref<const Eigen::VectorXd>& weights);

//! Conditional (1−alpha) quantile of the grid maximum of |draws|:
//! standard-normal weight vectors come from per-draw substreams of
//! master_seed, and c_hat is the order statistic at the smallest index k with
//! k/B ≥ 1−alpha. Bitwise reproducible for any thread count.
CriticalValue critical_value(const StudentizedEvaluation& eval, const BootstrapConfig& config);

struct NestedCriticalValues {
  double c_coarse = 0.0;
  double c_fine = 0.0;
};

//! Critical values over a subset of grid indices and over the full grid from
//! the same weight streams; by max-monotonicity c_coarse ≤ c_fine.
NestedCriticalValues critical_value_nested(const StudentizedEvaluation& eval_fine,
                                           const std::vector<Eigen::Index>& coarse_subset,
                                           const BootstrapConfig& config);

} // namespace uniband
