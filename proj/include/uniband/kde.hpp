#pragma once

#include "uniband/kernels.hpp"

#include <Eigen/Dense>

#include <functional>

namespace uniband {

//! Estimates of this variance or below are flagged as degenerate (density²
//! units). Operationalizes the requirement that the summand variance stays
//! bounded away from zero on the evaluation region.
inline constexpr double variance_floor = 1e-12;

//! A linear statistic n⁻¹ Σᵢ ψ_h(Xᵢ, x). The interface is generic over the
//! summand; the shipped instance is the KDE summand h⁻¹K((X−x)/h).
struct LinearStatistic {
  std::function<double(double obs, double x)> psi;
  double bandwidth;
};

//! KDE summand for the given kernel and bandwidth h > 0.
LinearStatistic kde_statistic(const Kernel& kernel, double bandwidth);

struct VarianceEstimate {
  double value;
  bool degenerate;
};

//! The statistic, its variance estimator, and the retained summand matrix on
//! a set of evaluation points. Immutable once built; shareable across threads.
struct StudentizedEvaluation {
  Eigen::VectorXd locations; //!< p evaluation points
  Eigen::VectorXd fhat;      //!< point estimates
  Eigen::VectorXd sigma_hat; //!< studentizing scale, all entries > 0
  Eigen::MatrixXd psi;       //!< n×p summand values, reused by the bootstrap

  Eigen::Index n() const { return psi.rows(); }
  Eigen::Index p() const { return psi.cols(); }
};

//! n⁻¹ Σᵢ ψ(Xᵢ, x). Sample must have n ≥ 2 finite entries.
double kde_at(const Eigen::Ref<const Eigen::VectorXd>& sample, const LinearStatistic& stat,
              double x);

//! n⁻¹[n⁻¹Σψ² − (n⁻¹Σψ)²], flagged degenerate below variance_floor.
VarianceEstimate variance_hat_at(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                 const LinearStatistic& stat, double x);

//! Evaluates fhat, sigma_hat and the summand matrix at the given locations.
//! Throws degenerate_variance_error naming the first offending location.
StudentizedEvaluation evaluate_at(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                  const LinearStatistic& stat,
                                  const Eigen::Ref<const Eigen::VectorXd>& locations);

//! Same evaluation on the points of a designed grid.
struct Grid;
StudentizedEvaluation evaluate_on_grid(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                       const LinearStatistic& stat, const Grid& grid);

//! Builds an evaluation directly from a summand matrix (column j holds
//! ψ(Xᵢ, locations[j])). Same degeneracy contract as evaluate_at.
StudentizedEvaluation evaluation_from_psi(Eigen::MatrixXd psi, Eigen::VectorXd locations);

//! max_j |fhat_j − target_j| / sigma_hat_j; throws config_error on length
//! mismatch. Targets are supplied by the caller (the simulation harness
//! computes them by quadrature).
double studentized_sup(const StudentizedEvaluation& eval,
                       const Eigen::Ref<const Eigen::VectorXd>& targets);

} // namespace uniband
