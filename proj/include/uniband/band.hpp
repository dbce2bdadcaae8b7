#pragma once

#include "uniband/bootstrap.hpp"
#include "uniband/grid.hpp"
#include "uniband/kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace uniband {

enum class GridRuleKind {
  SolvedMesh,    //!< solve the gap condition for the largest feasible mesh
  SimpleRule,       //!< order-based mesh c_delta·n^{−1/4−gamma}·h^{3/4}
  ExplicitDelta,    //!< user-provided mesh size
};

struct GridRule {
  GridRuleKind kind = GridRuleKind::SolvedMesh;
  double c_delta = 0.5;
  double gamma = 0.01;
  double delta = 0.0; //!< for ExplicitDelta
};

struct BandRequest {
  Eigen::VectorXd sample;
  double region_lower = std::numeric_limits<double>::quiet_NaN(); //!< NaN = quantile default
  double region_upper = std::numeric_limits<double>::quiet_NaN();
  KernelId kernel = KernelId::Gaussian;
  double bandwidth = std::numeric_limits<double>::quiet_NaN(); //!< NaN = auto
  double alpha = 0.05;
  GridRule rule;
  double epsilon = std::numeric_limits<double>::quiet_NaN(); //!< NaN = default budget
  BootstrapConfig bootstrap;
  int histogram_bins = 0; //!< 0 = binning rule
};

struct UniformBand {
  Grid grid;
  Eigen::VectorXd center;     //!< point estimates at the grid
  Eigen::VectorXd half_width; //!< c_hat·sigma_hat, symmetric about center
  double c_hat = 0.0;
  ConstantsReport constants;
  std::vector<std::string> warnings;

  KernelId kernel = KernelId::Gaussian;
  double bandwidth = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  int draws = 0;
  std::uint64_t seed = 0;
};

//! Bandwidth rule 1.06·min(sd, IQR/1.34)·n^{−1/5}; falls back to the standard
//! deviation when the IQR is zero and errors on zero dispersion.
double auto_bandwidth(const Eigen::Ref<const Eigen::VectorXd>& sample);

//! Linear-interpolation sample quantile of prob in [0, 1].
double sample_quantile(const Eigen::Ref<const Eigen::VectorXd>& sample, double prob);

//! Full pipeline: plug-ins → constants → mesh → evaluation → bootstrap →
//! band assembly. The gap condition is re-asserted on the assembled band when
//! the mesh rule is SolvedMesh.
UniformBand build_band(const BandRequest& request);

} // namespace uniband
