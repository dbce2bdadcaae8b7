#pragma once

#include "uniband/kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace uniband {

//! Evaluation grid over [lower, upper]: first interior points at spacing
//! delta, the right endpoint appended, duplicates removed.
struct Grid {
  double lower = 0.0;
  double upper = 0.0;
  double delta = 0.0;   //!< requested mesh size
  double max_gap = 0.0; //!< largest spacing actually realized (≤ delta)
  Eigen::VectorXd points;

  Eigen::Index p() const { return points.size(); }
};

//! Points x_j = lower + (j−1)·delta for j < p plus the right endpoint, with
//! p = ⌊(upper−lower)/delta⌋ + 2. When the division is exact the duplicated
//! endpoint is dropped, so points are strictly increasing.
Grid build_grid(double lower, double upper, double delta);

//! Histogram-based plug-ins for the density extremes over the region.
struct PluginDensityExtrema {
  double f_max_hat = 0.0;
  double f_min_hat = 0.0;
  int bin_count = 0;
};

//! Exact-value extrema, for formula-only runs (no data).
PluginDensityExtrema exact_extrema(double f_min, double f_max);

//! Histogram over [lower, upper] with Freedman–Diaconis binning (clipped to
//! [8, 256] bins), heights normalized by the full sample size so bin heights
//! estimate the unconditional density. The minimum is floored at 0.01/|X| to
//! keep downstream formulas finite. Requires ≥ 20 in-region observations and
//! throws insufficient_data_error otherwise. bins_override > 0 bypasses the
//! binning rule.
PluginDensityExtrema plugin_extrema(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                    double lower, double upper, int bins_override = 0);

//! Bernstein-bound constants for the local-variation control of the
//! studentized process, all at a given exceedance budget eps.
struct BernsteinConstants {
  double a0 = 0.0; //!< high-probability sup bound for the centered estimate
  double a1 = 0.0; //!< same for its derivative
  long m_n = 0;    //!< auxiliary mesh count ⌊√n·h^{−3/2}·width⌋ + 2
  double m0 = 0.0; //!< 2·sup|K| / h
  double m1 = 0.0; //!< 2·sup|K'| / h²
  double v0 = 0.0; //!< f_max·∫K² / h
  double v1 = 0.0; //!< f_max·∫(K')² / h³
};

//! With t = log(2·m_n/eps):
//!   a0 = √(2·v0·t/n) + m0·t/(3n) + sup|K'|/(√n·√h)
//!   a1 = √(2·v1·t/n) + m1·t/(3n) + sup|K''|/(√n·h^{3/2})
BernsteinConstants compute_A(const Kernel& kernel, double h, std::size_t n, double region_width,
                             double f_max_hat, double eps);

//! Envelope of the normalized summands: max(B_ψ, B_4, 1) with the worst-case
//! plug-in variance var_min = f_min·∫K²/h,
//!   B_ψ = (1/log 2)·2·sup|K| / (h·√var_min),
//!   B_4 = √(16·f_max·∫K⁴ / (h³·var_min²)).
double compute_Bn(const Kernel& kernel, double h, const PluginDensityExtrema& extrema);

//! Plug-in for sup 1/σ_n: √(n·h / (∫K²·f_min)).
double sigma_inv_sup_plugin(const Kernel& kernel, double h, std::size_t n,
                            const PluginDensityExtrema& extrema);

//! Local-variation bound 2·(sup 1/σ_n)·a1, with a1 evaluated at half the
//! exceedance budget.
double compute_L_tilde(const Kernel& kernel, double h, std::size_t n,
                       const PluginDensityExtrema& extrema, double a1_half_eps);

//! Gap tolerance r = 2·(b_n²·log³(n·p)/n)^{1/4}. p may be fractional (the
//! mesh solver uses the continuous proxy width/delta).
double compute_r(double b_n, std::size_t n, double p);

//! Accuracy scale rho = (b_n²·log⁵(n·p)/n)^{1/4}.
double compute_rho(double b_n, std::size_t n, double p);

//! Default exceedance budget min(0.1, (n·h)^{−1/4}/log n).
double default_epsilon(std::size_t n, double h);

//! g(delta) = delta·l_tilde/2 − r(delta) with the continuous point-count
//! proxy width/delta; strictly increasing in delta. The mesh solver bisects
//! this function and tests scan it.
double mesh_gap_excess(double delta, double l_tilde, double b_n, std::size_t n, double width);

struct MeshRoot {
  double delta_tilde = 0.0; //!< largest feasible mesh (bisection, feasible side)
  bool slack = false;       //!< whole-interval mesh already satisfies the condition
};

//! Largest delta in [1e-8·width, width] with g(delta) ≤ 0, to 1e-10 relative
//! tolerance. Throws infeasible_mesh_error when even the floor violates the
//! condition; reports slack when delta = width already satisfies it.
MeshRoot solve_mesh_delta(double l_tilde, double b_n, std::size_t n, double width);

//! The complete grid-selection ledger for one configuration.
struct ConstantsReport {
  double b_n = 0.0;
  double r = 0.0;     //!< at the selected grid's integer point count
  double rho_n = 0.0; //!< at the selected grid's integer point count
  double epsilon = 0.0;
  double a0 = 0.0; //!< at epsilon/2
  double a1 = 0.0; //!< at epsilon/2
  double l_tilde = 0.0;
  double l_second_term = 0.0; //!< reported scale of the studentizing-derivative term
  long m_n = 0;
  double m0 = 0.0, m1 = 0.0, v0 = 0.0, v1 = 0.0;
  double sigma_inv_sup = 0.0;
  bool indicator_ok = false; //!< l_tilde·max_gap/2 ≤ r on the selected grid
  double delta = 0.0;
  long p = 0;
  double max_gap = 0.0;
  double f_min_hat = 0.0, f_max_hat = 0.0;
  int bins = 0;
  double hd_ratio = 0.0; //!< b_n²·log⁵(n·p)/n, the high-dimension health check
  std::vector<std::string> notes;
};

//! Fills a ConstantsReport for an externally chosen grid (simple or explicit
//! mesh rules); the indicator is evaluated, not enforced.
ConstantsReport constants_for_grid(const Kernel& kernel, double h, std::size_t n,
                                   const PluginDensityExtrema& extrema, double eps,
                                   const Grid& grid);

struct MeshSolution {
  Grid grid;
  ConstantsReport report;
};

//! Mesh selection: bisect g, round conservatively to an integer point count
//! p̂ = ⌈width/δ̃⌉ + 2 with δ̂ = width/(p̂−1), and re-check the gap condition
//! at the realized grid. The returned report always has indicator_ok = true;
//! infeasibility surfaces as infeasible_mesh_error instead.
MeshSolution solve_mesh(const Kernel& kernel, double h, std::size_t n, double lower, double upper,
                        const PluginDensityExtrema& extrema, double eps);

//! Order-based mesh delta = c_delta·n^{−1/4−gamma}·h^{3/4}, clipped to the
//! region width. Requires c_delta ∈ (0,1) and gamma > 0.
Grid simple_grid_rule(std::size_t n, double h, double lower, double upper, double c_delta,
                      double gamma);

} // namespace uniband
