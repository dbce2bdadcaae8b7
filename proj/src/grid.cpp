#include "uniband/grid.hpp"

#include "uniband/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace uniband {

namespace {

constexpr double log2_const = 0.6931471805599453;

void ensure_region(double lower, double upper)
{
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw config_error("region must satisfy lower < upper with finite bounds");
  }
}

double quantile_type7(const std::vector<double>& sorted, double prob)
{
  const double idx = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(idx));
  const auto hi = static_cast<std::size_t>(std::ceil(idx));
  const double w = idx - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

} // namespace

Grid build_grid(double lower, double upper, double delta)
{
  ensure_region(lower, upper);
  const double width = upper - lower;
  if (!(delta > 0.0) || delta > width) {
    throw config_error("mesh size must lie in (0, upper - lower]");
  }

  const auto p_formula = static_cast<Eigen::Index>(std::floor(width / delta)) + 2;
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(p_formula));
  for (Eigen::Index j = 0; j + 1 < p_formula; ++j) {
    pts.push_back(lower + static_cast<double>(j) * delta);
  }
  // drop interior points that collide with (or overshoot) the right endpoint
  while (!pts.empty() && pts.back() >= upper) {
    pts.pop_back();
  }
  pts.push_back(upper);

  Grid grid;
  grid.lower = lower;
  grid.upper = upper;
  grid.delta = delta;
  grid.points = Eigen::Map<const Eigen::VectorXd>(pts.data(), static_cast<Eigen::Index>(pts.size()));
  grid.max_gap = 0.0;
  for (Eigen::Index j = 0; j + 1 < grid.points.size(); ++j) {
    grid.max_gap = std::max(grid.max_gap, grid.points[j + 1] - grid.points[j]);
  }
  return grid;
}

PluginDensityExtrema exact_extrema(double f_min, double f_max)
{
  if (!(f_min > 0.0) || !(f_max >= f_min)) {
    throw config_error("density extrema must satisfy 0 < f_min <= f_max");
  }
  return PluginDensityExtrema{ f_max, f_min, 0 };
}

PluginDensityExtrema plugin_extrema(const Eigen::Ref<const Eigen::VectorXd>& sample, double lower,
                                    double upper, int bins_override)
{
  ensure_region(lower, upper);
  const double width = upper - lower;

  std::vector<double> inside;
  inside.reserve(static_cast<std::size_t>(sample.size()));
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    if (sample[i] >= lower && sample[i] <= upper) {
      inside.push_back(sample[i]);
    }
  }
  if (inside.size() < 20) {
    throw insufficient_data_error("fewer than 20 observations inside the region");
  }

  int bins;
  if (bins_override > 0) {
    if (bins_override < 2 || bins_override > 4096) {
      throw config_error("histogram bin count must lie in [2, 4096]");
    }
    bins = bins_override;
  } else {
    std::vector<double> sorted = inside;
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_type7(sorted, 0.75) - quantile_type7(sorted, 0.25);
    const double fd_width =
      2.0 * iqr / std::cbrt(static_cast<double>(inside.size()));
    bins = fd_width > 0.0 ? static_cast<int>(std::ceil(width / fd_width)) : 256;
    bins = std::clamp(bins, 8, 256);
  }

  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  const double bin_width = width / bins;
  for (const double x : inside) {
    auto k = static_cast<long>((x - lower) / bin_width);
    k = std::clamp<long>(k, 0, bins - 1);
    ++counts[static_cast<std::size_t>(k)];
  }

  const double denom = static_cast<double>(sample.size()) * bin_width;
  double max_height = 0.0;
  double min_height = std::numeric_limits<double>::infinity();
  for (const long c : counts) {
    const double height = static_cast<double>(c) / denom;
    max_height = std::max(max_height, height);
    min_height = std::min(min_height, height);
  }

  const double floor = 0.01 / width;
  PluginDensityExtrema out;
  out.bin_count = bins;
  out.f_min_hat = std::max(min_height, floor);
  out.f_max_hat = std::max(max_height, out.f_min_hat);
  return out;
}

BernsteinConstants compute_A(const Kernel& kernel, double h, std::size_t n, double region_width,
                             double f_max_hat, double eps)
{
  if (!(eps > 0.0 && eps < 1.0)) {
    throw config_error("exceedance budget must lie in (0, 1)");
  }
  if (n < 2 || !(h > 0.0) || !(region_width > 0.0) || !(f_max_hat > 0.0)) {
    throw config_error("compute_A requires n >= 2, h > 0, width > 0, f_max > 0");
  }

  const double nn = static_cast<double>(n);
  BernsteinConstants c;
  c.m_n = static_cast<long>(std::floor(std::sqrt(nn) * std::pow(h, -1.5) * region_width)) + 2;
  const double t = std::log(2.0 * static_cast<double>(c.m_n) / eps);
  c.m0 = 2.0 * kernel.sup_k0 / h;
  c.v0 = f_max_hat * kernel.int_k2 / h;
  c.m1 = 2.0 * kernel.sup_k1 / (h * h);
  c.v1 = f_max_hat * kernel.int_k1_sq / (h * h * h);
  c.a0 = std::sqrt(2.0 * c.v0 * t / nn) + c.m0 * t / (3.0 * nn) +
         kernel.sup_k1 / (std::sqrt(nn) * std::sqrt(h));
  c.a1 = std::sqrt(2.0 * c.v1 * t / nn) + c.m1 * t / (3.0 * nn) +
         kernel.sup_k2 / (std::sqrt(nn) * std::pow(h, 1.5));
  return c;
}

double compute_Bn(const Kernel& kernel, double h, const PluginDensityExtrema& extrema)
{
  if (!(h > 0.0) || !(extrema.f_min_hat > 0.0) || !(extrema.f_max_hat >= extrema.f_min_hat)) {
    throw config_error("compute_Bn requires h > 0 and valid extrema");
  }
  const double var_min = extrema.f_min_hat * kernel.int_k2 / h;
  const double b_psi = (1.0 / log2_const) * 2.0 * kernel.sup_k0 / (h * std::sqrt(var_min));
  const double b_4 =
    std::sqrt(16.0 * extrema.f_max_hat * kernel.int_k4 / (h * h * h * var_min * var_min));
  return std::max({ b_psi, b_4, 1.0 });
}

double sigma_inv_sup_plugin(const Kernel& kernel, double h, std::size_t n,
                            const PluginDensityExtrema& extrema)
{
  return std::sqrt(static_cast<double>(n) * h / (kernel.int_k2 * extrema.f_min_hat));
}

double compute_L_tilde(const Kernel& kernel, double h, std::size_t n,
                       const PluginDensityExtrema& extrema, double a1_half_eps)
{
  if (!(a1_half_eps > 0.0)) {
    throw config_error("compute_L_tilde requires a positive derivative bound");
  }
  return 2.0 * sigma_inv_sup_plugin(kernel, h, n, extrema) * a1_half_eps;
}

double compute_r(double b_n, std::size_t n, double p)
{
  if (!(b_n >= 1.0) || n < 2 || !(p >= 1.0)) {
    throw config_error("compute_r requires b_n >= 1, n >= 2, p >= 1");
  }
  const double nn = static_cast<double>(n);
  const double lg = std::log(nn * p);
  return 2.0 * std::pow(b_n * b_n * lg * lg * lg / nn, 0.25);
}

double compute_rho(double b_n, std::size_t n, double p)
{
  const double nn = static_cast<double>(n);
  const double lg = std::log(nn * p);
  return std::pow(b_n * b_n * std::pow(lg, 5) / nn, 0.25);
}

double default_epsilon(std::size_t n, double h)
{
  if (n < 2 || !(h > 0.0)) {
    throw config_error("default_epsilon requires n >= 2 and h > 0");
  }
  const double nn = static_cast<double>(n);
  return std::min(0.1, std::pow(nn * h, -0.25) / std::log(nn));
}

double mesh_gap_excess(double delta, double l_tilde, double b_n, std::size_t n, double width)
{
  return delta * l_tilde / 2.0 - compute_r(b_n, n, width / delta);
}

MeshRoot solve_mesh_delta(double l_tilde, double b_n, std::size_t n, double width)
{
  if (!(l_tilde > 0.0) || !(width > 0.0)) {
    throw config_error("mesh solver requires positive l_tilde and width");
  }

  double hi = width;
  if (mesh_gap_excess(hi, l_tilde, b_n, n, width) <= 0.0) {
    return MeshRoot{ hi, true };
  }
  double lo = 1e-8 * width;
  const double g_lo = mesh_gap_excess(lo, l_tilde, b_n, n, width);
  if (g_lo > 0.0) {
    throw infeasible_mesh_error(l_tilde, compute_r(b_n, n, width / lo), lo);
  }

  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mesh_gap_excess(mid, l_tilde, b_n, n, width) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return MeshRoot{ lo, false };
}

ConstantsReport constants_for_grid(const Kernel& kernel, double h, std::size_t n,
                                   const PluginDensityExtrema& extrema, double eps,
                                   const Grid& grid)
{
  const double width = grid.upper - grid.lower;
  const BernsteinConstants bc = compute_A(kernel, h, n, width, extrema.f_max_hat, eps / 2.0);

  ConstantsReport rep;
  rep.epsilon = eps;
  rep.a0 = bc.a0;
  rep.a1 = bc.a1;
  rep.m_n = bc.m_n;
  rep.m0 = bc.m0;
  rep.m1 = bc.m1;
  rep.v0 = bc.v0;
  rep.v1 = bc.v1;
  rep.sigma_inv_sup = sigma_inv_sup_plugin(kernel, h, n, extrema);
  rep.l_tilde = 2.0 * rep.sigma_inv_sup * bc.a1;
  rep.l_second_term = 2.0 * std::sqrt(static_cast<double>(n) * h) * bc.a0;
  rep.b_n = compute_Bn(kernel, h, extrema);
  rep.p = static_cast<long>(grid.p());
  rep.delta = grid.delta;
  rep.max_gap = grid.max_gap;
  rep.r = compute_r(rep.b_n, n, static_cast<double>(rep.p));
  rep.rho_n = compute_rho(rep.b_n, n, static_cast<double>(rep.p));
  rep.hd_ratio = std::pow(rep.rho_n, 4);
  rep.indicator_ok = rep.l_tilde * rep.max_gap / 2.0 <= rep.r;
  rep.f_min_hat = extrema.f_min_hat;
  rep.f_max_hat = extrema.f_max_hat;
  rep.bins = extrema.bin_count;
  return rep;
}

MeshSolution solve_mesh(const Kernel& kernel, double h, std::size_t n, double lower, double upper,
                        const PluginDensityExtrema& extrema, double eps)
{
  ensure_region(lower, upper);
  const double width = upper - lower;
  const BernsteinConstants bc = compute_A(kernel, h, n, width, extrema.f_max_hat, eps / 2.0);
  const double l_tilde = compute_L_tilde(kernel, h, n, extrema, bc.a1);
  const double b_n = compute_Bn(kernel, h, extrema);

  const MeshRoot root = solve_mesh_delta(l_tilde, b_n, n, width);

  MeshSolution out;
  if (root.slack) {
    out.grid = build_grid(lower, upper, width);
    out.report = constants_for_grid(kernel, h, n, extrema, eps, out.grid);
    out.report.notes.push_back("constraint slack: the coarsest 2-point grid already satisfies "
                               "the gap condition");
    return out;
  }

  // conservative rounding to an integer point count (never coarsens)
  const auto p_hat = static_cast<long>(std::ceil(width / root.delta_tilde)) + 2;
  const double delta_hat = width / static_cast<double>(p_hat - 1);
  out.grid = build_grid(lower, upper, delta_hat);
  out.report = constants_for_grid(kernel, h, n, extrema, eps, out.grid);
  if (!out.report.indicator_ok) {
    // cannot happen: delta_hat <= delta_tilde and r grows with p
    throw numeric_error("mesh solver post-condition violated");
  }
  return out;
}

Grid simple_grid_rule(std::size_t n, double h, double lower, double upper, double c_delta,
                      double gamma)
{
  ensure_region(lower, upper);
  if (!(c_delta > 0.0 && c_delta < 1.0)) {
    throw config_error("c_delta must lie in (0, 1)");
  }
  if (!(gamma > 0.0)) {
    throw config_error("gamma must be positive");
  }
  if (n < 2 || !(h > 0.0)) {
    throw config_error("simple_grid_rule requires n >= 2 and h > 0");
  }
  const double width = upper - lower;
  double delta = c_delta * std::pow(static_cast<double>(n), -0.25 - gamma) * std::pow(h, 0.75);
  delta = std::min(delta, width);
  return build_grid(lower, upper, delta);
}

} // namespace uniband
