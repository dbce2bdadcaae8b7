#pragma once

// Test-only oracles, intentionally independent of the library's numeric
// paths: adaptive Simpson instead of Gauss-Kronrod, plain double loops
// instead of Eigen reductions, and one-line formula transcriptions.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace oracle {

template <class F>
double simpson_panel(const F& f, double a, double b)
{
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

template <class F>
double simpson_rec(const F& f, double a, double b, double whole, double tol, int depth)
{
  const double m = 0.5 * (a + b);
  const double left = simpson_panel(f, a, m);
  const double right = simpson_panel(f, m, b);
  if (std::abs(left + right - whole) <= 15.0 * tol || depth <= 0) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, m, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, right, 0.5 * tol, depth - 1);
}

//! Adaptive Simpson quadrature (independent of the library integrator).
template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-10)
{
  const int pieces = 16;
  const double step = (b - a) / pieces;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * step;
    const double hi = (i == pieces - 1) ? b : lo + step;
    total += simpson_rec(f, lo, hi, simpson_panel(f, lo, hi), tol / pieces, 40);
  }
  return total;
}

//! Maximum of |f| on [a, b] by dense scan (no refinement).
template <class F>
double scan_max_abs(const F& f, double a, double b, int points = 2000001)
{
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / (points - 1);
    best = std::max(best, std::abs(f(x)));
  }
  return best;
}

//! KDE by a plain double loop.
inline double kde_brute(const Eigen::VectorXd& sample, double (*k)(double), double h, double x)
{
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    sum += k((sample[i] - x) / h) / h;
  }
  return sum / static_cast<double>(sample.size());
}

//! Variance estimator by a plain double loop.
inline double variance_brute(const Eigen::VectorXd& sample, double (*k)(double), double h,
                             double x)
{
  const double n = static_cast<double>(sample.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    const double v = k((sample[i] - x) / h) / h;
    sum += v;
    sum_sq += v * v;
  }
  return (sum_sq / n - (sum / n) * (sum / n)) / n;
}

// one-line transcriptions of the grid-design formulas

inline double r_formula(double b_n, double n, double p)
{
  return 2.0 * std::pow(b_n * b_n * std::pow(std::log(n * p), 3) / n, 0.25);
}

inline double rho_formula(double b_n, double n, double p)
{
  return std::pow(b_n * b_n * std::pow(std::log(n * p), 5) / n, 0.25);
}

inline long m_n_formula(double n, double h, double width)
{
  return static_cast<long>(std::floor(std::sqrt(n) * width / std::pow(h, 1.5))) + 2;
}

inline double a0_formula(double n, double h, double width, double f_max, double sup_k0,
                         double sup_k1, double int_k2, double eps)
{
  const double m = static_cast<double>(m_n_formula(n, h, width));
  const double t = std::log(2.0 * m / eps);
  return std::sqrt(2.0 * (f_max * int_k2 / h) * t / n) + (2.0 * sup_k0 / h) * t / (3.0 * n) +
         sup_k1 / std::sqrt(n * h);
}

inline double a1_formula(double n, double h, double width, double f_max, double sup_k1,
                         double sup_k2, double int_k1_sq, double eps)
{
  const double m = static_cast<double>(m_n_formula(n, h, width));
  const double t = std::log(2.0 * m / eps);
  return std::sqrt(2.0 * (f_max * int_k1_sq / (h * h * h)) * t / n) +
         (2.0 * sup_k1 / (h * h)) * t / (3.0 * n) + sup_k2 / (std::sqrt(n) * std::pow(h, 1.5));
}

inline double bn_formula(double h, double f_min, double f_max, double sup_k0, double int_k2,
                         double int_k4)
{
  const double var_min = f_min * int_k2 / h;
  const double b_psi = 2.0 * sup_k0 / (std::log(2.0) * h * std::sqrt(var_min));
  const double b_4 = std::sqrt(16.0 * f_max * int_k4 / (std::pow(h, 3) * var_min * var_min));
  return std::max(std::max(b_psi, b_4), 1.0);
}

inline double l_tilde_formula(double n, double h, double f_min, double int_k2, double a1)
{
  return 2.0 * std::sqrt(n * h / (int_k2 * f_min)) * a1;
}

inline double simple_delta_formula(double n, double h, double c_delta, double gamma)
{
  return c_delta * std::pow(n, -0.25 - gamma) * std::pow(h, 0.75);
}

inline double epsilon_formula(double n, double h)
{
  return std::min(0.1, std::pow(n * h, -0.25) / std::log(n));
}

//! Standard normal CDF via erfc (library-independent).
inline double normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

} // namespace oracle
