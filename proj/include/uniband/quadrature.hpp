#pragma once

#include "uniband/errors.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

namespace uniband {

//! Adaptive Gauss–Kronrod (G7, K15) integration on a finite interval.
//!
//! Panels are bisected until the local |K15 - G7| discrepancy fits inside the
//! tolerance budget pro-rated by panel length. Throws numeric_error if the
//! panel budget or recursion depth is exhausted before convergence.
namespace quadrature_detail {

// positive K15 abscissae; even indices are also G7 abscissae
inline constexpr double kron_x[8] = {
  0.0000000000000000, 0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
  0.7415311855993945, 0.8648644233597691, 0.9491079123427585, 0.9914553711208126,
};
inline constexpr double kron_w[8] = {
  0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
  0.1406532597155259, 0.1047900103222502, 0.0630920926299786, 0.0229353220105292,
};
inline constexpr double gauss_w[4] = {
  0.4179591836734694, 0.3818300505051189, 0.2797053914892767, 0.1294849661688697,
};

template <class F>
inline void gk15(const F& f, double a, double b, double& k15, double& err)
{
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f0 = f(mid);
  double kron = kron_w[0] * f0;
  double gauss = gauss_w[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kron_x[i];
    const double fi = f(mid + dx) + f(mid - dx);
    kron += kron_w[i] * fi;
    if (i % 2 == 0) {
      gauss += gauss_w[i / 2] * fi;
    }
  }
  k15 = kron * half;
  err = std::abs((kron - gauss) * half);
}

template <class F>
inline double integrate_rec(const F& f, double a, double b, double tol, int depth,
                            std::size_t& panels)
{
  double value = 0.0;
  double err = 0.0;
  gk15(f, a, b, value, err);
  if (err <= tol || !(std::isfinite(value))) {
    if (!std::isfinite(value)) {
      throw numeric_error("quadrature: non-finite integrand value");
    }
    return value;
  }
  if (depth <= 0 || ++panels > 200000) {
    throw numeric_error("quadrature: failed to converge");
  }
  const double mid = 0.5 * (a + b);
  return integrate_rec(f, a, mid, 0.5 * tol, depth - 1, panels) +
         integrate_rec(f, mid, b, 0.5 * tol, depth - 1, panels);
}

} // namespace quadrature_detail

//! Integral of f over [a, b] to absolute tolerance abs_tol.
template <class F>
inline double integrate(F&& f, double a, double b, double abs_tol = 1e-10)
{
  if (!(a < b)) {
    return a == b ? 0.0 : -integrate(std::forward<F>(f), b, a, abs_tol);
  }
  // seed with a handful of panels so narrow features are not missed
  const int seed_panels = 8;
  const double step = (b - a) / seed_panels;
  double total = 0.0;
  std::size_t panels = 0;
  for (int i = 0; i < seed_panels; ++i) {
    const double lo = a + i * step;
    const double hi = (i == seed_panels - 1) ? b : lo + step;
    total += quadrature_detail::integrate_rec(f, lo, hi, abs_tol / seed_panels, 48, panels);
  }
  return total;
}

} // namespace uniband
