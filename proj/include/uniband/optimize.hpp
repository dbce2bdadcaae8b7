#pragma once

#include <cmath>

namespace uniband {

//! Maximum of |f| over [a, b]: coarse scan followed by golden-section
//! refinement in the cell around the best scan point.
template <class F>
inline double max_abs_on_interval(F&& f, double a, double b, int scan_points = 4001)
{
  const double step = (b - a) / (scan_points - 1);
  double best_x = a;
  double best = std::abs(f(a));
  for (int i = 1; i < scan_points; ++i) {
    const double x = (i == scan_points - 1) ? b : a + i * step;
    const double v = std::abs(f(x));
    if (v > best) {
      best = v;
      best_x = x;
    }
  }

  double lo = best_x - step;
  double hi = best_x + step;
  if (lo < a) lo = a;
  if (hi > b) hi = b;

  constexpr double invphi = 0.6180339887498949;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = std::abs(f(x1));
  double f2 = std::abs(f(x2));
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * (1.0 + std::abs(lo)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = std::abs(f(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = std::abs(f(x1));
    }
  }
  const double refined = std::max(f1, f2);
  return refined > best ? refined : best;
}

} // namespace uniband
