#include "uniband/kernels.hpp"

#include "uniband/errors.hpp"
#include "uniband/optimize.hpp"
#include "uniband/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace uniband {

namespace {

constexpr double inv_sqrt_2pi = 0.3989422804014327;

double gauss0(double u) { return inv_sqrt_2pi * std::exp(-0.5 * u * u); }
double gauss1(double u) { return -u * gauss0(u); }
double gauss2(double u) { return (u * u - 1.0) * gauss0(u); }

constexpr double tri_c = 35.0 / 32.0;

double tri0(double u)
{
  if (std::abs(u) >= 1.0) return 0.0;
  const double s = 1.0 - u * u;
  return tri_c * s * s * s;
}

double tri1(double u)
{
  if (std::abs(u) >= 1.0) return 0.0;
  const double s = 1.0 - u * u;
  return -6.0 * tri_c * u * s * s;
}

double tri2(double u)
{
  if (std::abs(u) >= 1.0) return 0.0;
  const double s = 1.0 - u * u;
  return -6.0 * tri_c * s * (1.0 - 5.0 * u * u);
}

void cross_check(double computed, double analytic, const char* what)
{
  const double scale = std::max(1.0, std::abs(analytic));
  if (std::abs(computed - analytic) > 1e-9 * scale) {
    throw numeric_error(std::string("kernel constant ") + what +
                        " disagrees with its closed form");
  }
}

} // namespace

Kernel kernel_constants(KernelId id)
{
  Kernel k{};
  k.id = id;
  switch (id) {
    case KernelId::Gaussian:
      k.eval0 = gauss0;
      k.eval1 = gauss1;
      k.eval2 = gauss2;
      k.cutoff = 12.0;
      break;
    case KernelId::Triweight:
      k.eval0 = tri0;
      k.eval1 = tri1;
      k.eval2 = tri2;
      k.cutoff = 1.0;
      break;
    default:
      throw config_error("unsupported kernel id");
  }

  const double c = k.cutoff;
  const double tol = 1e-12;
  k.sup_k0 = max_abs_on_interval(k.eval0, -c, c);
  k.sup_k1 = max_abs_on_interval(k.eval1, -c, c);
  k.sup_k2 = max_abs_on_interval(k.eval2, -c, c);
  k.int_k2 = integrate([&](double u) { return k.eval0(u) * k.eval0(u); }, -c, c, tol);
  k.int_abs_u_k2 =
    integrate([&](double u) { return std::abs(u) * k.eval0(u) * k.eval0(u); }, -c, c, tol);
  k.int_k4 = integrate([&](double u) { return std::pow(k.eval0(u), 4); }, -c, c, tol);
  k.int_abs_k1 = integrate([&](double u) { return std::abs(k.eval1(u)); }, -c, c, tol);
  k.int_k1_sq = integrate([&](double u) { return k.eval1(u) * k.eval1(u); }, -c, c, tol);
  k.int_abs_k2d = integrate([&](double u) { return std::abs(k.eval2(u)); }, -c, c, tol);

  const double mass = integrate(k.eval0, -c, c, tol);
  cross_check(mass, 1.0, "unit mass");

  const double pi = std::numbers::pi;
  if (id == KernelId::Gaussian) {
    cross_check(k.sup_k0, inv_sqrt_2pi, "sup|K|");
    cross_check(k.sup_k1, gauss0(1.0), "sup|K'|");
    cross_check(k.sup_k2, inv_sqrt_2pi, "sup|K''|");
    cross_check(k.int_k2, 0.5 / std::sqrt(pi), "int K^2");
    cross_check(k.int_abs_u_k2, 0.5 / pi, "int |u|K^2");
    cross_check(k.int_k4, std::sqrt(0.5 * pi) / (4.0 * pi * pi), "int K^4");
    cross_check(k.int_abs_k1, 2.0 * inv_sqrt_2pi, "int |K'|");
    cross_check(k.int_k1_sq, 0.25 / std::sqrt(pi), "int K'^2");
    cross_check(k.int_abs_k2d, 4.0 * gauss0(1.0), "int |K''|");
  } else {
    cross_check(k.sup_k0, tri_c, "sup|K|");
    cross_check(k.sup_k2, 6.0 * tri_c, "sup|K''|");
    cross_check(k.int_k2, 350.0 / 429.0, "int K^2");
  }

  return k;
}

KernelId kernel_from_name(const std::string& name)
{
  if (name == "gaussian") return KernelId::Gaussian;
  if (name == "triweight") return KernelId::Triweight;
  throw config_error("unknown kernel \"" + name + "\" (expected gaussian or triweight)");
}

std::string kernel_name(KernelId id)
{
  switch (id) {
    case KernelId::Gaussian: return "gaussian";
    case KernelId::Triweight: return "triweight";
  }
  throw config_error("unsupported kernel id");
}

} // namespace uniband
