#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace uniband {

//! Invalid parameters, malformed input, or unsupported configuration.
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! Too few observations to run a data-driven step (e.g. histogram plug-ins).
class insufficient_data_error : public config_error {
public:
  using config_error::config_error;
};

//! A numeric routine failed to reach its tolerance (quadrature, root finding).
class numeric_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace error_detail {
inline std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
} // namespace error_detail

//! The variance estimate at some location fell below the variance floor.
class degenerate_variance_error : public std::runtime_error {
public:
  degenerate_variance_error(double location, double value)
    : std::runtime_error("degenerate variance estimate " + error_detail::num(value) +
                         " at x = " + error_detail::num(location))
    , location(location)
    , value(value)
  {
  }

  double location;
  double value;
};

//! No mesh size above the floor satisfies the gap condition; carries the
//! local-variation bound and the threshold at the floor for diagnosis.
class infeasible_mesh_error : public std::runtime_error {
public:
  infeasible_mesh_error(double l_tilde, double r_at_floor, double delta_floor)
    : std::runtime_error("infeasible mesh: L_tilde = " + error_detail::num(l_tilde) +
                         ", r(delta_floor) = " + error_detail::num(r_at_floor) +
                         " at delta_floor = " + error_detail::num(delta_floor))
    , l_tilde(l_tilde)
    , r_at_floor(r_at_floor)
    , delta_floor(delta_floor)
  {
  }

  double l_tilde;
  double r_at_floor;
  double delta_floor;
};

} // namespace uniband
