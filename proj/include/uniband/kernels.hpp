#pragma once

#include <string>

namespace uniband {

//! Shipped kernels. Both are twice continuously differentiable on the whole
//! line, which rules out Epanechnikov/biweight (their derivatives jump at the
//! support edge).
enum class KernelId {
  Gaussian,
  Triweight,
};

//! A kernel together with the scalar constants the band machinery consumes.
//!
//! Constants are computed once at construction by adaptive quadrature (and a
//! scan + golden-section search for the suprema), then cross-checked against
//! closed forms where those exist. The quadrature path is the reusable oracle
//! for any future kernel.
struct Kernel {
  KernelId id;

  double (*eval0)(double); //!< K(u)
  double (*eval1)(double); //!< K'(u)
  double (*eval2)(double); //!< K''(u)

  //! Evaluation/integration truncation radius: 1 for the compactly supported
  //! triweight, 12 for the Gaussian (tail mass below 1e-30).
  double cutoff;

  double sup_k0; //!< sup |K|
  double sup_k1; //!< sup |K'|
  double sup_k2; //!< sup |K''|

  double int_k2;       //!< ∫ K²
  double int_abs_u_k2; //!< ∫ |u| K²
  double int_k4;       //!< ∫ K⁴
  double int_abs_k1;   //!< ∫ |K'|
  double int_k1_sq;    //!< ∫ (K')²
  double int_abs_k2d;  //!< ∫ |K''|
};

//! Builds the fully populated constant table for a supported kernel.
//! Throws config_error for an unsupported id and numeric_error if the
//! quadrature values disagree with the analytic cross-checks.
Kernel kernel_constants(KernelId id);

//! "gaussian" | "triweight" (case-sensitive); throws config_error otherwise.
KernelId kernel_from_name(const std::string& name);
std::string kernel_name(KernelId id);

} // namespace uniband
