#pragma once

// Gamma-ratio constants for the weighted Bergman space A^2_alpha(B^n).
// Every ratio is assembled as a sum of log-gamma terms and exponentiated once.

#include <cmath>
#include <stdexcept>
#include <string>

#include "toeplitz/multiindex.hpp"

namespace toeplitz {

// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  return std::lgamma(x);
}

// Weight parameter of dv_alpha = c_alpha (1 - |z|^2)^alpha dv on B^n.
struct WeightParam {
  double alpha = 0.0;
  int n = 1;

  WeightParam() = default;
  WeightParam(double alpha_, int n_) : alpha(alpha_), n(n_) { validate(); }

  void validate() const {
    validate_dimension(n);
    if (!(alpha > -1.0) || !std::isfinite(alpha)) {
      throw std::invalid_argument("weight alpha must be finite and > -1, got " + std::to_string(alpha));
    }
  }

  // c_alpha = Gamma(n+alpha+1) / (n! Gamma(alpha+1)), making v_alpha a probability measure.
  // Not used by the spectral formulas; those absorb it into the prefactor.
  double c_alpha() const {
    return std::exp(log_gamma(n + alpha + 1.0) - log_gamma(n + 1.0) - log_gamma(alpha + 1.0));
  }
};

namespace detail {
inline void check_dims(const MultiIndex& m, const WeightParam& w) {
  if (m.size() != w.n) {
    throw DimensionError("multi-index has " + std::to_string(m.size()) + " entries but n = " +
                         std::to_string(w.n));
  }
}
}  // namespace detail

inline double log_monomial_norm_sq(const MultiIndex& m, const WeightParam& w) {
  detail::check_dims(m, w);
  const double n = w.n;
  return m.log_factorial() + log_gamma(n + w.alpha + 1.0) - log_gamma(n + m.degree() + w.alpha + 1.0);
}

// <z^m, z^m>_alpha = m! Gamma(n+alpha+1) / Gamma(n+|m|+alpha+1)
inline double monomial_norm_sq(const MultiIndex& m, const WeightParam& w) {
  return std::exp(log_monomial_norm_sq(m, w));
}

// Coefficient of z^m in the orthonormal basis element e_m.
inline double basis_coefficient(const MultiIndex& m, const WeightParam& w) {
  return std::exp(-0.5 * log_monomial_norm_sq(m, w));
}

// ln Q(m), Q(m) = 2^n Gamma(n+|m|+alpha+1) / (m! Gamma(alpha+1)).
inline double log_spectral_prefactor(const MultiIndex& m, const WeightParam& w) {
  detail::check_dims(m, w);
  const double n = w.n;
  return n * std::log(2.0) + log_gamma(n + m.degree() + w.alpha + 1.0) - m.log_factorial() -
         log_gamma(w.alpha + 1.0);
}

// gamma_a(m) = Q(m) * int_{tau(B^n)} a(r) r^{2m} (1-|r|^2)^alpha prod r_k dr_k equals <a e_m, e_m>.
inline double spectral_prefactor(const MultiIndex& m, const WeightParam& w) {
  return std::exp(log_spectral_prefactor(m, w));
}

}  // namespace toeplitz
