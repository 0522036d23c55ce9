#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <string>

#include "poremetrics/rational.hpp"

namespace poremetrics {

/// 50 significant digits; comfortably past binary128.
using Real = boost::multiprecision::cpp_bin_float_50;

Real to_real(const Rational& r);
std::string to_string(const Real& x, int digits = 25);

/// Relative slack applied when turning a computed Real into a bracket.
inline const Real& rounding_slack() {
  static const Real slack("1e-40");
  return slack;
}

inline Real widen_down(const Real& x) { return x - abs(x) * rounding_slack(); }
inline Real widen_up(const Real& x) { return x + abs(x) * rounding_slack(); }

/// Standard normal CDF via erfc.
Real normal_cdf(const Real& z);
/// Standard normal quantile z_r with Phi(z_r) = r.
Real normal_quantile(const Real& r);

/// e^{pi^2/75}, the uniform bound on E[X]E[X^-1] for c_n = 1 - 1/(2n).
Real kakeya_bound();

}  // namespace poremetrics
