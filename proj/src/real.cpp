#include "poremetrics/real.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <sstream>

namespace poremetrics {

Real to_real(const Rational& r) {
  return Real(r.get_num().get_str(10)) / Real(r.get_den().get_str(10));
}

std::string to_string(const Real& x, int digits) {
  std::ostringstream out;
  out.precision(digits);
  out << x;
  return out.str();
}

Real normal_cdf(const Real& z) {
  return boost::math::erfc(-z / boost::math::constants::root_two<Real>()) / 2;
}

Real normal_quantile(const Real& r) {
  return -boost::math::constants::root_two<Real>() * boost::math::erfc_inv(2 * r);
}

Real kakeya_bound() {
  const Real pi = boost::math::constants::pi<Real>();
  return exp(pi * pi / 75);
}

}  // namespace poremetrics
