#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poremetrics/rational.hpp"
#include "poremetrics/real.hpp"

namespace poremetrics {

/// Exact value sum_i c_i * prod_p p^{e_ip} with rational c_i and radical
/// exponents e_ip in (0, 1). Closed under +, -, * and integer powers; rational
/// powers are only taken of single terms.
class PowerSum {
 public:
  using Radical = std::vector<std::pair<Integer, Rational>>;  // sorted by prime

  PowerSum() = default;
  explicit PowerSum(const Rational& r);

  /// base^exponent for base >= 0; nullopt when base cannot be factored.
  static std::optional<PowerSum> power(const Rational& base, const Rational& exponent);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::optional<Rational> as_rational() const;
  std::optional<PowerSum> pow(const Rational& exponent) const;

  Real to_real() const;
  /// e.g. "2*2^(1/2)" or "4/3".
  std::string to_string() const;

  PowerSum& operator+=(const PowerSum& other);
  PowerSum& operator-=(const PowerSum& other);
  PowerSum& operator*=(const PowerSum& other);
  friend PowerSum operator+(PowerSum a, const PowerSum& b) { return a += b; }
  friend PowerSum operator-(PowerSum a, const PowerSum& b) { return a -= b; }
  friend PowerSum operator*(PowerSum a, const PowerSum& b) { return a *= b; }
  friend bool operator==(const PowerSum& a, const PowerSum& b) { return a.terms_ == b.terms_; }

 private:
  void add_term(const Radical& radical, const Rational& coeff);
  std::map<Radical, Rational> terms_;
};

}  // namespace poremetrics
