#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poremetrics/cube.hpp"
#include "poremetrics/pores.hpp"
#include "poremetrics/power_sum.hpp"
#include "poremetrics/rational.hpp"
#include "poremetrics/real.hpp"
#include "poremetrics/set_models.hpp"

namespace poremetrics {

/// Bracket [lo, hi] of a mean value or product. `exact` means closed form: lo and hi
/// then differ only by final rounding (not at all when the value is rational), and
/// `symbolic` holds the value when it could be kept symbolically.
struct MeanValue {
  Real lo;
  Real hi;
  bool exact = false;
  bool divergent = false;  // hi = +inf; lo is a truncated lower bound
  std::optional<PowerSum> symbolic;

  std::optional<Rational> rational() const;
  std::string describe() const;
};

/// Antiderivative of u^theta between u0 and u1 (0 <= u0 <= u1), symbolic when possible.
struct PieceIntegral {
  Real value;
  Real error;  // absolute rounding bound
  std::optional<PowerSum> symbolic;
};

/// Integral of dist(x,E)^theta over a component clipped to the window [lo, hi],
/// with dist = min(x - e_left, e_right - x) inside the component.
PieceIntegral component_integral(const Component& c, const Rational& theta);

/// 1-D closed form of the mean of dist^theta over q0; n-D comparability bracket.
MeanValue mean_dist_power(const SetOracle& e, const Cube& q0, const Rational& theta, unsigned max_gen,
                          const EnumerateOptions& options = {});

struct ComparabilityConstants {
  Real c1;
  Real c2;
};

/// Constants with C1 sum l(Q)^theta |Q|/|Q0| <= mean <= C2 sum, for theta > -1.
ComparabilityConstants comparability_constants(std::size_t n, const Rational& theta);

/// sum_{Q in D_E(Q0)} l(Q)^theta |Q| / |Q0| over the enumerated pores, with a tail bracket.
MeanValue dyadic_sum(const PoreFamily& pf, const Rational& theta);

enum class CaseTag { I, II, III };
std::string to_string(CaseTag c);

/// Case I: dist(Q0, E) >= 2 diam(Q0). Case II: Q0 misses E otherwise. Case III: Q0 meets E.
CaseTag classify(const SetOracle& e, const Cube& q0);

struct ApResult {
  MeanValue product;
  CaseTag case_tag = CaseTag::III;
  MeanValue weight_mean;  // mean of dist^-alpha
  MeanValue dual_mean;    // mean of dist^{alpha/(p-1)}
};

/// (mean dist^-alpha) * (mean dist^{alpha/(p-1)})^{p-1}; p > 1.
ApResult ap_product(const SetOracle& e, const Cube& q0, const Rational& alpha, const Rational& p, unsigned max_gen,
                    const EnumerateOptions& options = {});

/// (mean dist^-alpha) / ess-inf dist^-alpha; alpha > 0.
MeanValue a1_quotient(const SetOracle& e, const Cube& q0, const Rational& alpha, unsigned max_gen,
                      const EnumerateOptions& options = {});

/// theta unchanged for q >= p, theta (q-1)/(p-1) for q < p; p, q > 1.
Rational exponent_transfer(const Rational& theta, const Rational& p, const Rational& q);
/// theta (1 - p') with 1/p + 1/p' = 1; p > 1.
Rational duality_exponent(const Rational& theta, const Rational& p);

}  // namespace poremetrics
