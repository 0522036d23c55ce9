#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poremetrics/pores.hpp"
#include "poremetrics/rational.hpp"
#include "poremetrics/real.hpp"
#include "poremetrics/set_models.hpp"

namespace poremetrics {

/// Explicit laws with distinct contractions are capped here (support grows like 2^n).
inline constexpr unsigned kMaxExplicitLawLevel = 22;

/// Law of the component length X under normalized Lebesgue measure on Q_level.
struct LengthDistribution {
  ContractionSequence sequence = ContractionSequence::constant(1);
  unsigned level = 0;
  std::map<Rational, Rational> masses;  // length -> probability

  Rational total() const;
};

/// Two-branch recursion: keep each length with weight 2/(2+c), contract by c with weight c/(2+c).
LengthDistribution length_law(const ContractionSequence& seq, unsigned level);

/// Histogram of component lengths of the generated set over its envelope, normalized.
LengthDistribution component_law(const ContractionSequence& seq, unsigned level);

struct Moment {
  std::optional<Rational> exact;
  Real value;
};

/// E[X^theta] summed over the law.
Moment moment(const LengthDistribution& law, const Rational& theta);
/// prod_i (2 + c_i^{1+theta}) / (2 + c_i).
Moment moment_recursion(const ContractionSequence& seq, unsigned level, const Rational& theta);

/// E[X] E[X^-1] from the theta = 1 and theta = -1 recursions.
Rational kakeya_product(const ContractionSequence& seq, unsigned level);

struct MarkovBounds {
  Rational upper_for_tilde_L;  // k E[X]
  Rational lower_for_tilde_S;  // k' / E[X^-1]
  Rational ratio_bound;        // (k/k') E[X] E[X^-1]
};

/// Requires k > 1/s and 0 < k' < s.
MarkovBounds markov_bounds(const Rational& ex, const Rational& ex_inv, const Rational& s, const Rational& k,
                           const Rational& k_prime);
MarkovBounds markov_bounds(const LengthDistribution& law, const Rational& s, const Rational& k, const Rational& k_prime);

/// max{L : P(X >= L) >= t} and min{L : P(X <= L) >= t} over an explicit law.
Rational tilde_length(const LengthDistribution& law, const Rational& t, Side side);

/// X as a product of independent factors (c_i with probability c_i/(2+c_i), else 1).
/// Tilde quantiles are found by a meet-in-the-middle search, so levels far beyond
/// the explicit law stay exact.
class FactoredLaw {
 public:
  FactoredLaw(const ContractionSequence& seq, unsigned level);

  unsigned level() const { return level_; }
  Rational prob_at_least(const Rational& length) const;
  Rational prob_at_most(const Rational& length) const;
  Rational tilde_length(const Rational& t, Side side) const;

 private:
  struct Atom {
    Rational value;
    long double log_value;
    Integer weight;  // numerator over the half's denominator
  };
  struct Half {
    std::vector<Atom> atoms;  // ascending value
    Integer denominator;
  };
  static Half build(const std::vector<Rational>& cs);

  // Exact count (over denominator_) of mass with X >= L, or X <= L.
  Integer mass_ge(const Rational& length, long double log_length) const;
  Integer mass_le(const Rational& length, long double log_length) const;
  bool threshold_met(const Rational& length, const Rational& t, Side side) const;

  unsigned level_ = 0;
  Half a_;
  Half b_;
  Integer denominator_;
};

struct BinomialCheck {
  bool ok = false;
  Rational max_deviation;
};

/// Mass at 2^-k against C(n,k) (1/5)^k (4/5)^(n-k); the law must come from c = 1/2.
BinomialCheck binomial_check(const LengthDistribution& law);

/// Exact CDF of Bin(n, q) at k = 0..n.
std::vector<Rational> binomial_cdf(unsigned n, const Rational& q);

/// sup_x |P(Y <= x) - Phi((x - nq)/sqrt(nq(1-q)))|, attained at a jump.
Real normal_gap(unsigned n, const Rational& q = Rational(1, 5));

struct GapFit {
  Real constant;  // max gap(n) sqrt(n)
  unsigned argmax = 0;
};
GapFit fit_gap_constant(unsigned max_n, const Rational& q = Rational(1, 5));

struct DivergenceRow {
  unsigned level = 0;
  long k_min = 0;  // min{k : P(Y <= k) >= 4t}
  long k_max = 0;  // max{k : P(Y >= k) >= t}
  Rational tilde_ratio;  // 2^(k_max - k_min)
  Rational dyadic_lo;   // tilde_ratio / 4
  Rational dyadic_hi;   // L~(t) / (C S~(t/2))
  Real predicted_spread;  // sd (z_{1-xi1} - z_{xi2})
};

struct DivergenceOptions {
  std::optional<Rational> xi1;  // default 2t
  std::optional<Rational> xi2;  // default 2t + 1/4
};

/// Requires 0 < t < 1/8 and t < xi1 < 4t < xi2 < 1/2.
std::vector<DivergenceRow> divergence_scan(const Rational& t, unsigned first_level, unsigned last_level,
                                           const DivergenceOptions& options = {});

/// C(t, t') = 2^-k with k minimal such that t' + 2^-(k-2) < t.
Rational small_length_constant(const Rational& t, const Rational& t_prime);

}  // namespace poremetrics
