#include "poremetrics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "poremetrics/error.hpp"

namespace poremetrics {

namespace {

long double log_integer(const Integer& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp) * std::log(2.0L);
}

long double log_rational(const Rational& r) { return log_integer(r.get_num()) - log_integer(r.get_den()); }

Rational rational_power(const Rational& base, long k) {
  const Rational p = ipow(base, static_cast<unsigned>(k < 0 ? -k : k));
  return k < 0 ? Rational(1 / p) : p;
}

std::vector<Rational> contractions(const ContractionSequence& seq, unsigned level) {
  std::vector<Rational> cs;
  cs.reserve(level);
  for (unsigned i = 1; i <= level; ++i) cs.push_back(seq.at(i));
  return cs;
}

constexpr long double kLogTie = 1e-12L;

}  // namespace

Rational LengthDistribution::total() const {
  Rational t(0);
  for (const auto& [len, m] : masses) t += m;
  return t;
}

LengthDistribution length_law(const ContractionSequence& seq, unsigned level) {
  if (seq.rule() == ContractionSequence::Rule::HalfHarmonic && level > kMaxExplicitLawLevel) {
    throw PreconditionError("explicit law above level " + std::to_string(kMaxExplicitLawLevel) +
                            "; use the factored law");
  }
  LengthDistribution law;
  law.sequence = seq;
  law.level = level;
  law.masses[Rational(1)] = 1;
  for (unsigned i = 1; i <= level; ++i) {
    const Rational c = seq.at(i);
    const Rational keep = 2 / (2 + c);
    const Rational contract = c / (2 + c);
    std::map<Rational, Rational> next;
    for (const auto& [len, m] : law.masses) {
      next[len] += keep * m;
      next[c * len] += contract * m;
    }
    law.masses = std::move(next);
  }
  return law;
}

LengthDistribution component_law(const ContractionSequence& seq, unsigned level) {
  const GeneratedSet g = generate(seq, level);
  const Rational total = g.envelope_hi - g.envelope_lo;
  LengthDistribution law;
  law.sequence = seq;
  law.level = level;
  for (std::size_t i = 1; i < g.points.size(); ++i) {
    const Rational len = g.points[i] - g.points[i - 1];
    law.masses[len] += len / total;
  }
  return law;
}

Moment moment(const LengthDistribution& law, const Rational& theta) {
  Moment m;
  if (theta.get_den() == 1) {
    const long k = theta.get_num().get_si();
    Rational sum(0);
    for (const auto& [len, p] : law.masses) sum += p * rational_power(len, k);
    m.exact = sum;
    m.value = to_real(sum);
    return m;
  }
  const Real th = to_real(theta);
  Real sum = 0;
  for (const auto& [len, p] : law.masses) sum += to_real(p) * pow(to_real(len), th);
  m.value = sum;
  return m;
}

Moment moment_recursion(const ContractionSequence& seq, unsigned level, const Rational& theta) {
  Moment m;
  const Rational a = theta + 1;
  if (a.get_den() == 1) {
    const long k = a.get_num().get_si();
    Rational prod(1);
    for (unsigned i = 1; i <= level; ++i) {
      const Rational c = seq.at(i);
      prod *= (2 + rational_power(c, k)) / (2 + c);
    }
    m.exact = prod;
    m.value = to_real(prod);
    return m;
  }
  const Real ar = to_real(a);
  Real prod = 1;
  for (unsigned i = 1; i <= level; ++i) {
    const Rational c = seq.at(i);
    prod *= (2 + pow(to_real(c), ar)) / to_real(Rational(2 + c));
  }
  m.value = prod;
  return m;
}

Rational kakeya_product(const ContractionSequence& seq, unsigned level) {
  return *moment_recursion(seq, level, 1).exact * *moment_recursion(seq, level, -1).exact;
}

MarkovBounds markov_bounds(const Rational& ex, const Rational& ex_inv, const Rational& s, const Rational& k,
                           const Rational& k_prime) {
  if (s <= 0 || s >= 1) throw PreconditionError("s must lie in (0, 1)");
  if (k * s <= 1) throw PreconditionError("k must exceed 1/s");
  if (k_prime <= 0 || k_prime >= s) throw PreconditionError("k' must lie in (0, s)");
  return MarkovBounds{k * ex, k_prime / ex_inv, k / k_prime * ex * ex_inv};
}

MarkovBounds markov_bounds(const LengthDistribution& law, const Rational& s, const Rational& k,
                           const Rational& k_prime) {
  return markov_bounds(*moment(law, 1).exact, *moment(law, -1).exact, s, k, k_prime);
}

Rational tilde_length(const LengthDistribution& law, const Rational& t, Side side) {
  if (t <= 0 || t >= 1) throw PreconditionError("fraction t must lie in (0, 1)");
  Rational cum(0);
  if (side == Side::Largest) {
    for (auto it = law.masses.rbegin(); it != law.masses.rend(); ++it) {
      cum += it->second;
      if (cum >= t) return it->first;
    }
  } else {
    for (const auto& [len, m] : law.masses) {
      cum += m;
      if (cum >= t) return len;
    }
  }
  throw PreconditionError("law has total mass below t");
}

// ---------------------------------------------------------------------------

FactoredLaw::Half FactoredLaw::build(const std::vector<Rational>& cs) {
  std::vector<std::pair<Rational, Integer>> atoms{{Rational(1), Integer(1)}};
  Integer denominator = 1;
  for (const auto& c : cs) {
    const Integer a = c.get_num();
    const Integer b = c.get_den();
    std::vector<std::pair<Rational, Integer>> next;
    next.reserve(atoms.size() * 2);
    for (const auto& [v, w] : atoms) {
      next.emplace_back(v, w * 2 * b);
      next.emplace_back(v * c, w * a);
    }
    std::sort(next.begin(), next.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    atoms.clear();
    for (auto& [v, w] : next) {
      if (!atoms.empty() && atoms.back().first == v) {
        atoms.back().second += w;
      } else {
        atoms.emplace_back(std::move(v), std::move(w));
      }
    }
    denominator *= 2 * b + a;
  }
  Half h;
  h.denominator = denominator;
  h.atoms.reserve(atoms.size());
  for (auto& [v, w] : atoms) h.atoms.push_back(Atom{v, log_rational(v), std::move(w)});
  return h;
}

FactoredLaw::FactoredLaw(const ContractionSequence& seq, unsigned level) : level_(level) {
  const auto cs = contractions(seq, level);
  const std::size_t mid = cs.size() / 2;
  a_ = build({cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(mid)});
  b_ = build({cs.begin() + static_cast<std::ptrdiff_t>(mid), cs.end()});
  denominator_ = a_.denominator * b_.denominator;
}

namespace {

// Sign of a*b - L using logs, falling back to exact arithmetic near ties.
int compare_product(const Rational& a, long double la, const Rational& b, long double lb, const Rational& l,
                    long double ll) {
  const long double d = la + lb - ll;
  if (d > kLogTie) return 1;
  if (d < -kLogTie) return -1;
  const Rational p = a * b;
  return p < l ? -1 : (p > l ? 1 : 0);
}

}  // namespace

Integer FactoredLaw::mass_ge(const Rational& length, long double log_length) const {
  // Suffix sums of B weights; as a grows the admissible b range [j, end) widens.
  const auto& bs = b_.atoms;
  std::vector<Integer> suffix(bs.size() + 1, 0);
  for (std::size_t i = bs.size(); i-- > 0;) suffix[i] = suffix[i + 1] + bs[i].weight;
  Integer total = 0;
  std::size_t j = bs.size();
  for (const auto& a : a_.atoms) {
    while (j > 0 && compare_product(a.value, a.log_value, bs[j - 1].value, bs[j - 1].log_value, length, log_length) >= 0) --j;
    total += a.weight * suffix[j];
  }
  return total;
}

Integer FactoredLaw::mass_le(const Rational& length, long double log_length) const {
  const auto& bs = b_.atoms;
  std::vector<Integer> prefix(bs.size() + 1, 0);
  for (std::size_t i = 0; i < bs.size(); ++i) prefix[i + 1] = prefix[i] + bs[i].weight;
  Integer total = 0;
  std::size_t j = bs.size();
  for (const auto& a : a_.atoms) {
    while (j > 0 && compare_product(a.value, a.log_value, bs[j - 1].value, bs[j - 1].log_value, length, log_length) > 0) --j;
    total += a.weight * prefix[j];
  }
  return total;
}

Rational FactoredLaw::prob_at_least(const Rational& length) const {
  return Rational(mass_ge(length, log_rational(length))) / Rational(denominator_);
}

Rational FactoredLaw::prob_at_most(const Rational& length) const {
  return Rational(mass_le(length, log_rational(length))) / Rational(denominator_);
}

bool FactoredLaw::threshold_met(const Rational& length, const Rational& t, Side side) const {
  const long double ll = log_rational(length);
  const Integer mass = side == Side::Largest ? mass_ge(length, ll) : mass_le(length, ll);
  return mass * t.get_den() >= t.get_num() * denominator_;
}

Rational FactoredLaw::tilde_length(const Rational& t, Side side) const {
  if (t <= 0 || t >= 1) throw PreconditionError("fraction t must lie in (0, 1)");
  const auto& as = a_.atoms;
  const auto& bs = b_.atoms;
  // Candidate products strictly between `low` and `high`, tracked as index ranges per a.
  // Largest: the predicate holds below the answer (low = best known). Smallest: above it.
  Rational low = as.front().value * bs.front().value;
  Rational high = as.back().value * bs.back().value;
  bool have_low = side == Side::Largest;
  bool have_high = side == Side::Smallest;
  std::vector<std::size_t> lo(as.size(), 0);
  std::vector<std::size_t> hi(as.size(), bs.size());
  std::mt19937_64 rng(0x5eed);

  auto refresh = [&] {
    const long double llow = log_rational(low);
    const long double lhigh = log_rational(high);
    std::size_t p = bs.size();
    std::size_t q = bs.size();
    for (std::size_t i = 0; i < as.size(); ++i) {
      const auto& a = as[i];
      if (have_low) {
        while (p > 0 && compare_product(a.value, a.log_value, bs[p - 1].value, bs[p - 1].log_value, low, llow) > 0) --p;
        lo[i] = p;
      } else {
        lo[i] = 0;
      }
      if (have_high) {
        while (q > 0 && compare_product(a.value, a.log_value, bs[q - 1].value, bs[q - 1].log_value, high, lhigh) >= 0) --q;
        hi[i] = q;
      } else {
        hi[i] = bs.size();
      }
    }
  };
  refresh();
  for (;;) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < as.size(); ++i) count += hi[i] > lo[i] ? hi[i] - lo[i] : 0;
    if (count == 0) break;
    std::uint64_t pick = rng() % count;
    Rational pivot;
    for (std::size_t i = 0; i < as.size(); ++i) {
      const std::uint64_t n = hi[i] > lo[i] ? hi[i] - lo[i] : 0;
      if (pick < n) {
        pivot = as[i].value * bs[lo[i] + pick].value;
        break;
      }
      pick -= n;
    }
    const bool met = threshold_met(pivot, t, side);
    if (side == Side::Largest) {
      if (met) {
        low = pivot;
      } else {
        high = pivot;
        have_high = true;
      }
    } else {
      if (met) {
        high = pivot;
      } else {
        low = pivot;
        have_low = true;
      }
    }
    refresh();
  }
  return side == Side::Largest ? low : high;
}

// ---------------------------------------------------------------------------

std::vector<Rational> binomial_cdf(unsigned n, const Rational& q) {
  if (q <= 0 || q >= 1) throw PreconditionError("q must lie in (0, 1)");
  std::vector<Rational> cdf(n + 1);
  Rational cum(0);
  const Rational r = 1 - q;
  for (unsigned k = 0; k <= n; ++k) {
    Integer binom;
    mpz_bin_uiui(binom.get_mpz_t(), n, k);
    cum += Rational(binom) * ipow(q, k) * ipow(r, n - k);
    cdf[k] = cum;
  }
  return cdf;
}

BinomialCheck binomial_check(const LengthDistribution& law) {
  const auto& seq = law.sequence;
  if (seq.rule() != ContractionSequence::Rule::Constant || seq.constant_value() != Rational(1, 2)) {
    throw PreconditionError("binomial check needs the constant 1/2 sequence");
  }
  const unsigned n = law.level;
  BinomialCheck out;
  out.max_deviation = 0;
  std::map<Rational, Rational> expected;
  for (unsigned k = 0; k <= n; ++k) {
    Integer binom;
    mpz_bin_uiui(binom.get_mpz_t(), n, k);
    expected[pow2(-static_cast<int>(k))] = Rational(binom) * ipow(Rational(1, 5), k) * ipow(Rational(4, 5), n - k);
  }
  for (const auto& [len, m] : law.masses) {
    auto it = expected.find(len);
    const Rational want = it == expected.end() ? Rational(0) : it->second;
    out.max_deviation = std::max(out.max_deviation, abs(Rational(m - want)));
  }
  for (const auto& [len, m] : expected) {
    if (!law.masses.count(len)) out.max_deviation = std::max(out.max_deviation, m);
  }
  out.ok = out.max_deviation == 0;
  return out;
}

Real normal_gap(unsigned n, const Rational& q) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  const auto cdf = binomial_cdf(n, q);
  const Real mean = to_real(Rational(q * n));
  const Real sd = sqrt(to_real(Rational(q * n * (1 - q))));
  std::vector<double> f(n + 1);
  std::vector<double> phi(n + 1);
  std::vector<double> local(n + 1);
  const double mean_d = static_cast<double>(mean);
  const double sd_d = static_cast<double>(sd);
  double best = 0;
  for (unsigned k = 0; k <= n; ++k) {
    f[k] = cdf[k].get_d();
    phi[k] = 0.5 * std::erfc(-(k - mean_d) / sd_d / std::sqrt(2.0));
    local[k] = std::max(std::abs(f[k] - phi[k]), std::abs((k == 0 ? 0.0 : f[k - 1]) - phi[k]));
    best = std::max(best, local[k]);
  }
  // Screen in double precision, then redo the near-maximal jumps at full precision.
  Real gap = 0;
  for (unsigned k = 0; k <= n; ++k) {
    if (local[k] < best - 1e-9) continue;
    const Real p = normal_cdf((Real(k) - mean) / sd);
    const Real previous = k == 0 ? Real(0) : to_real(cdf[k - 1]);
    gap = std::max(gap, Real(abs(to_real(cdf[k]) - p)));
    gap = std::max(gap, Real(abs(previous - p)));
  }
  return gap;
}

GapFit fit_gap_constant(unsigned max_n, const Rational& q) {
  GapFit fit;
  fit.constant = 0;
  for (unsigned n = 1; n <= max_n; ++n) {
    const Real v = normal_gap(n, q) * sqrt(Real(n));
    if (v > fit.constant) {
      fit.constant = v;
      fit.argmax = n;
    }
  }
  return fit;
}

Rational small_length_constant(const Rational& t, const Rational& t_prime) {
  if (t_prime <= 0 || t_prime >= t) throw PreconditionError("need 0 < t' < t");
  int k = 0;
  while (!(t_prime + pow2(-(k - 2)) < t)) ++k;
  return pow2(-k);
}

std::vector<DivergenceRow> divergence_scan(const Rational& t, unsigned first_level, unsigned last_level,
                                           const DivergenceOptions& options) {
  if (t <= 0 || t >= Rational(1, 8)) throw PreconditionError("t must lie in (0, 1/8)");
  const Rational xi1 = options.xi1.value_or(2 * t);
  const Rational xi2 = options.xi2.value_or(2 * t + Rational(1, 4));
  if (!(t < xi1 && xi1 < 4 * t && 4 * t < xi2 && xi2 < Rational(1, 2))) {
    throw PreconditionError("need t < xi1 < 4t < xi2 < 1/2");
  }
  if (first_level > last_level) throw PreconditionError("empty level range");
  const Rational q(1, 5);
  const Rational c = small_length_constant(t, t / 2);
  const Real spread = normal_quantile(to_real(Rational(1 - xi1))) - normal_quantile(to_real(xi2));
  std::vector<DivergenceRow> rows;
  for (unsigned n = first_level; n <= last_level; ++n) {
    std::vector<Rational> cdf = n == 0 ? std::vector<Rational>{Rational(1)} : binomial_cdf(n, q);
    auto first_at_least = [&](const Rational& level) {
      for (unsigned k = 0; k <= n; ++k) {
        if (cdf[k] >= level) return static_cast<long>(k);
      }
      return static_cast<long>(n);
    };
    // P(Y >= k) = 1 - F(k-1)
    auto last_upper = [&](const Rational& level) {
      for (long k = n; k >= 0; --k) {
        const Rational upper = 1 - (k == 0 ? Rational(0) : cdf[static_cast<std::size_t>(k - 1)]);
        if (upper >= level) return k;
      }
      return 0L;
    };
    DivergenceRow row;
    row.level = n;
    row.k_min = first_at_least(4 * t);
    row.k_max = last_upper(t);
    const int diff = static_cast<int>(row.k_max - row.k_min);
    row.tilde_ratio = pow2(diff);
    row.dyadic_lo = pow2(diff) / 4;
    row.dyadic_hi = pow2(static_cast<int>(last_upper(t / 2) - first_at_least(t))) / c;
    row.predicted_spread = n == 0 ? Real(0) : sqrt(to_real(Rational(q * n * (1 - q)))) * spread;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace poremetrics
