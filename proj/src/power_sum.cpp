#include "poremetrics/power_sum.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "poremetrics/error.hpp"

namespace poremetrics {

namespace {

constexpr unsigned long kTrialLimit = 100000;

// Prime factorization with multiplicities; nullopt when a composite cofactor survives trial division.
std::optional<std::vector<std::pair<Integer, long>>> factor(Integer n) {
  std::vector<std::pair<Integer, long>> out;
  auto strip = [&](unsigned long p) {
    long k = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++k;
    }
    if (k > 0) out.emplace_back(Integer(p), k);
  };
  strip(2);
  for (unsigned long p = 3; p <= kTrialLimit && Integer(p) * p <= n; p += 2) strip(p);
  if (n > 1) {
    if (n > Integer(kTrialLimit) * kTrialLimit && mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) return std::nullopt;
    out.emplace_back(n, 1);
  }
  return out;
}

Rational int_power(const Integer& p, const Integer& e) {
  const long k = e.get_si();
  Rational r = ipow(Rational(p), static_cast<unsigned>(k < 0 ? -k : k));
  return k < 0 ? Rational(1 / r) : r;
}

PowerSum::Radical merge(const PowerSum::Radical& a, const PowerSum::Radical& b, Rational& coeff) {
  std::map<Integer, Rational> acc;
  for (const auto& [p, e] : a) acc[p] += e;
  for (const auto& [p, e] : b) acc[p] += e;
  PowerSum::Radical out;
  for (auto& [p, e] : acc) {
    const Integer whole = floor(e);
    if (whole != 0) {
      coeff *= int_power(p, whole);
      e -= whole;
    }
    if (e != 0) out.emplace_back(p, e);
  }
  return out;
}

}  // namespace

PowerSum::PowerSum(const Rational& r) { add_term({}, r); }

void PowerSum::add_term(const Radical& radical, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(radical, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

std::optional<PowerSum> PowerSum::power(const Rational& base, const Rational& exponent) {
  if (base < 0) throw PreconditionError("power of a negative base");
  if (base == 0) {
    if (exponent > 0) return PowerSum();
    return std::nullopt;
  }
  if (exponent == 0) return PowerSum(Rational(1));
  const auto num = factor(base.get_num());
  const auto den = factor(base.get_den());
  if (!num || !den) return std::nullopt;
  Rational coeff(1);
  std::map<Integer, Rational> acc;
  for (const auto& [p, k] : *num) acc[p] += Rational(k) * exponent;
  for (const auto& [p, k] : *den) acc[p] -= Rational(k) * exponent;
  Radical radical;
  for (auto& [p, e] : acc) {
    const Integer whole = floor(e);
    coeff *= int_power(p, whole);
    const Rational frac = e - whole;
    if (frac != 0) radical.emplace_back(p, frac);
  }
  PowerSum out;
  out.add_term(radical, coeff);
  return out;
}

std::optional<Rational> PowerSum::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

std::optional<PowerSum> PowerSum::pow(const Rational& exponent) const {
  if (exponent == 0) return PowerSum(Rational(1));
  if (terms_.empty()) return exponent > 0 ? std::optional<PowerSum>(PowerSum()) : std::nullopt;
  if (terms_.size() == 1) {
    const auto& [radical, coeff] = *terms_.begin();
    if (coeff < 0) {
      if (exponent.get_den() != 1) return std::nullopt;
    }
    auto out = power(abs(coeff), exponent);
    if (!out) return std::nullopt;
    if (coeff < 0 && mpz_odd_p(exponent.get_num_mpz_t())) *out = *out * PowerSum(Rational(-1));
    for (const auto& [p, e] : radical) {
      Rational c(1);
      Radical r = merge({}, {{p, e * exponent}}, c);
      PowerSum factor_term;
      factor_term.add_term(r, c);
      *out *= factor_term;
    }
    return out;
  }
  if (exponent.get_den() != 1 || exponent < 0) return std::nullopt;
  PowerSum out(Rational(1));
  const unsigned long k = exponent.get_num().get_ui();
  for (unsigned long i = 0; i < k; ++i) out *= *this;
  return out;
}

PowerSum& PowerSum::operator+=(const PowerSum& other) {
  for (const auto& [r, c] : other.terms_) add_term(r, c);
  return *this;
}

PowerSum& PowerSum::operator-=(const PowerSum& other) {
  for (const auto& [r, c] : other.terms_) add_term(r, -c);
  return *this;
}

PowerSum& PowerSum::operator*=(const PowerSum& other) {
  PowerSum out;
  for (const auto& [ra, ca] : terms_) {
    for (const auto& [rb, cb] : other.terms_) {
      Rational coeff = ca * cb;
      const Radical r = merge(ra, rb, coeff);
      out.add_term(r, coeff);
    }
  }
  *this = std::move(out);
  return *this;
}

Real PowerSum::to_real() const {
  Real sum = 0;
  for (const auto& [radical, coeff] : terms_) {
    Real term = poremetrics::to_real(coeff);
    for (const auto& [p, e] : radical) term *= boost::multiprecision::pow(Real(p.get_str()), poremetrics::to_real(e));
    sum += term;
  }
  return sum;
}

std::string PowerSum::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [radical, coeff] : terms_) {
    std::string c = poremetrics::to_string(coeff);
    if (!first) {
      if (c.front() == '-') {
        out += " - ";
        c.erase(0, 1);
      } else {
        out += " + ";
      }
    }
    first = false;
    std::string body;
    for (const auto& [p, e] : radical) {
      if (!body.empty()) body += "*";
      body += p.get_str() + "^(" + poremetrics::to_string(e) + ")";
    }
    if (body.empty()) {
      out += c;
    } else if (c == "1") {
      out += body;
    } else if (c == "-1") {
      out += "-" + body;
    } else {
      out += c + "*" + body;
    }
  }
  return out;
}

}  // namespace poremetrics
