#include "poremetrics/weights.hpp"

#include <limits>
#include <stdexcept>

#include "poremetrics/error.hpp"

namespace poremetrics {

namespace {

constexpr std::size_t kSymbolicComponentLimit = 2048;
constexpr std::size_t kSymbolicTermLimit = 256;

const Real& pow_eps() {
  static const Real eps("1e-45");
  return eps;
}

Real infinity() { return std::numeric_limits<Real>::infinity(); }

Real rpow(const Real& base, const Rational& exponent) {
  if (exponent == 0) return Real(1);
  return boost::multiprecision::pow(base, to_real(exponent));
}

Real rpow(const Rational& base, const Rational& exponent) { return rpow(to_real(base), exponent); }

struct Segment {
  Rational u0;
  Rational u1;
};

// Distance profile of a component as [u0, u1] ranges of the distance variable.
std::vector<Segment> segments(const Component& c) {
  std::vector<Segment> out;
  if (c.e_left && c.e_right) {
    const Rational m = (*c.e_left + *c.e_right) / 2;
    if (c.left < m) out.push_back({c.left - *c.e_left, std::min(c.right, m) - *c.e_left});
    if (c.right > m) out.push_back({*c.e_right - c.right, *c.e_right - std::max(c.left, m)});
  } else if (c.e_left) {
    out.push_back({c.left - *c.e_left, c.right - *c.e_left});
  } else if (c.e_right) {
    out.push_back({*c.e_right - c.right, *c.e_right - c.left});
  } else {
    throw PreconditionError("E is empty");
  }
  return out;
}

// Integral of u^theta over [u0, u1] with u0 > 0 or theta > -1.
PieceIntegral segment_integral(const Segment& s, const Rational& theta, bool symbolic) {
  PieceIntegral r;
  if (theta == -1) {
    r.value = log(to_real(s.u1) / to_real(s.u0));
    r.error = abs(r.value) * pow_eps();
    return r;
  }
  const Rational a = theta + 1;
  const Real hi = rpow(s.u1, a);
  const Real lo = s.u0 == 0 ? Real(0) : rpow(s.u0, a);
  r.value = (hi - lo) / to_real(a);
  r.error = (abs(hi) + abs(lo)) / abs(to_real(a)) * pow_eps();
  if (symbolic) {
    auto p1 = PowerSum::power(s.u1, a);
    auto p0 = PowerSum::power(s.u0, a);
    if (p1 && p0) r.symbolic = (*p1 - *p0) * PowerSum(Rational(1) / a);
  }
  return r;
}

void finish(MeanValue& m) {
  if (m.symbolic) {
    if (auto r = m.symbolic->as_rational()) {
      m.lo = m.hi = to_real(*r);
    }
  }
}

Real factorial(std::size_t n) {
  Real f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<unsigned>(i);
  return f;
}

MeanValue mean_1d(const SetOracle& e, const Cube& q0, const Rational& theta, unsigned max_gen) {
  MeanValue m;
  const auto comps = e.components(q0);
  const Rational total = q0.measure();
  Rational covered(0);
  for (const auto& c : comps) covered += c.length();
  const bool symbolic = comps.size() <= kSymbolicComponentLimit;
  const Rational delta = q0.side() * pow2(-static_cast<int>(max_gen));

  Real sum = 0;
  Real err = 0;
  PowerSum exact;
  bool keep = symbolic;
  for (const auto& c : comps) {
    for (Segment s : segments(c)) {
      if (s.u0 == 0 && theta <= -1) {
        m.divergent = true;
        keep = false;
        if (s.u1 <= delta) continue;
        s.u0 = delta;
      }
      const PieceIntegral piece = segment_integral(s, theta, keep);
      sum += piece.value;
      err += piece.error;
      if (keep) {
        if (piece.symbolic) {
          exact += *piece.symbolic;
          if (exact.size() > kSymbolicTermLimit) keep = false;
        } else {
          keep = false;
        }
      }
    }
  }
  const Rational inside = total - covered;  // |E cap Q0|
  if (inside > 0) {
    if (theta < 0) {
      m.divergent = true;
      keep = false;
    } else if (theta == 0) {
      sum += to_real(inside);
      exact += PowerSum(inside);
    }
  }
  const Real measure = to_real(total);
  m.lo = widen_down((sum - err) / measure);
  m.hi = m.divergent ? infinity() : widen_up((sum + err) / measure);
  m.exact = !m.divergent;
  if (keep && !m.divergent) m.symbolic = exact * PowerSum(Rational(1) / total);
  finish(m);
  return m;
}

MeanValue mean_far(const SetOracle& e, const Cube& q0, const Rational& theta) {
  // Q0 misses E: bracket dist between the closure distance and centre distance + half diagonal.
  const DistanceValue near = e.distance_to(q0);
  const Point centre = q0.center();
  const DistanceValue mid = e.distance(centre);
  const Real half_diag = sqrt(Real(static_cast<unsigned>(q0.dim()))) * to_real(q0.side()) / 2;
  const Real dlo = near.lo;
  const Real dhi = mid.hi + widen_up(half_diag);
  MeanValue m;
  if (theta >= 0) {
    m.lo = widen_down(rpow(dlo, theta));
    m.hi = widen_up(rpow(dhi, theta));
  } else {
    m.lo = widen_down(rpow(dhi, theta));
    m.hi = dlo == 0 ? infinity() : widen_up(rpow(dlo, theta));
  }
  return m;
}

}  // namespace

std::optional<Rational> MeanValue::rational() const {
  if (symbolic) return symbolic->as_rational();
  return std::nullopt;
}

std::string MeanValue::describe() const {
  if (symbolic) return symbolic->to_string();
  return "[" + to_string(lo, 20) + ", " + (divergent ? std::string("inf") : to_string(hi, 20)) + "]";
}

PieceIntegral component_integral(const Component& c, const Rational& theta) {
  PieceIntegral total;
  total.value = 0;
  total.error = 0;
  PowerSum acc;
  bool keep = true;
  for (const auto& s : segments(c)) {
    if (s.u0 == 0 && theta <= -1) throw PreconditionError("divergent integral");
    const PieceIntegral p = segment_integral(s, theta, keep);
    total.value += p.value;
    total.error += p.error;
    if (p.symbolic) {
      acc += *p.symbolic;
    } else {
      keep = false;
    }
  }
  if (keep) total.symbolic = acc;
  return total;
}

ComparabilityConstants comparability_constants(std::size_t n, const Rational& theta) {
  if (theta <= -1) throw PreconditionError("theta must exceed -1");
  Real denom = 1;
  for (std::size_t i = 1; i <= n; ++i) denom *= to_real(theta + static_cast<unsigned long>(i));
  const Real profile = factorial(n) * rpow(Rational(1, 2), theta) / denom;
  const Real diam = rpow(Real(2) * sqrt(Real(static_cast<unsigned>(n))), theta);
  if (theta < 0) return {widen_down(diam), widen_up(profile)};
  return {widen_down(profile), widen_up(diam)};
}

MeanValue dyadic_sum(const PoreFamily& pf, const Rational& theta) {
  const std::size_t n = pf.root.dim();
  Real sum = 0;
  for (const auto& g : pf.entries) {
    if (g.count == 0) continue;
    const Rational weight = pow2(-static_cast<int>(g.generation * n)) * Rational(static_cast<unsigned long>(g.count));
    sum += to_real(weight) * rpow(g.length, theta);
  }
  MeanValue m;
  m.lo = widen_down(sum);
  const Rational next_length = pf.resolution() / 2;
  Real tail = 0;
  if (pf.tail_mass > 0) {
    if (theta >= 0) {
      tail = to_real(pf.tail_mass / pf.root.measure()) * rpow(next_length, theta);
    } else {
      const Rational a = theta + static_cast<unsigned long>(n);
      if (a <= 0) throw PreconditionError("theta must exceed -n");
      if (!pf.tail_points) throw InsufficientDepthError("insufficient depth to bound the tail: E is not point-like");
      const Real cells = Real(static_cast<unsigned>((1U << n) - 1)) * Real(*pf.tail_points);
      tail = cells * rpow(next_length, a) / to_real(pf.root.measure()) / (1 - rpow(Rational(1, 2), a));
    }
  }
  m.hi = widen_up(sum + tail);
  m.exact = pf.tail_mass == 0;
  return m;
}

MeanValue mean_dist_power(const SetOracle& e, const Cube& q0, const Rational& theta, unsigned max_gen,
                          const EnumerateOptions& options) {
  if (q0.dim() != e.dim()) throw PreconditionError("cube dimension does not match the set");
  if (theta == 0) {
    MeanValue m;
    m.lo = m.hi = 1;
    m.exact = true;
    m.symbolic = PowerSum(Rational(1));
    return m;
  }
  if (e.dim() == 1) return mean_1d(e, q0, theta, max_gen);
  if (!e.meets(q0)) return mean_far(e, q0, theta);
  if (theta <= -1) throw PreconditionError("theta must exceed -1 when the cube meets E");
  const PoreFamily pf = enumerate_pores(e, q0, max_gen, options);
  if (!pf.measure_zero && theta < 0) throw UnsupportedError("negative exponents need a null set E");
  const MeanValue s = dyadic_sum(pf, theta);
  const ComparabilityConstants c = comparability_constants(q0.dim(), theta);
  MeanValue m;
  m.lo = widen_down(c.c1 * s.lo);
  m.hi = widen_up(c.c2 * s.hi);
  return m;
}

std::string to_string(CaseTag c) {
  switch (c) {
    case CaseTag::I:
      return "I";
    case CaseTag::II:
      return "II";
    default:
      return "III";
  }
}

CaseTag classify(const SetOracle& e, const Cube& q0) {
  if (e.meets(q0)) return CaseTag::III;
  const DistanceValue d = e.distance_to(q0);
  // dist >= 2 diam  <=>  dist^2 >= 4 n l^2
  const Rational bound = 4 * Rational(static_cast<unsigned long>(q0.dim())) * q0.side() * q0.side();
  return d.squared >= bound ? CaseTag::I : CaseTag::II;
}

ApResult ap_product(const SetOracle& e, const Cube& q0, const Rational& alpha, const Rational& p, unsigned max_gen,
                    const EnumerateOptions& options) {
  if (p <= 1) throw PreconditionError("p must exceed 1");
  ApResult r;
  r.case_tag = classify(e, q0);
  if (r.case_tag == CaseTag::I) {
    r.product.lo = 1;
    r.product.hi = widen_up(rpow(Rational(4), abs(alpha)));
    return r;
  }
  const Rational dual = alpha / (p - 1);
  r.weight_mean = mean_dist_power(e, q0, -alpha, max_gen, options);
  r.dual_mean = mean_dist_power(e, q0, dual, max_gen, options);
  const Rational power = p - 1;
  MeanValue& out = r.product;
  out.divergent = r.weight_mean.divergent || r.dual_mean.divergent;
  out.lo = widen_down(r.weight_mean.lo * rpow(r.dual_mean.lo, power));
  out.hi = out.divergent ? infinity() : widen_up(r.weight_mean.hi * rpow(r.dual_mean.hi, power));
  out.exact = r.weight_mean.exact && r.dual_mean.exact;
  if (r.weight_mean.symbolic && r.dual_mean.symbolic) {
    if (auto d = r.dual_mean.symbolic->pow(power)) out.symbolic = *r.weight_mean.symbolic * *d;
  }
  finish(out);
  if (out.hi < 1 - Real("1e-30")) throw std::logic_error("A_p product below the Holder floor 1");
  return r;
}

MeanValue a1_quotient(const SetOracle& e, const Cube& q0, const Rational& alpha, unsigned max_gen,
                      const EnumerateOptions& options) {
  if (alpha <= 0) throw PreconditionError("alpha must be positive");
  const MeanValue mean = mean_dist_power(e, q0, -alpha, max_gen, options);
  MeanValue out;
  out.divergent = mean.divergent;
  if (e.dim() == 1) {
    // dist is piecewise linear on each component; its max sits at a clamped midpoint.
    Rational best(0);
    for (const auto& c : e.components(q0)) {
      Rational x;
      if (c.e_left && c.e_right) {
        x = std::clamp(Rational((*c.e_left + *c.e_right) / 2), c.left, c.right);
      } else {
        x = c.e_left ? c.right : c.left;
      }
      Rational d = c.e_left ? Rational(x - *c.e_left) : Rational(*c.e_right - x);
      if (c.e_left && c.e_right) d = std::min(Rational(x - *c.e_left), Rational(*c.e_right - x));
      best = std::max(best, d);
    }
    if (best == 0) throw PreconditionError("dist vanishes on Q0");
    const Real scale = rpow(best, alpha);
    out.lo = widen_down(mean.lo * scale);
    out.hi = out.divergent ? infinity() : widen_up(mean.hi * scale);
    out.exact = mean.exact;
    if (mean.symbolic) {
      if (auto s = PowerSum::power(best, alpha)) out.symbolic = *mean.symbolic * *s;
    }
    finish(out);
  } else {
    const DistanceValue mid = e.distance(q0.center());
    const Real half_diag = sqrt(Real(static_cast<unsigned>(q0.dim()))) * to_real(q0.side()) / 2;
    const Real dlo = mid.lo;
    const Real dhi = mid.hi + widen_up(half_diag);
    out.lo = widen_down(mean.lo * rpow(dlo, alpha));
    out.hi = out.divergent ? infinity() : widen_up(mean.hi * rpow(dhi, alpha));
  }
  if (out.hi < 1 - Real("1e-30")) throw std::logic_error("A_1 quotient below 1");
  return out;
}

Rational exponent_transfer(const Rational& theta, const Rational& p, const Rational& q) {
  if (p <= 1 || q <= 1) throw PreconditionError("p and q must exceed 1");
  if (q >= p) return theta;
  return theta * (q - 1) / (p - 1);
}

Rational duality_exponent(const Rational& theta, const Rational& p) {
  if (p <= 1) throw PreconditionError("p must exceed 1");
  const Rational p_prime = p / (p - 1);
  return theta * (1 - p_prime);
}

}  // namespace poremetrics
