#include "poremetrics/pores.hpp"

#include <algorithm>
#include <cassert>
#include <future>
#include <map>

#include "poremetrics/error.hpp"

namespace poremetrics {

Rational PoreFamily::enumerated_mass() const {
  Rational total(0);
  for (const auto& g : entries) total += g.mass;
  return total;
}

Rational PoreFamily::resolution() const { return root.side() * pow2(-static_cast<int>(max_generation)); }

std::string to_string(Certainty c) { return c == Certainty::Exact ? "exact" : "interval"; }

namespace {

// ---------------------------------------------------------------------------
// Point-keyed enumeration: each point of E cap Q0 gets a J-bit integer key per
// axis, so "child meets E" becomes a bucket test on key bits.

struct Node {
  std::vector<std::uint64_t> index;  // relative to the root, at the current generation
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct StepResult {
  std::uint64_t pores = 0;
  std::vector<Node> next;
  std::vector<Cube> cubes;
};

struct KeyedPoints {
  std::size_t dim = 0;
  std::vector<std::uint64_t> keys;  // point-major
};

KeyedPoints key_points(const Cube& q0, const std::vector<Point>& pts, unsigned depth) {
  KeyedPoints kp;
  kp.dim = q0.dim();
  kp.keys.resize(pts.size() * kp.dim);
  const Rational scale = pow2(static_cast<int>(depth)) / q0.side();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t a = 0; a < kp.dim; ++a) {
      const Integer k = floor(Rational((pts[i][a] - q0.lower(a)) * scale));
      kp.keys[i * kp.dim + a] = k.get_ui();
    }
  }
  return kp;
}

StepResult split_nodes(const Cube& q0, const KeyedPoints& kp, std::vector<std::size_t>& order,
                       std::span<const Node> nodes, unsigned child_generation, unsigned shift, bool collect,
                       std::size_t collect_room) {
  StepResult out;
  const std::size_t n = kp.dim;
  const unsigned codes = 1U << n;
  std::vector<std::size_t> counts(codes);
  std::vector<std::size_t> scratch;
  for (const Node& node : nodes) {
    std::fill(counts.begin(), counts.end(), 0);
    auto code_of = [&](std::size_t p) {
      unsigned code = 0;
      for (std::size_t a = 0; a < n; ++a) code |= static_cast<unsigned>((kp.keys[p * n + a] >> shift) & 1U) << a;
      return code;
    };
    for (std::size_t i = node.begin; i < node.end; ++i) ++counts[code_of(order[i])];
    // Counting sort of the node's points by child code.
    std::vector<std::size_t> start(codes + 1, node.begin);
    for (unsigned c = 0; c < codes; ++c) start[c + 1] = start[c] + counts[c];
    scratch.assign(order.begin() + static_cast<std::ptrdiff_t>(node.begin),
                   order.begin() + static_cast<std::ptrdiff_t>(node.end));
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t p : scratch) order[fill[code_of(p)]++] = p;
    for (unsigned c = 0; c < codes; ++c) {
      std::vector<std::uint64_t> child(n);
      for (std::size_t a = 0; a < n; ++a) child[a] = (node.index[a] << 1) | ((c >> a) & 1U);
      if (counts[c] == 0) {
        ++out.pores;
        if (collect && out.cubes.size() < collect_room) out.cubes.push_back(q0.descendant(child_generation, child));
      } else {
        out.next.push_back(Node{std::move(child), start[c], start[c + 1]});
      }
    }
  }
  return out;
}

PoreFamily enumerate_keyed(const SetOracle& e, const Cube& q0, std::vector<Point> pts, unsigned max_gen,
                           const EnumerateOptions& options) {
  PoreFamily pf{q0, {}, max_gen, Rational(0), 0, std::nullopt, e.measure_zero(), {}};
  const KeyedPoints kp = key_points(q0, pts, max_gen);
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<Node> frontier{Node{std::vector<std::uint64_t>(q0.dim(), 0), 0, pts.size()}};
  const Rational q0_measure = q0.measure();
  const unsigned jobs = std::max(1U, options.jobs);

  for (unsigned j = 1; j <= max_gen; ++j) {
    const unsigned shift = max_gen - j;
    const std::size_t room = options.collect_limit > pf.cubes.size() ? options.collect_limit - pf.cubes.size() : 0;
    std::vector<StepResult> parts;
    if (jobs == 1 || frontier.size() < 2 * jobs) {
      parts.push_back(split_nodes(q0, kp, order, frontier, j, shift, options.collect_cubes, room));
    } else {
      // Nodes own disjoint ranges of `order`, so chunks can be split concurrently.
      std::vector<std::future<StepResult>> futures;
      const std::size_t chunk = (frontier.size() + jobs - 1) / jobs;
      for (std::size_t b = 0; b < frontier.size(); b += chunk) {
        std::span<const Node> part(frontier.data() + b, std::min(chunk, frontier.size() - b));
        futures.push_back(std::async(std::launch::async, [&, part] {
          return split_nodes(q0, kp, order, part, j, shift, options.collect_cubes, room);
        }));
      }
      for (auto& f : futures) parts.push_back(f.get());
    }
    GenerationMass g;
    g.generation = j;
    g.length = q0.side() * pow2(-static_cast<int>(j));
    std::vector<Node> next;
    for (auto& part : parts) {
      g.count += part.pores;
      for (auto& node : part.next) next.push_back(std::move(node));
      for (auto& c : part.cubes) {
        if (pf.cubes.size() < options.collect_limit) pf.cubes.push_back(std::move(c));
      }
    }
    g.mass = q0_measure * pow2(-static_cast<int>(j * q0.dim())) * Rational(static_cast<unsigned long>(g.count));
    pf.entries.push_back(std::move(g));
    frontier = std::move(next);
  }
  pf.boundary_cubes = frontier.size();
  std::uint64_t remaining = 0;
  for (const auto& node : frontier) remaining += node.end - node.begin;
  pf.tail_points = remaining;
  pf.tail_mass = q0_measure - pf.enumerated_mass();
  return pf;
}

PoreFamily enumerate_generic(const SetOracle& e, const Cube& q0, unsigned max_gen, const EnumerateOptions& options) {
  if (q0.generation() + max_gen > kMaxGeneration) throw PreconditionError("enumeration depth exceeds the generation limit");
  PoreFamily pf{q0, {}, max_gen, Rational(0), 0, std::nullopt, e.measure_zero(), {}};
  std::vector<Cube> frontier{q0};
  const Rational q0_measure = q0.measure();
  for (unsigned j = 1; j <= max_gen; ++j) {
    GenerationMass g;
    g.generation = j;
    g.length = q0.side() * pow2(-static_cast<int>(j));
    std::vector<Cube> next;
    for (const auto& cube : frontier) {
      for (auto& child : cube.children()) {
        if (e.meets(child)) {
          next.push_back(std::move(child));
        } else {
          ++g.count;
          if (options.collect_cubes && pf.cubes.size() < options.collect_limit) pf.cubes.push_back(std::move(child));
        }
      }
    }
    g.mass = q0_measure * pow2(-static_cast<int>(j * q0.dim())) * Rational(static_cast<unsigned long>(g.count));
    pf.entries.push_back(std::move(g));
    frontier = std::move(next);
  }
  pf.boundary_cubes = frontier.size();
  std::uint64_t remaining = 0;
  bool counted = true;
  for (const auto& cube : frontier) {
    auto c = e.count_in(cube);
    if (!c) {
      counted = false;
      break;
    }
    remaining += *c;
  }
  if (counted) pf.tail_points = remaining;
  pf.tail_mass = q0_measure - pf.enumerated_mass();
  return pf;
}

}  // namespace

PoreFamily enumerate_pores(const SetOracle& e, const Cube& q0, unsigned max_gen, const EnumerateOptions& options) {
  if (max_gen < 1) throw PreconditionError("max_gen must be at least 1");
  if (max_gen > kMaxGeneration) throw PreconditionError("max_gen exceeds the generation limit");
  if (q0.dim() != e.dim()) throw PreconditionError("cube dimension does not match the set");
  if (!e.meets(q0)) throw PreconditionError("cube misses E; use whole-cube fast path");
  if (auto pts = e.points_in(q0)) return enumerate_keyed(e, q0, std::move(*pts), max_gen, options);
  return enumerate_generic(e, q0, max_gen, options);
}

MaximalPore maximal_pore(const PoreFamily& pf) {
  for (const auto& g : pf.entries) {
    if (g.count > 0) return MaximalPore{g.length, g.count, g.generation};
  }
  throw PreconditionError("pore family is empty");
}

Rational maximal_pore_length(const PoreFamily& pf) { return maximal_pore(pf).length; }

// ---------------------------------------------------------------------------
// Mass brackets. Tail pores all have length <= 2^-(J+1) l(Q0); when |E| > 0 the
// tail may also hold E itself, which no length class claims.

MassBracket mass_at_least(const PoreFamily& pf, const Rational& length) {
  MassBracket b{Rational(0), Rational(0)};
  for (const auto& g : pf.entries) {
    if (g.length >= length) b.lo += g.mass;
  }
  b.hi = b.lo;
  if (length <= pf.resolution() / 2) b.hi += pf.tail_mass;
  return b;
}

MassBracket mass_at_most(const PoreFamily& pf, const Rational& length) {
  MassBracket b{Rational(0), Rational(0)};
  for (const auto& g : pf.entries) {
    if (g.length <= length) b.lo += g.mass;
  }
  b.hi = b.lo + pf.tail_mass;
  if (pf.measure_zero && length >= pf.resolution() / 2) b.lo += pf.tail_mass;
  return b;
}

MassBracket mass_below(const PoreFamily& pf, const Rational& length) {
  MassBracket b{Rational(0), Rational(0)};
  for (const auto& g : pf.entries) {
    if (g.length < length) b.lo += g.mass;
  }
  b.hi = b.lo + pf.tail_mass;
  if (pf.measure_zero && length > pf.resolution() / 2) b.lo += pf.tail_mass;
  return b;
}

MassBracket mass_above(const PoreFamily& pf, const Rational& length) {
  MassBracket b{Rational(0), Rational(0)};
  for (const auto& g : pf.entries) {
    if (g.length > length) b.lo += g.mass;
  }
  b.hi = b.lo;
  if (length < pf.resolution() / 2) b.hi += pf.tail_mass;
  return b;
}

namespace {

void require_fraction(const Rational& t) {
  if (t <= 0 || t >= 1) throw PreconditionError("fraction t must lie in (0, 1)");
}

[[maybe_unused]] void check_fraction_invariants(const PoreFamily& pf, const FractionQuery& fq, const LengthAnswer& a) {
  const Rational total = pf.root.measure();
  const Rational need = fq.t * total;
  if (fq.side == Side::Largest) {
    assert(mass_at_least(pf, a.value).lo >= need);
    assert(mass_below(pf, a.value).lo <= total - need);
  } else if (a.exact()) {
    assert(mass_at_most(pf, a.value).hi >= need);
    assert(mass_above(pf, a.value).lo <= total - need);
  }
  (void)need;
  (void)total;
}

}  // namespace

LengthAnswer fraction_length(const PoreFamily& pf, const FractionQuery& fq) {
  require_fraction(fq.t);
  if (pf.entries.empty()) throw PreconditionError("pore family is empty");
  const Rational total = pf.root.measure();
  const Rational need = fq.t * total;
  const Rational guard = std::min(fq.t, Rational(1 - fq.t)) * total;
  if (pf.tail_mass >= guard) {
    throw InsufficientDepthError("insufficient depth: tail mass " + to_string(pf.tail_mass / total) +
                                 " of |Q0| at max_gen " + std::to_string(pf.max_generation));
  }

  LengthAnswer answer;
  if (fq.side == Side::Largest) {
    // mass(l >= l_j) is exact for every enumerated length.
    Rational cum(0);
    for (const auto& g : pf.entries) {
      cum += g.mass;
      if (cum >= need) {
        answer.value = answer.lo = answer.hi = g.length;
        break;
      }
    }
  } else {
    // mass(l <= l_j) = |Q0| - mass(l > l_j) - |E cap Q0|; the last term is 0 or unknown in [0, tail].
    const Rational slack = pf.measure_zero ? Rational(0) : pf.tail_mass;
    std::optional<Rational> certain;
    std::optional<Rational> possible;
    Rational above(0);
    for (const auto& g : pf.entries) {
      const Rational upper = total - above;
      if (upper >= need) possible = g.length;
      if (upper - slack >= need) certain = g.length;
      above += g.mass;
    }
    answer.lo = *possible;
    answer.hi = *certain;
    answer.value = answer.hi;
    answer.certainty = answer.lo == answer.hi ? Certainty::Exact : Certainty::IntervalBound;
  }
#ifndef NDEBUG
  check_fraction_invariants(pf, fq, answer);
#endif
  return answer;
}

LengthAnswer tilde_fraction_length(std::span<const Component> components, const Cube& q0, const FractionQuery& fq) {
  require_fraction(fq.t);
  if (components.empty()) throw PreconditionError("component list is empty");
  if (q0.dim() != 1) throw UnsupportedError("components are only available for sets in the real line");
  std::map<Rational, Rational> by_length;  // length -> total length of components with it
  for (const auto& c : components) by_length[c.length()] += c.length();
  const Rational need = fq.t * q0.measure();
  Rational cum(0);
  auto settle = [&](const Rational& v) {
    LengthAnswer a;
    a.value = a.lo = a.hi = v;
    return a;
  };
  if (fq.side == Side::Largest) {
    for (auto it = by_length.rbegin(); it != by_length.rend(); ++it) {
      cum += it->second;
      if (cum >= need) return settle(it->first);
    }
  } else {
    for (const auto& [len, mass] : by_length) {
      cum += mass;
      if (cum >= need) return settle(len);
    }
  }
  throw PreconditionError("components cover less than t|Q0|");
}

RatioReport ratio_condition(const SetOracle& e, std::span<const Cube> cubes, const Rational& s, unsigned max_gen,
                            const EnumerateOptions& options) {
  require_fraction(s);
  RatioReport report;
  report.s = s;
  const Rational limit(1, 1 + (1UL << e.dim()));
  if (s >= limit) {
    report.warnings.push_back("s = " + to_string(s) + " is outside (0, " + to_string(limit) +
                              "); ratios are exploratory only");
  }
  for (const auto& q0 : cubes) {
    RatioRow row;
    row.cube_id = q0.to_string();
    if (!e.meets(q0)) {
      row.skipped = true;
      row.note = "cube misses E";
      report.rows.push_back(std::move(row));
      continue;
    }
    try {
      const PoreFamily pf = enumerate_pores(e, q0, max_gen, options);
      row.largest = fraction_length(pf, {s, Side::Largest});
      row.smallest = fraction_length(pf, {s, Side::Smallest});
      row.ratio = row.largest->value / row.smallest->lo;
      row.depth_ok = row.largest->exact() && row.smallest->exact();
      if (!row.depth_ok) row.note = "S(s) only bracketed; ratio is an upper bound";
      if (!report.max_ratio || *row.ratio > *report.max_ratio) report.max_ratio = row.ratio;
    } catch (const InsufficientDepthError& err) {
      row.depth_ok = false;
      row.note = err.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

PorosityResult weak_porosity_check(const SetOracle& e, const Cube& q0, const Rational& porosity_sigma,
                                   const Rational& gamma, unsigned max_gen, const EnumerateOptions& options) {
  if (porosity_sigma <= 0 || porosity_sigma >= 1 || gamma <= 0 || gamma >= 1) {
    throw PreconditionError("sigma and gamma must lie in (0, 1)");
  }
  PorosityResult r;
  r.threshold_mass = porosity_sigma * q0.measure();
  if (!e.meets(q0)) {
    r.trivial = true;
    r.holds = true;
    r.achieved_mass = q0.measure();
    return r;
  }
  const PoreFamily pf = enumerate_pores(e, q0, max_gen, options);
  r.max_pore_length = maximal_pore_length(pf);
  r.length_threshold = gamma * r.max_pore_length;
  const MassBracket m = mass_at_least(pf, r.length_threshold);
  r.achieved_mass = m.lo;
  r.holds = m.lo >= r.threshold_mass;
  r.certain = r.holds || m.hi < r.threshold_mass;
  return r;
}

}  // namespace poremetrics
