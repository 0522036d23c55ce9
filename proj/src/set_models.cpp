#include "poremetrics/set_models.hpp"

#include <algorithm>
#include <sstream>

#include "poremetrics/error.hpp"

namespace poremetrics {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// ---------------------------------------------------------------------------
// ContractionSequence

ContractionSequence ContractionSequence::constant(Rational c) {
  if (c <= 0 || c > 1) throw PreconditionError("contraction must lie in (0, 1]");
  return ContractionSequence(Rule::Constant, std::move(c));
}

ContractionSequence ContractionSequence::half_harmonic() { return ContractionSequence(Rule::HalfHarmonic, Rational(0)); }

Rational ContractionSequence::at(unsigned n) const {
  if (n == 0) throw PreconditionError("contractions are indexed from 1");
  if (rule_ == Rule::Constant) return c_;
  return Rational(2 * n - 1, 2 * n);
}

std::string ContractionSequence::name() const {
  if (rule_ == Rule::Constant) return "constant:" + to_string(c_);
  return "half_harmonic";
}

// ---------------------------------------------------------------------------
// Generator

GeneratedSet generate(const ContractionSequence& seq, unsigned level, bool with_reflection) {
  if (level > kMaxExplicitLevel) {
    throw PreconditionError("explicit enumeration is capped at level " + std::to_string(kMaxExplicitLevel) +
                            "; use the length law for deeper levels");
  }
  std::vector<Rational> pts{Rational(0), Rational(1)};
  for (unsigned n = 1; n <= level; ++n) {
    const Rational c = seq.at(n);
    const Rational b = pts.back();
    const Rational b2 = b + c * b;
    const std::size_t m = pts.size();
    pts.reserve(3 * m - 2);
    for (std::size_t i = 1; i < m; ++i) pts.push_back(b + c * pts[i]);
    for (std::size_t i = 1; i < m; ++i) pts.push_back(b2 + pts[i]);
  }
  GeneratedSet out;
  out.envelope_hi = pts.back();
  if (!with_reflection) {
    out.envelope_lo = 0;
    out.points = std::move(pts);
    return out;
  }
  out.envelope_lo = -pts.back();
  out.points.reserve(2 * pts.size() - 1);
  for (auto it = pts.rbegin(); it != pts.rend() - 1; ++it) out.points.push_back(-*it);
  for (auto& p : pts) out.points.push_back(std::move(p));
  return out;
}

Rational envelope_length(const ContractionSequence& seq, unsigned level) {
  Rational len(1);
  for (unsigned n = 1; n <= level; ++n) len *= 2 + seq.at(n);
  return len;
}

// ---------------------------------------------------------------------------
// SetOracle construction

SetOracle SetOracle::finite_points(std::vector<Rational> points) {
  if (points.empty()) throw PreconditionError("E must be non-empty");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return SetOracle(Points1D{std::make_shared<const std::vector<Rational>>(std::move(points))});
}

SetOracle SetOracle::point_cloud(std::vector<Point> points) {
  if (points.empty()) throw PreconditionError("E must be non-empty");
  const std::size_t n = points.front().size();
  if (n == 0) throw PreconditionError("points need at least one coordinate");
  for (const auto& p : points) {
    if (p.size() != n) throw PreconditionError("point cloud mixes dimensions");
  }
  if (n == 1) {
    std::vector<Rational> flat;
    flat.reserve(points.size());
    for (auto& p : points) flat.push_back(std::move(p[0]));
    return finite_points(std::move(flat));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return SetOracle(Cloud{std::make_shared<const std::vector<Point>>(std::move(points)), n});
}

SetOracle SetOracle::integer_lattice() { return SetOracle(Lattice{}); }

SetOracle SetOracle::box_union(std::vector<Box> boxes) {
  if (boxes.empty()) throw PreconditionError("E must be non-empty");
  const std::size_t n = boxes.front().lo.size();
  for (const auto& b : boxes) {
    if (b.lo.size() != n || b.hi.size() != n || n == 0) throw PreconditionError("box dimensions disagree");
    for (std::size_t a = 0; a < n; ++a) {
      if (b.hi[a] < b.lo[a]) throw PreconditionError("box with hi < lo");
    }
  }
  return SetOracle(Boxes{std::make_shared<const std::vector<Box>>(std::move(boxes)), n});
}

SetOracle SetOracle::generated(const ContractionSequence& seq, unsigned level, bool with_reflection) {
  auto g = generate(seq, level, with_reflection);
  return SetOracle(Gen{seq, level, with_reflection, std::make_shared<const std::vector<Rational>>(std::move(g.points))});
}

// ---------------------------------------------------------------------------
// Introspection

SetOracle::Kind SetOracle::kind() const {
  return std::visit(Overloaded{[](const Points1D&) { return Kind::FinitePoints; },
                               [](const Cloud&) { return Kind::PointCloud; },
                               [](const Lattice&) { return Kind::IntegerLattice; },
                               [](const Boxes&) { return Kind::BoxUnion; },
                               [](const Gen&) { return Kind::Generated; }},
                    v_);
}

std::size_t SetOracle::dim() const {
  return std::visit(Overloaded{[](const Cloud& c) { return c.dim; }, [](const Boxes& b) { return b.dim; },
                               [](const auto&) { return std::size_t{1}; }},
                    v_);
}

std::string SetOracle::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{[&](const Points1D& p) { out << "points(" << p.points->size() << ")"; },
                        [&](const Cloud& c) { out << "cloud(" << c.points->size() << ", n=" << c.dim << ")"; },
                        [&](const Lattice&) { out << "lattice"; },
                        [&](const Boxes& b) { out << "boxes(" << b.boxes->size() << ", n=" << b.dim << ")"; },
                        [&](const Gen& g) {
                          out << "generated(" << g.seq.name() << ", level=" << g.level
                              << (g.reflect ? ", reflected" : "") << ")";
                        }},
             v_);
  return out.str();
}

const ContractionSequence& SetOracle::sequence() const {
  if (auto g = std::get_if<Gen>(&v_)) return g->seq;
  throw PreconditionError("not a generated set");
}

unsigned SetOracle::level() const {
  if (auto g = std::get_if<Gen>(&v_)) return g->level;
  throw PreconditionError("not a generated set");
}

bool SetOracle::reflected() const {
  if (auto g = std::get_if<Gen>(&v_)) return g->reflect;
  throw PreconditionError("not a generated set");
}

const std::vector<Rational>* SetOracle::sorted_points() const {
  if (auto p = std::get_if<Points1D>(&v_)) return p->points.get();
  if (auto g = std::get_if<Gen>(&v_)) return g->points.get();
  return nullptr;
}

void SetOracle::require_1d(const char* what) const {
  if (dim() != 1) throw UnsupportedError(std::string(what) + " is only available for sets in the real line");
}

bool SetOracle::measure_zero() const {
  if (auto b = std::get_if<Boxes>(&v_)) {
    for (const auto& box : *b->boxes) {
      bool degenerate = false;
      for (std::size_t a = 0; a < b->dim; ++a) degenerate = degenerate || box.lo[a] == box.hi[a];
      if (!degenerate) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 1-D neighbours

std::optional<Rational> SetOracle::prev_point(const Rational& x) const {
  require_1d("prev_point");
  if (auto pts = sorted_points()) {
    auto it = std::upper_bound(pts->begin(), pts->end(), x);
    if (it == pts->begin()) return std::nullopt;
    return *std::prev(it);
  }
  if (std::holds_alternative<Lattice>(v_)) return Rational(floor(x));
  const auto& boxes = *std::get<Boxes>(v_).boxes;
  std::optional<Rational> best;
  for (const auto& b : boxes) {
    if (b.lo[0] <= x && x <= b.hi[0]) return x;
    if (b.hi[0] <= x && (!best || b.hi[0] > *best)) best = b.hi[0];
  }
  return best;
}

std::optional<Rational> SetOracle::next_point(const Rational& x) const {
  require_1d("next_point");
  if (auto pts = sorted_points()) {
    auto it = std::lower_bound(pts->begin(), pts->end(), x);
    if (it == pts->end()) return std::nullopt;
    return *it;
  }
  if (std::holds_alternative<Lattice>(v_)) return Rational(ceil(x));
  const auto& boxes = *std::get<Boxes>(v_).boxes;
  std::optional<Rational> best;
  for (const auto& b : boxes) {
    if (b.lo[0] <= x && x <= b.hi[0]) return x;
    if (b.lo[0] >= x && (!best || b.lo[0] < *best)) best = b.lo[0];
  }
  return best;
}

// ---------------------------------------------------------------------------
// Distances

Rational SetOracle::distance(const Rational& x) const {
  require_1d("exact distance");
  auto lo = prev_point(x);
  auto hi = next_point(x);
  if (lo && hi) return std::min(Rational(x - *lo), Rational(*hi - x));
  if (lo) return x - *lo;
  return *hi - x;
}

namespace {

Rational box_gap_squared(std::span<const Rational> x, const Box& b) {
  Rational sum(0);
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] < b.lo[a]) {
      Rational d = b.lo[a] - x[a];
      sum += d * d;
    } else if (x[a] > b.hi[a]) {
      Rational d = x[a] - b.hi[a];
      sum += d * d;
    }
  }
  return sum;
}

Rational box_box_gap_squared(const Box& a, const Box& b) {
  Rational sum(0);
  for (std::size_t i = 0; i < a.lo.size(); ++i) {
    if (a.hi[i] < b.lo[i]) {
      Rational d = b.lo[i] - a.hi[i];
      sum += d * d;
    } else if (b.hi[i] < a.lo[i]) {
      Rational d = a.lo[i] - b.hi[i];
      sum += d * d;
    }
  }
  return sum;
}

DistanceValue from_squared(Rational squared) {
  DistanceValue d;
  Real r = sqrt(to_real(squared));
  d.lo = widen_down(r);
  d.hi = widen_up(r);
  // Perfect squares stay exact.
  Integer num, den;
  if (mpz_perfect_square_p(squared.get_num_mpz_t()) && mpz_perfect_square_p(squared.get_den_mpz_t())) {
    mpz_sqrt(num.get_mpz_t(), squared.get_num_mpz_t());
    mpz_sqrt(den.get_mpz_t(), squared.get_den_mpz_t());
    d.exact = Rational(num, den);
    d.lo = d.hi = to_real(*d.exact);
  }
  d.squared = std::move(squared);
  return d;
}

Box cube_box(const Cube& q) {
  Box b;
  for (std::size_t a = 0; a < q.dim(); ++a) {
    b.lo.push_back(q.lower(a));
    b.hi.push_back(q.upper(a));
  }
  return b;
}

}  // namespace

DistanceValue SetOracle::distance(std::span<const Rational> x) const {
  if (x.size() != dim()) throw PreconditionError("query dimension does not match the set");
  if (dim() == 1) {
    Rational d = distance(x[0]);
    return from_squared(d * d);
  }
  if (auto c = std::get_if<Cloud>(&v_)) {
    std::optional<Rational> best;
    for (const auto& p : *c->points) {
      Rational s(0);
      for (std::size_t a = 0; a < c->dim; ++a) {
        Rational d = p[a] - x[a];
        s += d * d;
      }
      if (!best || s < *best) best = s;
    }
    return from_squared(*best);
  }
  const auto& boxes = *std::get<Boxes>(v_).boxes;
  std::optional<Rational> best;
  for (const auto& b : boxes) {
    Rational s = box_gap_squared(x, b);
    if (!best || s < *best) best = s;
  }
  return from_squared(*best);
}

DistanceValue SetOracle::distance_to(const Cube& cube) const {
  if (cube.dim() != dim()) throw PreconditionError("cube dimension does not match the set");
  if (dim() == 1) {
    const Rational lo = cube.lower(0);
    const Rational hi = cube.upper(0);
    auto inside = next_point(lo);
    if (inside && *inside <= hi) return from_squared(Rational(0));
    Rational d;
    auto left = prev_point(lo);
    if (left && inside) {
      d = std::min(Rational(lo - *left), Rational(*inside - hi));
    } else if (left) {
      d = lo - *left;
    } else {
      d = *inside - hi;
    }
    return from_squared(d * d);
  }
  const Box qb = cube_box(cube);
  std::optional<Rational> best;
  if (auto c = std::get_if<Cloud>(&v_)) {
    for (const auto& p : *c->points) {
      Rational s = box_gap_squared(p, qb);
      if (!best || s < *best) best = s;
    }
  } else {
    for (const auto& b : *std::get<Boxes>(v_).boxes) {
      Rational s = box_box_gap_squared(qb, b);
      if (!best || s < *best) best = s;
    }
  }
  return from_squared(*best);
}

// ---------------------------------------------------------------------------
// Membership

bool SetOracle::meets(const Cube& cube) const {
  if (cube.dim() != dim()) throw PreconditionError("cube dimension does not match the set");
  if (dim() == 1 && !std::holds_alternative<Boxes>(v_)) {
    const Rational lo = cube.lower(0);
    auto next = next_point(lo);
    return next && *next < lo + cube.side();
  }
  if (auto c = std::get_if<Cloud>(&v_)) {
    for (const auto& p : *c->points) {
      if (cube.contains(p)) return true;
    }
    return false;
  }
  const auto& boxes = *std::get<Boxes>(v_).boxes;
  const Rational s = cube.side();
  for (const auto& b : boxes) {
    bool hit = true;
    for (std::size_t a = 0; a < dim() && hit; ++a) {
      const Rational lo = cube.lower(a);
      hit = b.lo[a] < lo + s && b.hi[a] >= lo;
    }
    if (hit) return true;
  }
  return false;
}

std::optional<std::uint64_t> SetOracle::count_in(const Cube& cube) const {
  if (cube.dim() != dim()) throw PreconditionError("cube dimension does not match the set");
  if (auto pts = sorted_points()) {
    const Rational lo = cube.lower(0);
    const Rational hi = lo + cube.side();
    auto a = std::lower_bound(pts->begin(), pts->end(), lo);
    auto b = std::lower_bound(a, pts->end(), hi);
    return static_cast<std::uint64_t>(b - a);
  }
  if (std::holds_alternative<Lattice>(v_)) {
    const Integer n = ceil(cube.upper(0)) - ceil(cube.lower(0));
    if (!n.fits_ulong_p()) return std::nullopt;
    return n.get_ui();
  }
  if (auto c = std::get_if<Cloud>(&v_)) {
    std::uint64_t n = 0;
    for (const auto& p : *c->points) n += cube.contains(p) ? 1 : 0;
    return n;
  }
  auto pts = points_in(cube);
  if (!pts) return std::nullopt;
  return pts->size();
}

std::optional<std::vector<Point>> SetOracle::points_in(const Cube& cube, std::uint64_t cap) const {
  if (cube.dim() != dim()) throw PreconditionError("cube dimension does not match the set");
  std::vector<Point> out;
  if (auto pts = sorted_points()) {
    const Rational lo = cube.lower(0);
    const Rational hi = lo + cube.side();
    auto a = std::lower_bound(pts->begin(), pts->end(), lo);
    auto b = std::lower_bound(a, pts->end(), hi);
    if (static_cast<std::uint64_t>(b - a) > cap) return std::nullopt;
    for (auto it = a; it != b; ++it) out.push_back(Point{*it});
    return out;
  }
  if (std::holds_alternative<Lattice>(v_)) {
    const Integer first = ceil(cube.lower(0));
    const Integer end = ceil(cube.upper(0));
    const Integer n = end - first;
    if (!n.fits_ulong_p() || n.get_ui() > cap) return std::nullopt;
    for (Integer k = first; k < end; ++k) out.push_back(Point{Rational(k)});
    return out;
  }
  if (auto c = std::get_if<Cloud>(&v_)) {
    for (const auto& p : *c->points) {
      if (cube.contains(p)) out.push_back(p);
    }
    return out;
  }
  for (const auto& b : *std::get<Boxes>(v_).boxes) {
    if (b.lo != b.hi) return std::nullopt;
    if (cube.contains(b.lo)) out.push_back(b.lo);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Rational> SetOracle::points_in(const Rational& lo, const Rational& hi) const {
  require_1d("windowed point enumeration");
  if (auto pts = sorted_points()) {
    auto a = std::lower_bound(pts->begin(), pts->end(), lo);
    auto b = std::upper_bound(a, pts->end(), hi);
    return {a, b};
  }
  if (std::holds_alternative<Lattice>(v_)) {
    const Integer first = ceil(lo);
    const Integer last = floor(hi);
    if (last - first > Integer(1L << 26)) throw UnsupportedError("lattice window too large to enumerate");
    std::vector<Rational> out;
    for (Integer k = first; k <= last; ++k) out.emplace_back(k);
    return out;
  }
  std::vector<Rational> out;
  for (const auto& b : *std::get<Boxes>(v_).boxes) {
    if (b.lo[0] != b.hi[0]) throw UnsupportedError("box union is not a point set");
    if (lo <= b.lo[0] && b.lo[0] <= hi) out.push_back(b.lo[0]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Components

std::vector<std::pair<Rational, Rational>> SetOracle::merged_intervals_1d(const Rational& lo,
                                                                          const Rational& hi) const {
  std::vector<std::pair<Rational, Rational>> iv;
  for (const auto& b : *std::get<Boxes>(v_).boxes) {
    if (b.hi[0] >= lo && b.lo[0] <= hi) iv.emplace_back(b.lo[0], b.hi[0]);
  }
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<Rational, Rational>> merged;
  for (auto& [a, b] : iv) {
    if (!merged.empty() && a <= merged.back().second) {
      if (b > merged.back().second) merged.back().second = b;
    } else {
      merged.emplace_back(a, b);
    }
  }
  return merged;
}

std::vector<Component> SetOracle::components(const Rational& lo, const Rational& hi) const {
  require_1d("components");
  if (hi <= lo) throw PreconditionError("empty window");
  // Closed pieces of E meeting the open window, in order.
  std::vector<std::pair<Rational, Rational>> pieces;
  if (std::holds_alternative<Boxes>(v_)) {
    for (auto& [a, b] : merged_intervals_1d(lo, hi)) {
      if (b > lo && a < hi) pieces.emplace_back(a, b);
    }
  } else {
    for (auto& p : points_in(lo, hi)) {
      if (p > lo && p < hi) pieces.emplace_back(p, p);
    }
  }
  std::vector<Component> out;
  out.reserve(pieces.size() + 1);
  Rational cursor = lo;
  std::optional<Rational> cursor_e = prev_point(lo);
  for (auto& [a, b] : pieces) {
    if (a > cursor) out.push_back(Component{cursor, a, cursor_e, a});
    cursor = b;
    cursor_e = b;
  }
  if (hi > cursor) out.push_back(Component{cursor, hi, cursor_e, next_point(hi)});
  return out;
}

std::vector<Component> SetOracle::components(const Cube& window) const {
  if (window.dim() != 1) throw UnsupportedError("components are only available for sets in the real line");
  return components(window.lower(0), window.upper(0));
}

}  // namespace poremetrics
