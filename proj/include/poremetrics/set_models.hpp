#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "poremetrics/cube.hpp"
#include "poremetrics/rational.hpp"
#include "poremetrics/real.hpp"

namespace poremetrics {

/// The contractions c_1, c_2, ... used by the copy-contract-copy generator.
class ContractionSequence {
 public:
  enum class Rule { Constant, HalfHarmonic };

  /// c_n = c for every n; requires 0 < c <= 1.
  static ContractionSequence constant(Rational c);
  /// c_n = 1 - 1/(2n).
  static ContractionSequence half_harmonic();

  Rule rule() const { return rule_; }
  /// Only meaningful for Rule::Constant.
  const Rational& constant_value() const { return c_; }
  /// c_n for n >= 1.
  Rational at(unsigned n) const;
  std::string name() const;

  friend bool operator==(const ContractionSequence&, const ContractionSequence&) = default;

 private:
  ContractionSequence(Rule rule, Rational c) : rule_(rule), c_(std::move(c)) {}
  Rule rule_;
  Rational c_;
};

/// Explicit point enumeration is capped here (3^14 + 1 points per side).
inline constexpr unsigned kMaxExplicitLevel = 14;

struct GeneratedSet {
  std::vector<Rational> points;  // strictly increasing
  Rational envelope_lo;
  Rational envelope_hi;
};

/// E_level: E_0 = {0,1}; E_n = E_{n-1} U (b + c_n E_{n-1}) U (b(1 + c_n) + E_{n-1})
/// with b the last point of E_{n-1}. With reflection the set is E_level U -E_level.
GeneratedSet generate(const ContractionSequence& seq, unsigned level, bool with_reflection = false);

/// |Q_level| for the unreflected set, without enumerating points.
Rational envelope_length(const ContractionSequence& seq, unsigned level);

/// Open interval (left, right) of the window interior missing E. e_left/e_right are
/// the nearest points of E at or beyond each end (nullopt when E has none there);
/// they differ from left/right only where the window clipped the gap.
struct Component {
  Rational left;
  Rational right;
  std::optional<Rational> e_left;
  std::optional<Rational> e_right;

  Rational length() const { return right - left; }
  bool clipped_left() const { return !e_left || *e_left != left; }
  bool clipped_right() const { return !e_right || *e_right != right; }
};

/// Closed axis-aligned box (degenerate boxes allowed).
struct Box {
  Point lo;
  Point hi;
};

/// dist(x, E). Exact rational in 1-D; in higher dimensions the squared distance is
/// exact and [lo, hi] brackets its square root.
struct DistanceValue {
  std::optional<Rational> exact;
  Rational squared;
  Real lo;
  Real hi;
};

/// Queryable description of a closed set E.
class SetOracle {
 public:
  enum class Kind { FinitePoints, PointCloud, IntegerLattice, BoxUnion, Generated };

  static SetOracle finite_points(std::vector<Rational> points);
  static SetOracle point_cloud(std::vector<Point> points);
  static SetOracle integer_lattice();
  static SetOracle box_union(std::vector<Box> boxes);
  static SetOracle generated(const ContractionSequence& seq, unsigned level, bool with_reflection = false);

  Kind kind() const;
  std::size_t dim() const;
  std::string describe() const;

  /// Generated-set parameters (throws for other kinds).
  const ContractionSequence& sequence() const;
  unsigned level() const;
  bool reflected() const;

  DistanceValue distance(std::span<const Rational> x) const;
  /// 1-D exact distance.
  Rational distance(const Rational& x) const;
  /// Distance from E to the closure of the cube.
  DistanceValue distance_to(const Cube& cube) const;

  /// Q cap E != empty for the half-open cube Q.
  bool meets(const Cube& cube) const;
  /// Exact |E cap Q| for point-like oracles; nullopt when E is not locally finite.
  std::optional<std::uint64_t> count_in(const Cube& cube) const;
  /// All points of E inside the half-open cube, for point-like oracles.
  std::optional<std::vector<Point>> points_in(const Cube& cube, std::uint64_t cap = 1U << 24) const;
  bool measure_zero() const;

  /// 1-D: largest e in E with e <= x / smallest e >= x.
  std::optional<Rational> prev_point(const Rational& x) const;
  std::optional<Rational> next_point(const Rational& x) const;
  /// 1-D: sorted points of E in the closed window [lo, hi] (point-like oracles).
  std::vector<Rational> points_in(const Rational& lo, const Rational& hi) const;

  /// 1-D: connected components of (lo, hi) \ E, sorted, clipped to the window.
  std::vector<Component> components(const Rational& lo, const Rational& hi) const;
  std::vector<Component> components(const Cube& window) const;

 private:
  struct Points1D {
    std::shared_ptr<const std::vector<Rational>> points;
  };
  struct Cloud {
    std::shared_ptr<const std::vector<Point>> points;
    std::size_t dim;
  };
  struct Lattice {};
  struct Boxes {
    std::shared_ptr<const std::vector<Box>> boxes;
    std::size_t dim;
  };
  struct Gen {
    ContractionSequence seq;
    unsigned level;
    bool reflect;
    std::shared_ptr<const std::vector<Rational>> points;
  };
  using Variant = std::variant<Points1D, Cloud, Lattice, Boxes, Gen>;

  explicit SetOracle(Variant v) : v_(std::move(v)) {}
  const std::vector<Rational>* sorted_points() const;
  void require_1d(const char* what) const;
  std::vector<std::pair<Rational, Rational>> merged_intervals_1d(const Rational& lo, const Rational& hi) const;

  Variant v_;
};

}  // namespace poremetrics
