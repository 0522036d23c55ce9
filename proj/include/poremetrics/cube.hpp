#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "poremetrics/rational.hpp"

namespace poremetrics {

/// Deepest generation representable by the 64-bit per-axis index.
inline constexpr unsigned kMaxGeneration = 62;

/// Half-open axis-aligned dyadic cube inside a root cube.
///
/// The realized box is origin + side * 2^-j * [index, index + 1) on each
/// axis. Cubes are stored by (generation, index) against a shared immutable
/// root frame, so parent/child moves are integer shifts and identity is exact.
class Cube {
 public:
  /// Root cube [origin, origin + side)^n; side must be positive.
  static Cube root(Point origin, Rational side);
  /// 1-D root cube [lo, hi).
  static Cube interval(const Rational& lo, const Rational& hi);

  Cube(const Cube&) = default;
  Cube(Cube&&) noexcept = default;
  Cube& operator=(const Cube&) = default;
  Cube& operator=(Cube&&) noexcept = default;

  std::size_t dim() const { return index_.size(); }
  unsigned generation() const { return generation_; }
  std::span<const std::uint64_t> index() const { return index_; }

  const Point& root_origin() const { return frame_->origin; }
  const Rational& root_side() const { return frame_->side; }

  Rational side() const;
  Rational measure() const;
  Rational lower(std::size_t axis) const;
  Rational upper(std::size_t axis) const;
  Point center() const;

  /// The 2^n children, ordered by the binary child code (axis 0 = lowest bit).
  std::vector<Cube> children() const;
  Cube child(unsigned code) const;
  /// Descendant `depth` generations down with the given index relative to this cube.
  Cube descendant(unsigned depth, std::span<const std::uint64_t> local_index) const;
  /// Throws PreconditionError("root has no parent") at generation 0.
  Cube parent() const;
  /// pi_k Q; ancestor(0) is the cube itself.
  Cube ancestor(unsigned k) const;
  Cube root_cube() const { return ancestor(generation_); }

  /// Membership in the half-open box.
  bool contains(std::span<const Rational> x) const;
  /// Containment as dyadic cubes of the same root.
  bool contains(const Cube& other) const;

  /// The same box promoted to a fresh root (generation 0).
  Cube as_root() const;

  /// Same root frame (value comparison).
  bool same_root(const Cube& other) const;

  std::string to_string() const;

  friend bool operator==(const Cube& a, const Cube& b);

 private:
  struct Frame {
    Point origin;
    Rational side;
  };

  Cube(std::shared_ptr<const Frame> frame, unsigned generation, std::vector<std::uint64_t> index)
      : frame_(std::move(frame)), generation_(generation), index_(std::move(index)) {}

  std::shared_ptr<const Frame> frame_;
  unsigned generation_ = 0;
  std::vector<std::uint64_t> index_;
};

}  // namespace poremetrics
