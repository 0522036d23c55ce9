#include "poremetrics/cube.hpp"

#include <sstream>

#include "poremetrics/error.hpp"

namespace poremetrics {

Cube Cube::root(Point origin, Rational side) {
  if (origin.empty()) throw PreconditionError("cube needs at least one axis");
  if (side <= 0) throw PreconditionError("cube side must be positive");
  auto frame = std::make_shared<const Frame>(Frame{std::move(origin), std::move(side)});
  std::vector<std::uint64_t> index(frame->origin.size(), 0);
  return Cube(std::move(frame), 0, std::move(index));
}

Cube Cube::interval(const Rational& lo, const Rational& hi) {
  if (hi <= lo) throw PreconditionError("interval [" + poremetrics::to_string(lo) + ", " +
                                        poremetrics::to_string(hi) + ") is empty");
  return root(Point{lo}, hi - lo);
}

Rational Cube::side() const { return frame_->side * pow2(-static_cast<int>(generation_)); }

Rational Cube::measure() const { return ipow(side(), static_cast<unsigned>(dim())); }

Rational Cube::lower(std::size_t axis) const {
  Rational offset(static_cast<unsigned long>(index_[axis]));
  return frame_->origin[axis] + side() * offset;
}

Rational Cube::upper(std::size_t axis) const { return lower(axis) + side(); }

Point Cube::center() const {
  Point c(dim());
  const Rational half = side() / 2;
  for (std::size_t a = 0; a < dim(); ++a) c[a] = lower(a) + half;
  return c;
}

Cube Cube::child(unsigned code) const {
  if (generation_ >= kMaxGeneration) throw PreconditionError("generation limit reached");
  std::vector<std::uint64_t> index(index_.size());
  for (std::size_t a = 0; a < index_.size(); ++a) index[a] = (index_[a] << 1) | ((code >> a) & 1U);
  return Cube(frame_, generation_ + 1, std::move(index));
}

Cube Cube::descendant(unsigned depth, std::span<const std::uint64_t> local_index) const {
  if (generation_ + depth > kMaxGeneration) throw PreconditionError("generation limit reached");
  if (local_index.size() != dim()) throw PreconditionError("index dimension does not match cube");
  std::vector<std::uint64_t> index(index_.size());
  for (std::size_t a = 0; a < index_.size(); ++a) {
    if (depth < 64 && (local_index[a] >> depth) != 0) throw PreconditionError("descendant index out of range");
    index[a] = depth == 0 ? index_[a] : (index_[a] << depth) | local_index[a];
  }
  return Cube(frame_, generation_ + depth, std::move(index));
}

std::vector<Cube> Cube::children() const {
  const unsigned count = 1U << dim();
  std::vector<Cube> out;
  out.reserve(count);
  for (unsigned code = 0; code < count; ++code) out.push_back(child(code));
  return out;
}

Cube Cube::parent() const {
  if (generation_ == 0) throw PreconditionError("root has no parent");
  std::vector<std::uint64_t> index(index_.size());
  for (std::size_t a = 0; a < index_.size(); ++a) index[a] = index_[a] >> 1;
  return Cube(frame_, generation_ - 1, std::move(index));
}

Cube Cube::ancestor(unsigned k) const {
  if (k > generation_) throw PreconditionError("ancestor beyond the root");
  std::vector<std::uint64_t> index(index_.size());
  for (std::size_t a = 0; a < index_.size(); ++a) index[a] = index_[a] >> k;
  return Cube(frame_, generation_ - k, std::move(index));
}

bool Cube::contains(std::span<const Rational> x) const {
  if (x.size() != dim()) throw PreconditionError("point dimension does not match cube");
  const Rational s = side();
  for (std::size_t a = 0; a < dim(); ++a) {
    const Rational lo = lower(a);
    if (x[a] < lo || x[a] >= lo + s) return false;
  }
  return true;
}

bool Cube::contains(const Cube& other) const {
  if (!same_root(other) || other.generation_ < generation_) return false;
  const unsigned shift = other.generation_ - generation_;
  for (std::size_t a = 0; a < dim(); ++a) {
    if ((other.index_[a] >> shift) != index_[a]) return false;
  }
  return true;
}

Cube Cube::as_root() const {
  Point origin(dim());
  for (std::size_t a = 0; a < dim(); ++a) origin[a] = lower(a);
  return root(std::move(origin), side());
}

bool Cube::same_root(const Cube& other) const {
  return frame_ == other.frame_ ||
         (frame_->side == other.frame_->side && frame_->origin == other.frame_->origin);
}

std::string Cube::to_string() const {
  std::ostringstream out;
  for (std::size_t a = 0; a < dim(); ++a) {
    if (a) out << "x";
    out << "[" << poremetrics::to_string(lower(a)) << "," << poremetrics::to_string(upper(a)) << ")";
  }
  return out.str();
}

bool operator==(const Cube& a, const Cube& b) {
  return a.generation_ == b.generation_ && a.index_ == b.index_ && a.same_root(b);
}

}  // namespace poremetrics
