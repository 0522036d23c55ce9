#include <cmath>
#include <set>
#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "poremetrics/error.hpp"
#include "poremetrics/set_models.hpp"

using namespace poremetrics;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

std::vector<Rational> qs(std::initializer_list<Rational> v) { return v; }

// Independent hand-rolled generator: three copies glued at the running endpoint.
std::vector<Rational> naive_generate(const std::vector<Rational>& cs) {
  std::vector<Rational> e{q(0), q(1)};
  for (const auto& c : cs) {
    const Rational b = e.back();
    std::vector<Rational> next = e;
    for (const auto& x : e) next.push_back(b + c * x);
    for (const auto& x : e) next.push_back(b * (1 + c) + x);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    e = std::move(next);
  }
  return e;
}

std::multiset<Rational> gap_lengths(const std::vector<Rational>& pts) {
  std::multiset<Rational> out;
  for (std::size_t i = 1; i < pts.size(); ++i) out.insert(pts[i] - pts[i - 1]);
  return out;
}

}  // namespace

TEST_CASE("generate: level 0 and level 1") {
  const auto half = ContractionSequence::constant(q(1, 2));
  const GeneratedSet g0 = generate(half, 0);
  CHECK(g0.points == qs({q(0), q(1)}));
  CHECK(g0.envelope_lo == 0);
  CHECK(g0.envelope_hi == 1);

  const GeneratedSet g1 = generate(half, 1);
  CHECK(g1.points == qs({q(0), q(1), q(3, 2), q(5, 2)}));
  CHECK(g1.envelope_hi == q(5, 2));

  const GeneratedSet h1 = generate(ContractionSequence::half_harmonic(), 1);
  CHECK(h1.points == g1.points);
}

TEST_CASE("generate with c = 1 gives consecutive integers") {
  const GeneratedSet g = generate(ContractionSequence::constant(1), 2);
  REQUIRE(g.points.size() == 10);
  for (long i = 0; i < 10; ++i) CHECK(g.points[static_cast<std::size_t>(i)] == i);
  CHECK(g.envelope_hi == 9);
}

TEST_CASE("generate agrees with the naive three-copy construction") {
  for (unsigned level = 0; level <= 7; ++level) {
    for (const auto& seq : {ContractionSequence::constant(q(1, 2)), ContractionSequence::constant(q(2, 3)),
                            ContractionSequence::half_harmonic()}) {
      std::vector<Rational> cs;
      for (unsigned i = 1; i <= level; ++i) cs.push_back(seq.rule() == ContractionSequence::Rule::HalfHarmonic
                                                              ? Rational(1 - Rational(1, 2 * i))
                                                              : seq.constant_value());
      const auto expected = naive_generate(cs);
      const GeneratedSet g = generate(seq, level);
      CHECK(g.points == expected);
      CHECK(g.points.size() == static_cast<std::size_t>(std::pow(3, level)) + 1);
      CHECK(g.envelope_hi == expected.back());
    }
  }
}

TEST_CASE("envelope length recursion |Q_n| = (2 + c_n)|Q_{n-1}|") {
  const auto seq = ContractionSequence::half_harmonic();
  Rational len(1);
  for (unsigned n = 1; n <= 12; ++n) {
    len *= 2 + (1 - Rational(1, 2 * n));
    CHECK(envelope_length(seq, n) == len);
    if (n <= 9) CHECK(generate(seq, n).envelope_hi == len);
  }
}

TEST_CASE("component lengths double and contract level by level") {
  for (const auto& seq : {ContractionSequence::constant(q(1, 2)), ContractionSequence::half_harmonic()}) {
    auto prev = gap_lengths(generate(seq, 0).points);
    for (unsigned n = 1; n <= 8; ++n) {
      const auto now = gap_lengths(generate(seq, n).points);
      std::multiset<Rational> expected;
      for (const auto& l : prev) {
        expected.insert(l);
        expected.insert(l);
        expected.insert(seq.at(n) * l);
      }
      CHECK(now == expected);
      prev = now;
    }
  }
}

TEST_CASE("reflection is symmetric about 0") {
  const GeneratedSet g = generate(ContractionSequence::constant(q(1, 2)), 3, true);
  for (const auto& x : g.points) CHECK(std::binary_search(g.points.begin(), g.points.end(), Rational(-x)));
  CHECK(g.envelope_lo == -g.envelope_hi);
  CHECK(g.points.size() == 2 * (27 + 1) - 1);
}

TEST_CASE("distance examples") {
  CHECK(SetOracle::integer_lattice().distance(q(7, 3)) == q(1, 3));
  CHECK(SetOracle::integer_lattice().distance(q(-7, 3)) == q(1, 3));
  CHECK(SetOracle::finite_points({q(0), q(1)}).distance(q(1, 2)) == q(1, 2));
  CHECK(SetOracle::generated(ContractionSequence::constant(q(1, 2)), 1).distance(q(5, 4)) == q(1, 4));
}

TEST_CASE("distance vanishes on E and is 1-Lipschitz") {
  const auto e = SetOracle::generated(ContractionSequence::half_harmonic(), 5, true);
  const GeneratedSet g = generate(ContractionSequence::half_harmonic(), 5, true);
  for (const auto& x : g.points) CHECK(e.distance(x) == 0);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const Rational x = q(static_cast<long>(rng() % 20001) - 10000, 97);
    const Rational y = q(static_cast<long>(rng() % 20001) - 10000, 89);
    const Rational dx = e.distance(x);
    const Rational dy = e.distance(y);
    CHECK(abs(dx - dy) <= abs(x - y));
    // Independent nearest-point scan.
    Rational best = abs(Rational(x - g.points.front()));
    for (const auto& p : g.points) best = std::min(best, Rational(abs(x - p)));
    CHECK(dx == best);
  }
}

TEST_CASE("n-D distances are exact when the squared distance is a square") {
  const auto cloud = SetOracle::point_cloud({{q(0), q(0)}, {q(3), q(4)}});
  const Point x{q(3), q(0)};
  const DistanceValue d = cloud.distance(x);
  CHECK(d.squared == 9);
  REQUIRE(d.exact);
  CHECK(*d.exact == 3);
  const Point y{q(1), q(1)};
  const DistanceValue dy = cloud.distance(y);
  CHECK(dy.squared == 2);
  CHECK_FALSE(dy.exact);
  CHECK(dy.lo <= sqrt(Real(2)));
  CHECK(dy.hi >= sqrt(Real(2)));
  CHECK(dy.hi - dy.lo < Real("1e-30"));
}

TEST_CASE("components examples") {
  const auto lattice = SetOracle::integer_lattice();
  const auto c0 = lattice.components(q(0), q(1));
  REQUIRE(c0.size() == 1);
  CHECK(c0[0].left == 0);
  CHECK(c0[0].right == 1);

  const auto g = SetOracle::generated(ContractionSequence::constant(q(1, 2)), 1);
  const auto c1 = g.components(Cube::interval(0, q(5, 2)));
  REQUIRE(c1.size() == 3);
  CHECK(c1[0].length() == 1);
  CHECK(c1[1].length() == q(1, 2));
  CHECK(c1[2].length() == 1);
  CHECK(c1[1].left == 1);
  CHECK(c1[1].right == q(3, 2));

  const auto f = SetOracle::finite_points({q(0), q(1)});
  const auto c2 = f.components(q(-1), q(2));
  REQUIRE(c2.size() == 3);
  CHECK(c2[0].left == -1);
  CHECK(c2[0].right == 0);
  CHECK(c2[0].clipped_left());
  CHECK_FALSE(c2[0].e_left.has_value());
  CHECK(c2[2].right == 2);
  CHECK(c2[1].length() == 1);
  CHECK_FALSE(c2[1].clipped_left());
  CHECK_FALSE(c2[1].clipped_right());
}

TEST_CASE("components cover the window for point sets") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(q(static_cast<long>(rng() % 200) - 100, 1 + static_cast<long>(rng() % 5)));
    const auto e = SetOracle::finite_points(pts);
    const Rational lo = q(static_cast<long>(rng() % 100) - 60, 3);
    const Rational hi = lo + q(1 + static_cast<long>(rng() % 60), 2);
    Rational total(0);
    Rational last = lo;
    for (const auto& c : e.components(lo, hi)) {
      CHECK(c.left < c.right);
      CHECK(c.left >= last);
      last = c.right;
      total += c.length();
      for (const auto& p : pts) CHECK_FALSE((p > c.left && p < c.right));
    }
    CHECK(total == hi - lo);
  }
}

TEST_CASE("components need a 1-D oracle") {
  const auto cloud = SetOracle::point_cloud({{q(0), q(0)}});
  CHECK_THROWS(cloud.components(q(0), q(1)));
}

TEST_CASE("meets uses half-open cubes") {
  const auto lattice = SetOracle::integer_lattice();
  CHECK(lattice.meets(Cube::interval(0, 1)));
  CHECK_FALSE(lattice.meets(Cube::interval(q(1, 4), q(1, 2))));
  CHECK_FALSE(lattice.meets(Cube::interval(0, 1).child(1)));
  const auto boxes = SetOracle::box_union({Box{{q(0), q(0)}, {q(1), q(1)}}});
  CHECK(boxes.meets(Cube::root({q(1), q(1)}, 1)));
  CHECK_FALSE(boxes.meets(Cube::root({q(2), q(0)}, 1)));
  CHECK_FALSE(boxes.measure_zero());
  CHECK(lattice.measure_zero());
}
