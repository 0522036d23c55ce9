#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poremetrics/cube.hpp"
#include "poremetrics/rational.hpp"
#include "poremetrics/set_models.hpp"

namespace poremetrics {

/// Default enumeration depth for sets in the real line.
inline constexpr unsigned kDefaultMaxGen1D = 40;

/// Pores of one generation below the root, aggregated.
struct GenerationMass {
  unsigned generation = 0;  // relative to the root cube
  std::uint64_t count = 0;
  Rational length;          // l(Q) = 2^-generation l(Q0)
  Rational mass;            // count * |Q|
};

/// Truncated enumeration of the dyadic pores of Q0: dyadic subcubes that miss E
/// while their dyadic parent meets E.
struct PoreFamily {
  Cube root;
  std::vector<GenerationMass> entries;  // generations 1..max_generation, in order
  unsigned max_generation = 0;
  Rational tail_mass;                   // |Q0| - sum of enumerated masses
  std::uint64_t boundary_cubes = 0;     // cubes of generation max_generation still meeting E
  std::optional<std::uint64_t> tail_points;  // |E cap tail| when E is point-like there
  bool measure_zero = true;             // whether |E| = 0 is known
  std::vector<Cube> cubes;              // explicit pores, only when collected

  Rational enumerated_mass() const;
  /// Smallest enumerated length 2^-J l(Q0).
  Rational resolution() const;
};

struct EnumerateOptions {
  unsigned jobs = 1;
  bool collect_cubes = false;
  std::size_t collect_limit = std::size_t{1} << 20;
};

/// Breadth-first over the dyadic subcubes of q0 down to max_gen generations.
/// Throws PreconditionError when q0 misses E (the whole-cube fast path applies).
PoreFamily enumerate_pores(const SetOracle& e, const Cube& q0, unsigned max_gen, const EnumerateOptions& options = {});

struct MaximalPore {
  Rational length;
  std::uint64_t count = 0;
  unsigned generation = 0;
};

/// l(M(Q0)) together with how many pores attain it.
MaximalPore maximal_pore(const PoreFamily& pf);
Rational maximal_pore_length(const PoreFamily& pf);

enum class Side { Largest, Smallest };
enum class Certainty { Exact, IntervalBound };

std::string to_string(Certainty c);

struct FractionQuery {
  Rational t;
  Side side = Side::Largest;
};

struct LengthAnswer {
  Rational value;
  Certainty certainty = Certainty::Exact;
  Rational lo;  // equals value when exact
  Rational hi;

  bool exact() const { return certainty == Certainty::Exact; }
};

/// [lo, hi] bracket of the pore mass with l(Q) >= L (resp. <= L, < L, > L).
struct MassBracket {
  Rational lo;
  Rational hi;
};
MassBracket mass_at_least(const PoreFamily& pf, const Rational& length);
MassBracket mass_at_most(const PoreFamily& pf, const Rational& length);
MassBracket mass_below(const PoreFamily& pf, const Rational& length);
MassBracket mass_above(const PoreFamily& pf, const Rational& length);

/// Largest: max{L : mass(l >= L) >= t|Q0|}. Smallest: min{L : mass(l <= L) >= t|Q0|}.
/// Throws InsufficientDepthError when tail_mass >= min(t, 1 - t)|Q0|.
LengthAnswer fraction_length(const PoreFamily& pf, const FractionQuery& fq);

/// The same thresholds over connected components of Q0 minus E (exact).
LengthAnswer tilde_fraction_length(std::span<const Component> components, const Cube& q0, const FractionQuery& fq);

struct RatioRow {
  std::string cube_id;
  bool skipped = false;
  std::string note;
  std::optional<LengthAnswer> largest;
  std::optional<LengthAnswer> smallest;
  /// L(s)/S(s); an upper bound when S is only bracketed.
  std::optional<Rational> ratio;
  bool depth_ok = false;
};

struct RatioReport {
  Rational s;
  std::vector<RatioRow> rows;
  std::optional<Rational> max_ratio;  // fitted C0
  std::vector<std::string> warnings;
};

/// Per-cube L(s)/S(s). Cubes missing E are skipped with a note; s outside
/// (0, (1 + 2^n)^-1) only produces a warning.
RatioReport ratio_condition(const SetOracle& e, std::span<const Cube> cubes, const Rational& s, unsigned max_gen,
                            const EnumerateOptions& options = {});

struct PorosityResult {
  bool holds = false;
  bool certain = true;   // false when the tail straddles the decision
  bool trivial = false;  // Q0 misses E
  Rational achieved_mass;     // mass of pores with l(Q) >= gamma l(M(Q0))
  Rational threshold_mass;    // sigma |Q0|
  Rational length_threshold;  // gamma l(M(Q0))
  Rational max_pore_length;
};

/// Checks sum_{Q in D_E(Q0), l(Q) >= gamma l(M(Q0))} |Q| >= sigma |Q0|.
PorosityResult weak_porosity_check(const SetOracle& e, const Cube& q0, const Rational& porosity_sigma,
                                   const Rational& gamma, unsigned max_gen, const EnumerateOptions& options = {});

}  // namespace poremetrics
