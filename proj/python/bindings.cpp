#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "poremetrics/error.hpp"
#include "poremetrics/io.hpp"
#include "poremetrics/pores.hpp"
#include "poremetrics/stats.hpp"
#include "poremetrics/weights.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace poremetrics;

// Rationals cross the boundary as fractions.Fraction; ints and "p/q" strings are accepted too.
namespace pybind11::detail {
template <>
struct type_caster<mpq_class> {
  PYBIND11_TYPE_CASTER(mpq_class, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (!src || PyBool_Check(src.ptr()) || PyFloat_Check(src.ptr())) return false;
    try {
      if (py::isinstance<py::str>(src)) {
        value = parse_rational(src.cast<std::string>());
        return true;
      }
      if (!py::hasattr(src, "numerator") || !py::hasattr(src, "denominator")) return false;
      value = mpq_class(mpz_class(py::str(src.attr("numerator")).cast<std::string>()),
                        mpz_class(py::str(src.attr("denominator")).cast<std::string>()));
      value.canonicalize();
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }

  static handle cast(const mpq_class& r, return_value_policy, handle) {
    auto big = [](const mpz_class& z) {
      return py::reinterpret_steal<py::object>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
    };
    return py::module_::import("fractions").attr("Fraction")(big(r.get_num()), big(r.get_den())).release();
  }
};
}  // namespace pybind11::detail

namespace {

Side parse_side(const std::string& side) {
  if (side == "largest") return Side::Largest;
  if (side == "smallest") return Side::Smallest;
  throw PreconditionError("side must be \"largest\" or \"smallest\"");
}

double to_float(const Real& x) { return x.convert_to<double>(); }

py::dict ratio_dict(const RatioReport& r) {
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict d("cube_id"_a = row.cube_id, "skipped"_a = row.skipped, "note"_a = row.note,
               "depth_ok"_a = row.depth_ok);
    d["largest"] = row.largest ? py::cast(*row.largest) : py::none();
    d["smallest"] = row.smallest ? py::cast(*row.smallest) : py::none();
    d["ratio"] = row.ratio ? py::cast(*row.ratio) : py::none();
    rows.append(d);
  }
  py::dict out("s"_a = r.s, "rows"_a = rows, "warnings"_a = r.warnings);
  out["max_ratio"] = r.max_ratio ? py::cast(*r.max_ratio) : py::none();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact dyadic pore analysis, distance-weight means and pore-length statistics.";

  const auto& base = py::register_exception<Error>(m, "PoreMetricsError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<InsufficientDepthError>(m, "InsufficientDepthError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());

  m.attr("SCHEMA") = kSchema;

  // dyadic cubes
  py::class_<Cube>(m, "Cube")
      .def_static("interval", &Cube::interval, "lo"_a, "hi"_a)
      .def_static("root", &Cube::root, "origin"_a, "side"_a)
      .def_property_readonly("dim", &Cube::dim)
      .def_property_readonly("generation", &Cube::generation)
      .def_property_readonly("side", &Cube::side)
      .def_property_readonly("measure", &Cube::measure)
      .def("lower", &Cube::lower, "axis"_a = 0)
      .def("upper", &Cube::upper, "axis"_a = 0)
      .def("children", &Cube::children)
      .def("parent", &Cube::parent)
      .def("ancestor", &Cube::ancestor, "k"_a)
      .def("as_root", &Cube::as_root)
      .def("contains", py::overload_cast<const Cube&>(&Cube::contains, py::const_))
      .def(py::self == py::self)
      .def("__str__", &Cube::to_string)
      .def("__repr__", [](const Cube& c) { return "Cube(" + c.to_string() + ")"; });

  // set models
  py::class_<ContractionSequence>(m, "ContractionSequence")
      .def_static("constant", &ContractionSequence::constant, "c"_a)
      .def_static("half_harmonic", &ContractionSequence::half_harmonic)
      .def("at", &ContractionSequence::at, "n"_a)
      .def_property_readonly("name", &ContractionSequence::name)
      .def(py::self == py::self)
      .def("__repr__", [](const ContractionSequence& s) { return "ContractionSequence(" + s.name() + ")"; });

  m.def(
      "generate",
      [](const ContractionSequence& seq, unsigned level, bool reflect) {
        const GeneratedSet g = generate(seq, level, reflect);
        return py::dict("points"_a = g.points, "envelope"_a = py::make_tuple(g.envelope_lo, g.envelope_hi));
      },
      "seq"_a, "level"_a, "reflect"_a = false);
  m.def("envelope_length", &envelope_length, "seq"_a, "level"_a);

  py::class_<SetOracle>(m, "SetOracle")
      .def_static("lattice", &SetOracle::integer_lattice)
      .def_static("points", &SetOracle::finite_points, "points"_a)
      .def_static("point_cloud", &SetOracle::point_cloud, "points"_a)
      .def_static(
          "boxes",
          [](const std::vector<std::pair<Point, Point>>& boxes) {
            std::vector<Box> bs;
            for (const auto& [lo, hi] : boxes) bs.push_back({lo, hi});
            return SetOracle::box_union(std::move(bs));
          },
          "boxes"_a)
      .def_static("generated", &SetOracle::generated, "seq"_a, "level"_a, "reflect"_a = false)
      .def_static(
          "from_spec", [](const std::string& json) { return make_oracle(parse_set_spec(json)); }, "json"_a)
      .def_property_readonly("dim", &SetOracle::dim)
      .def_property_readonly("measure_zero", &SetOracle::measure_zero)
      .def("describe", &SetOracle::describe)
      .def("distance", py::overload_cast<const Rational&>(&SetOracle::distance, py::const_), "x"_a)
      .def("meets", &SetOracle::meets, "cube"_a)
      .def(
          "components",
          [](const SetOracle& e, const Rational& lo, const Rational& hi) {
            std::vector<std::pair<Rational, Rational>> out;
            for (const auto& c : e.components(lo, hi)) out.emplace_back(c.left, c.right);
            return out;
          },
          "lo"_a, "hi"_a)
      .def("__repr__", [](const SetOracle& e) { return "SetOracle(" + e.describe() + ")"; });

  m.def(
      "canonical_set_spec", [](const std::string& json) { return dump_set_spec(parse_set_spec(json)); }, "json"_a,
      "Parse a set-spec JSON document and return its canonical form.");

  // pore analysis
  py::class_<PoreFamily>(m, "PoreFamily")
      .def_readonly("root", &PoreFamily::root)
      .def_readonly("max_generation", &PoreFamily::max_generation)
      .def_readonly("tail_mass", &PoreFamily::tail_mass)
      .def_readonly("boundary_cubes", &PoreFamily::boundary_cubes)
      .def_readonly("tail_points", &PoreFamily::tail_points)
      .def_readonly("measure_zero", &PoreFamily::measure_zero)
      .def_readonly("cubes", &PoreFamily::cubes)
      .def_property_readonly("entries",
                             [](const PoreFamily& pf) {
                               py::list out;
                               for (const auto& g : pf.entries) {
                                 out.append(py::make_tuple(g.generation, g.count, g.length, g.mass));
                               }
                               return out;
                             })
      .def("enumerated_mass", &PoreFamily::enumerated_mass)
      .def("resolution", &PoreFamily::resolution);

  py::class_<LengthAnswer>(m, "LengthAnswer")
      .def_readonly("value", &LengthAnswer::value)
      .def_readonly("lo", &LengthAnswer::lo)
      .def_readonly("hi", &LengthAnswer::hi)
      .def_property_readonly("exact", &LengthAnswer::exact)
      .def_property_readonly("certainty", [](const LengthAnswer& a) { return to_string(a.certainty); })
      .def("__repr__", [](const LengthAnswer& a) {
        return "LengthAnswer(" + to_string(a.lo) + ".." + to_string(a.hi) + ", " + to_string(a.certainty) + ")";
      });

  m.def(
      "enumerate_pores",
      [](const SetOracle& e, const Cube& q0, unsigned max_gen, unsigned jobs, bool collect) {
        py::gil_scoped_release release;
        return enumerate_pores(e, q0, max_gen, {jobs, collect});
      },
      "e"_a, "q0"_a, "max_gen"_a = kDefaultMaxGen1D, "jobs"_a = 1, "collect"_a = false);
  m.def("maximal_pore_length", &maximal_pore_length, "pf"_a);
  m.def(
      "fraction_length",
      [](const PoreFamily& pf, const Rational& t, const std::string& side) {
        return fraction_length(pf, {t, parse_side(side)});
      },
      "pf"_a, "t"_a, "side"_a = "largest");
  m.def(
      "tilde_fraction_length",
      [](const SetOracle& e, const Cube& q0, const Rational& t, const std::string& side) {
        const auto comps = e.components(q0);
        return tilde_fraction_length(comps, q0, {t, parse_side(side)});
      },
      "e"_a, "q0"_a, "t"_a, "side"_a = "largest");
  m.def(
      "ratio_condition",
      [](const SetOracle& e, const std::vector<Cube>& cubes, const Rational& s, unsigned max_gen, unsigned jobs) {
        return ratio_dict(ratio_condition(e, cubes, s, max_gen, {jobs}));
      },
      "e"_a, "cubes"_a, "s"_a, "max_gen"_a = kDefaultMaxGen1D, "jobs"_a = 1);
  m.def(
      "weak_porosity_check",
      [](const SetOracle& e, const Cube& q0, const Rational& sigma, const Rational& gamma, unsigned max_gen,
         unsigned jobs) {
        const PorosityResult r = weak_porosity_check(e, q0, sigma, gamma, max_gen, {jobs});
        return py::dict("holds"_a = r.holds, "certain"_a = r.certain, "trivial"_a = r.trivial,
                        "achieved_mass"_a = r.achieved_mass, "threshold_mass"_a = r.threshold_mass,
                        "length_threshold"_a = r.length_threshold, "max_pore_length"_a = r.max_pore_length);
      },
      "e"_a, "q0"_a, "sigma"_a, "gamma"_a, "max_gen"_a = kDefaultMaxGen1D, "jobs"_a = 1);

  // weight integrals
  py::class_<MeanValue>(m, "MeanValue")
      .def_property_readonly("lo", [](const MeanValue& v) { return to_float(v.lo); })
      .def_property_readonly("hi", [](const MeanValue& v) { return to_float(v.hi); })
      .def_readonly("exact", &MeanValue::exact)
      .def_readonly("divergent", &MeanValue::divergent)
      .def_property_readonly("rational", &MeanValue::rational)
      .def_property_readonly("symbolic",
                             [](const MeanValue& v) -> std::optional<std::string> {
                               if (v.symbolic) return v.symbolic->to_string();
                               return std::nullopt;
                             })
      .def(
          "bounds",
          [](const MeanValue& v, int digits) {
            return py::make_tuple(to_string(v.lo, digits), v.divergent ? std::string("inf") : to_string(v.hi, digits));
          },
          "digits"_a = 30)
      .def("__repr__", [](const MeanValue& v) { return "MeanValue(" + v.describe() + ")"; });

  m.def(
      "mean_dist_power",
      [](const SetOracle& e, const Cube& q0, const Rational& theta, unsigned max_gen, unsigned jobs) {
        return mean_dist_power(e, q0, theta, max_gen, {jobs});
      },
      "e"_a, "q0"_a, "theta"_a, "max_gen"_a = kDefaultMaxGen1D, "jobs"_a = 1);
  m.def(
      "ap_product",
      [](const SetOracle& e, const Cube& q0, const Rational& alpha, const Rational& p, unsigned max_gen,
         unsigned jobs) {
        const ApResult r = ap_product(e, q0, alpha, p, max_gen, {jobs});
        return py::dict("product"_a = r.product, "case"_a = to_string(r.case_tag), "weight_mean"_a = r.weight_mean,
                        "dual_mean"_a = r.dual_mean);
      },
      "e"_a, "q0"_a, "alpha"_a, "p"_a, "max_gen"_a = kDefaultMaxGen1D, "jobs"_a = 1);
  m.def(
      "a1_quotient",
      [](const SetOracle& e, const Cube& q0, const Rational& alpha, unsigned max_gen, unsigned jobs) {
        return a1_quotient(e, q0, alpha, max_gen, {jobs});
      },
      "e"_a, "q0"_a, "alpha"_a, "max_gen"_a = kDefaultMaxGen1D, "jobs"_a = 1);
  m.def(
      "classify", [](const SetOracle& e, const Cube& q0) { return to_string(classify(e, q0)); }, "e"_a, "q0"_a);
  m.def(
      "comparability_constants",
      [](std::size_t n, const Rational& theta) {
        const auto c = comparability_constants(n, theta);
        return py::make_tuple(to_float(c.c1), to_float(c.c2));
      },
      "n"_a, "theta"_a);
  m.def("exponent_transfer", &exponent_transfer, "theta"_a, "p"_a, "q"_a);
  m.def("duality_exponent", &duality_exponent, "theta"_a, "p"_a);

  // pore statistics
  m.def(
      "length_law", [](const ContractionSequence& seq, unsigned level) { return length_law(seq, level).masses; },
      "seq"_a, "level"_a);
  m.def(
      "moment",
      [](const ContractionSequence& seq, unsigned level, const Rational& theta) -> py::object {
        const Moment mo = moment_recursion(seq, level, theta);
        if (mo.exact) return py::cast(*mo.exact);
        return py::float_(to_float(mo.value));
      },
      "seq"_a, "level"_a, "theta"_a);
  m.def("kakeya_product", &kakeya_product, "seq"_a, "level"_a);
  m.def("kakeya_bound", [] { return to_float(kakeya_bound()); });
  m.def(
      "markov_bounds",
      [](const ContractionSequence& seq, unsigned level, const Rational& s, const Rational& k, const Rational& kp) {
        const Rational ex = *moment_recursion(seq, level, 1).exact;
        const Rational ex_inv = *moment_recursion(seq, level, -1).exact;
        const MarkovBounds b = markov_bounds(ex, ex_inv, s, k, kp);
        return py::dict("upper_for_tilde_L"_a = b.upper_for_tilde_L, "lower_for_tilde_S"_a = b.lower_for_tilde_S,
                        "ratio_bound"_a = b.ratio_bound);
      },
      "seq"_a, "level"_a, "s"_a, "k"_a, "k_prime"_a);

  py::class_<FactoredLaw>(m, "FactoredLaw")
      .def(py::init<const ContractionSequence&, unsigned>(), "seq"_a, "level"_a)
      .def_property_readonly("level", &FactoredLaw::level)
      .def("prob_at_least", &FactoredLaw::prob_at_least, "length"_a)
      .def("prob_at_most", &FactoredLaw::prob_at_most, "length"_a)
      .def(
          "tilde_length",
          [](const FactoredLaw& f, const Rational& t, const std::string& side) {
            return f.tilde_length(t, parse_side(side));
          },
          "t"_a, "side"_a = "largest");

  m.def(
      "binomial_check",
      [](unsigned level) {
        const BinomialCheck c = binomial_check(length_law(ContractionSequence::constant(Rational(1, 2)), level));
        return py::make_tuple(c.ok, c.max_deviation);
      },
      "level"_a);
  m.def("binomial_cdf", &binomial_cdf, "n"_a, "q"_a);
  m.def(
      "normal_gap", [](unsigned n, const Rational& q) { return to_float(normal_gap(n, q)); }, "n"_a,
      "q"_a = Rational(1, 5));
  m.def(
      "fit_gap_constant",
      [](unsigned max_n) {
        const GapFit f = fit_gap_constant(max_n);
        return py::make_tuple(to_float(f.constant), f.argmax);
      },
      "max_n"_a);
  m.def(
      "divergence_scan",
      [](const Rational& t, unsigned first, unsigned last, std::optional<Rational> xi1, std::optional<Rational> xi2) {
        py::list rows;
        for (const auto& r : divergence_scan(t, first, last, {xi1, xi2})) {
          rows.append(py::dict("level"_a = r.level, "k_min"_a = r.k_min, "k_max"_a = r.k_max,
                               "tilde_ratio"_a = r.tilde_ratio, "dyadic_lo"_a = r.dyadic_lo,
                               "dyadic_hi"_a = r.dyadic_hi, "predicted_spread"_a = to_float(r.predicted_spread)));
        }
        return rows;
      },
      "t"_a, "first"_a, "last"_a, "xi1"_a = py::none(), "xi2"_a = py::none());
  m.def("small_length_constant", &small_length_constant, "t"_a, "t_prime"_a);
}
