#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "poremetrics/pores.hpp"
#include "poremetrics/stats.hpp"
#include "poremetrics/weights.hpp"

namespace poremetrics::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

Rational arg_rational(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const PreconditionError&) {
    throw UsageError("--" + name + ": cannot read \"" + text + "\" as a rational");
  }
}

std::vector<Rational> arg_rationals(const std::string& name, const std::string& text) {
  std::vector<Rational> values;
  for (const auto& piece : split(text, ',')) values.push_back(arg_rational(name, piece));
  return values;
}

long parse_long(const std::string& text, const std::string& what) {
  long value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) throw UsageError(what + ": \"" + text + "\" is not an integer");
  return value;
}

unsigned default_max_gen(std::size_t dim) { return dim == 1 ? kDefaultMaxGen1D : 12; }

std::string bool_cell(bool b) { return b ? "true" : "false"; }

/// Rationals print exactly unless decimals were requested.
struct Format {
  bool decimal = false;

  std::string operator()(const Rational& r) const { return decimal ? to_decimal(r, 20) : to_string(r); }

  std::string answer(const LengthAnswer& a) const {
    if (a.exact()) return (*this)(a.value);
    return (*this)(a.lo) + ".." + (*this)(a.hi);
  }
};

// Outward-rounded decimals so the printed bracket still contains the value.
std::string lower_cell(const Real& x) { return to_string(x - abs(x) * Real("1e-27"), 30); }
std::string upper_cell(const Real& x) { return to_string(x + abs(x) * Real("1e-27"), 30); }

std::pair<std::string, std::string> bracket_cells(const MeanValue& m, const Format& fmt) {
  if (auto q = m.rational()) return {fmt(*q), fmt(*q)};
  return {lower_cell(m.lo), m.divergent ? std::string("inf") : upper_cell(m.hi)};
}

struct Report {
  explicit Report(Table t) : table(std::move(t)) {}

  Table table;
  int status = kOk;
  std::vector<std::string> notes;
  Json extra = Json::object();
};

struct Common {
  std::string out;
  std::string meta;
  std::string format = "csv";
  unsigned jobs = 1;
  bool decimal = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Write the report to this file instead of stdout");
  sub->add_option("--meta", c.meta, "Sidecar metadata path (default <out>.meta.json)");
  sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--jobs", c.jobs, "Worker threads; PORE_METRICS_JOBS overrides")->check(CLI::PositiveNumber);
  sub->add_flag("--decimal", c.decimal, "Print rationals as 20-digit decimals");
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + path + " for writing");
  f << data;
  if (!f) throw PreconditionError("failed writing " + path);
}

Cube parse_box(const std::string& item) {
  Point origin;
  std::optional<Rational> side;
  for (const auto& f : split(item, 'x')) {
    if (f.size() < 5 || f.front() != '[' || f.back() != ')') {
      throw UsageError("cube \"" + item + "\" is not of the form [a,b) or [a,b)x[c,d)");
    }
    const auto ends = split(f.substr(1, f.size() - 2), ',');
    if (ends.size() != 2) throw UsageError("cube \"" + item + "\" is not of the form [a,b)");
    const Rational a = arg_rational("cubes", ends[0]);
    const Rational b = arg_rational("cubes", ends[1]);
    if (b <= a) throw UsageError("cube \"" + item + "\" is empty");
    if (side && *side != b - a) throw UsageError("\"" + item + "\" has unequal sides");
    side = b - a;
    origin.push_back(a);
  }
  return Cube::root(std::move(origin), *side);
}

void add_unit_cubes(const std::string& item, std::size_t dim, std::vector<Cube>& cubes) {
  const Cube span = parse_box(item);
  if (span.dim() != 1) throw UsageError("unit: takes a 1-D range [a,b)");
  const Rational a = span.lower(0);
  const Rational b = span.upper(0);
  if (a.get_den() != 1 || b.get_den() != 1) throw UsageError("unit: needs integer endpoints");
  const long lo = a.get_num().get_si();
  const long hi = b.get_num().get_si();
  std::vector<long> idx(dim, lo);
  while (true) {
    Point origin;
    for (long v : idx) origin.push_back(Rational(v));
    cubes.push_back(Cube::root(std::move(origin), 1));
    std::size_t axis = dim;
    while (axis > 0) {
      --axis;
      if (++idx[axis] < hi) break;
      idx[axis] = lo;
      if (axis == 0) return;
    }
  }
}

std::string reference_line(const std::vector<std::string>& args) {
  std::string line = "pore-metrics";
  for (const auto& a : args) line += " " + a;
  return line;
}

// ---- commands ----

Report cmd_gen_set(const std::string& rule, const std::string& c, long level, bool reflect, const std::string& spec_out,
                   const Format& fmt) {
  SetSpec spec;
  spec.type = SetSpec::Type::Generated;
  if (rule == "constant") {
    spec.contraction = ContractionSequence::constant(arg_rational("c", c));
  } else {
    spec.contraction = ContractionSequence::half_harmonic();
  }
  if (level < 0) throw UsageError("--level must be nonnegative");
  spec.level = static_cast<unsigned>(level);
  spec.reflect = reflect;
  const GeneratedSet g = generate(*spec.contraction, spec.level, reflect);
  Report r{Table("gen-set", {"index", "point", "certainty"})};
  for (std::size_t i = 0; i < g.points.size(); ++i) r.table.add({std::to_string(i), fmt(g.points[i]), "exact"});
  r.notes.push_back("envelope [" + to_string(g.envelope_lo) + "," + to_string(g.envelope_hi) + "], " +
                    std::to_string(g.points.size()) + " points");
  r.extra["envelope"] = {to_string(g.envelope_lo), to_string(g.envelope_hi)};
  if (!spec_out.empty()) write_file(spec_out, dump_set_spec(spec));
  return r;
}

Report cmd_pores(const SetSpec& spec, const std::string& cubes_text, std::optional<unsigned> max_gen, unsigned jobs,
                 const Format& fmt) {
  const SetOracle e = make_oracle(spec);
  const auto cubes = parse_cubes(cubes_text, spec, e.dim());
  const unsigned depth = max_gen.value_or(default_max_gen(e.dim()));
  Report r{Table("pores", {"cube_id", "generation", "length", "count", "mass", "certainty"})};
  for (const auto& q0 : cubes) {
    const std::string id = q0.to_string();
    if (!e.meets(q0)) {
      r.table.add({id, "", "", "0", "", "skipped"});
      r.notes.push_back(id + ": cube misses E, no dyadic pores below it");
      continue;
    }
    const PoreFamily pf = enumerate_pores(e, q0, depth, {jobs});
    for (const auto& g : pf.entries) {
      if (g.count == 0) continue;
      r.table.add({id, std::to_string(g.generation), fmt(g.length), std::to_string(g.count), fmt(g.mass), "exact"});
    }
    if (pf.tail_mass != 0) {
      // Pores deeper than the enumeration: length at most resolution/2, mass exact.
      r.table.add({id, ">" + std::to_string(depth), fmt(pf.resolution() / 2), "", fmt(pf.tail_mass), "interval"});
    }
    const MaximalPore m = maximal_pore(pf);
    r.notes.push_back(id + ": maximal pore length " + to_string(m.length) + " (" + std::to_string(m.count) +
                      " attaining)");
  }
  return r;
}

Report cmd_ls_ratio(const SetSpec& spec, const std::string& cubes_text, const std::string& s_text,
                    std::optional<unsigned> max_gen, unsigned jobs, const Format& fmt) {
  const SetOracle e = make_oracle(spec);
  const auto cubes = parse_cubes(cubes_text, spec, e.dim());
  const Rational s = arg_rational("s", s_text);
  const RatioReport rep = ratio_condition(e, cubes, s, max_gen.value_or(default_max_gen(e.dim())), {jobs});
  Report r{Table("ls-ratio", {"cube_id", "s", "L_s", "S_s", "ratio", "depth_ok", "certainty"})};
  r.notes = rep.warnings;
  for (const auto& row : rep.rows) {
    if (row.skipped) {
      r.table.add({row.cube_id, fmt(s), "", "", "", "false", "skipped"});
      r.notes.push_back(row.cube_id + ": " + row.note);
    } else if (!row.ratio) {
      r.table.add({row.cube_id, fmt(s), "", "", "", "false", "insufficient-depth"});
      r.notes.push_back(row.cube_id + ": " + row.note);
      r.status = kInsufficientDepth;
    } else {
      r.table.add({row.cube_id, fmt(s), fmt.answer(*row.largest), fmt.answer(*row.smallest), fmt(*row.ratio),
                   bool_cell(row.depth_ok), row.depth_ok ? "exact" : "interval"});
    }
  }
  if (rep.max_ratio) {
    r.notes.push_back("max ratio " + to_string(*rep.max_ratio));
    r.extra["max_ratio"] = to_string(*rep.max_ratio);
  }
  return r;
}

Report cmd_ap_scan(const SetSpec& spec, const std::string& cubes_text, const std::string& alpha_text,
                   const std::string& p_text, std::optional<unsigned> max_gen, unsigned jobs, const Format& fmt) {
  const SetOracle e = make_oracle(spec);
  const auto cubes = parse_cubes(cubes_text, spec, e.dim());
  const auto alphas = arg_rationals("alpha", alpha_text);
  const auto ps = arg_rationals("p", p_text);
  const unsigned depth = max_gen.value_or(default_max_gen(e.dim()));
  Report r{Table("ap-scan", {"cube_id", "alpha", "p", "product_lo", "product_hi", "case_tag", "certainty"})};
  for (const auto& q0 : cubes) {
    for (const auto& alpha : alphas) {
      for (const auto& p : ps) {
        const ApResult ap = ap_product(e, q0, alpha, p, depth, {jobs});
        const auto [lo, hi] = bracket_cells(ap.product, fmt);
        r.table.add({q0.to_string(), fmt(alpha), fmt(p), lo, hi, to_string(ap.case_tag),
                     ap.product.exact ? "exact" : "interval"});
      }
    }
  }
  return r;
}

Report cmd_porosity(const SetSpec& spec, const std::string& cubes_text, const std::string& sigma_text,
                    const std::string& gamma_text, std::optional<unsigned> max_gen, unsigned jobs, const Format& fmt) {
  const SetOracle e = make_oracle(spec);
  const auto cubes = parse_cubes(cubes_text, spec, e.dim());
  const Rational sigma = arg_rational("sigma", sigma_text);
  const Rational gamma = arg_rational("gamma", gamma_text);
  const unsigned depth = max_gen.value_or(default_max_gen(e.dim()));
  Report r{Table("porosity-check", {"cube_id", "sigma", "gamma", "max_pore_length", "length_threshold",
                                    "achieved_mass", "threshold_mass", "holds", "certainty"})};
  for (const auto& q0 : cubes) {
    const PorosityResult p = weak_porosity_check(e, q0, sigma, gamma, depth, {jobs});
    if (p.trivial) {
      r.table.add({q0.to_string(), fmt(sigma), fmt(gamma), "", "", fmt(p.achieved_mass), fmt(p.threshold_mass),
                   "true", "exact"});
      continue;
    }
    r.table.add({q0.to_string(), fmt(sigma), fmt(gamma), fmt(p.max_pore_length), fmt(p.length_threshold),
                 fmt(p.achieved_mass), fmt(p.threshold_mass), bool_cell(p.holds), p.certain ? "exact" : "interval"});
  }
  return r;
}

ContractionSequence sequence_arg(const std::string& rule, const std::string& c) {
  if (rule == "constant") return ContractionSequence::constant(arg_rational("c", c));
  return ContractionSequence::half_harmonic();
}

Report cmd_prob_stats(const std::string& rule, const std::string& c, const std::string& levels, bool divergence,
                      const std::string& t_text, const std::string& xi1, const std::string& xi2, const Format& fmt) {
  const auto [first, last] = parse_range(levels);
  if (first < 0) throw UsageError("--levels must be nonnegative");
  if (divergence) {
    DivergenceOptions opts;
    if (!xi1.empty()) opts.xi1 = arg_rational("xi1", xi1);
    if (!xi2.empty()) opts.xi2 = arg_rational("xi2", xi2);
    const Rational t = arg_rational("t", t_text);
    Report r{Table("divergence", {"level", "k_min", "k_max", "tilde_ratio", "certainty"})};
    for (const auto& row : divergence_scan(t, static_cast<unsigned>(first), static_cast<unsigned>(last), opts)) {
      r.table.add({std::to_string(row.level), std::to_string(row.k_min), std::to_string(row.k_max),
                   fmt(row.tilde_ratio), "exact"});
    }
    return r;
  }
  const ContractionSequence seq = sequence_arg(rule, c);
  const bool binomial = seq.rule() == ContractionSequence::Rule::Constant && seq.constant_value() == Rational(1, 2);
  const std::string bound = to_string(kakeya_bound(), 15);
  Report r{Table("prob-stats", {"level", "EX", "EXinv", "product", "bound_e_pi2_75", "binom_ok", "certainty"})};
  for (long n = first; n <= last; ++n) {
    const auto level = static_cast<unsigned>(n);
    const Rational ex = *moment_recursion(seq, level, 1).exact;
    const Rational ex_inv = *moment_recursion(seq, level, -1).exact;
    const std::string binom = binomial ? bool_cell(binomial_check(length_law(seq, level)).ok) : "n/a";
    r.table.add({std::to_string(n), fmt(ex), fmt(ex_inv), fmt(ex * ex_inv), bound, binom, "exact"});
  }
  return r;
}

Report cmd_fig1(const Rational& radius, const Format& fmt) {
  if (radius <= 0) throw PreconditionError("--radius must be positive");
  Report r{Table("fig1", {"sequence", "point", "certainty"})};
  const std::vector<std::pair<std::string, ContractionSequence>> groups = {
      {"c=1", ContractionSequence::constant(1)},
      {"c=1-1/(2n)", ContractionSequence::half_harmonic()},
      {"c=1/2", ContractionSequence::constant(Rational(1, 2))},
  };
  for (const auto& [label, seq] : groups) {
    unsigned m = 0;
    while (envelope_length(seq, m) < radius) {
      if (++m > kMaxExplicitLevel) throw PreconditionError("--radius needs more than the explicit level cap");
    }
    const GeneratedSet g = generate(seq, m, true);
    for (const auto& x : g.points) {
      if (abs(x) <= radius) r.table.add({label, fmt(x), "exact"});
    }
    r.extra["levels"][label] = m;
  }
  return r;
}

}  // namespace

SetSpec parse_set_arg(const std::string& text) {
  SetSpec spec;
  if (text == "lattice") return spec;
  if (text.starts_with("point:")) {
    spec.type = SetSpec::Type::Points;
    spec.points = {{arg_rational("set", text.substr(6))}};
    return spec;
  }
  if (text.starts_with("points:")) {
    spec.type = SetSpec::Type::Points;
    for (const auto& x : arg_rationals("set", text.substr(7))) spec.points.push_back({x});
    return spec;
  }
  if (text.starts_with("generated:")) {
    const auto parts = split(text.substr(10), ':');
    std::size_t i = 0;
    spec.type = SetSpec::Type::Generated;
    const std::string& rule = parts[i++];
    if (rule == "constant") {
      if (parts.size() < 3) throw UsageError("generated:constant:c:level[:reflect]");
      spec.contraction = ContractionSequence::constant(arg_rational("set", parts[i++]));
    } else if (rule == "half_harmonic") {
      spec.contraction = ContractionSequence::half_harmonic();
    } else {
      throw UsageError("unknown contraction rule \"" + rule + "\"");
    }
    if (i >= parts.size()) throw UsageError("generated set needs a level");
    const long level = parse_long(parts[i++], "level");
    if (level < 0) throw UsageError("level must be nonnegative");
    spec.level = static_cast<unsigned>(level);
    if (i < parts.size() && parts[i] == "reflect") {
      spec.reflect = true;
      ++i;
    }
    if (i != parts.size()) throw UsageError("trailing text in set \"" + text + "\"");
    return spec;
  }
  if (std::filesystem::exists(text)) return load_set_spec(text);
  throw UsageError("unknown set \"" + text + "\" (not a set expression or an existing file)");
}

std::pair<long, long> parse_range(const std::string& text) {
  const std::size_t pos = text.find("..");
  if (pos == std::string::npos) throw UsageError("range \"" + text + "\" is not of the form a..b");
  const long a = parse_long(text.substr(0, pos), "range");
  const long b = parse_long(text.substr(pos + 2), "range");
  if (b < a) throw UsageError("range \"" + text + "\" is empty");
  return {a, b};
}

std::vector<Cube> parse_cubes(const std::string& text, const SetSpec& set, std::size_t dim) {
  std::vector<Cube> cubes;
  for (const auto& item : split(text, ';')) {
    if (item.starts_with("unit:")) {
      add_unit_cubes(item.substr(5), dim, cubes);
    } else if (item.starts_with("dyadic:") || item.starts_with("sym:")) {
      const bool sym = item.starts_with("sym:");
      const auto [a, b] = parse_range(item.substr(sym ? 4 : 7));
      if (a < -1000 || b > 1000) throw UsageError("dyadic exponents must lie in -1000..1000");
      for (long k = a; k <= b; ++k) {
        const Rational side = pow2(static_cast<int>(k));
        if (sym) {
          cubes.push_back(Cube::root(Point(dim, Rational(-side)), 2 * side));
        } else {
          cubes.push_back(Cube::root(Point(dim, Rational(0)), side));
        }
      }
    } else if (item.starts_with("envelopes:")) {
      if (set.type != SetSpec::Type::Generated) throw UsageError("envelopes: needs a generated set");
      const auto [a, b] = parse_range(item.substr(10));
      if (a < 0) throw UsageError("envelope levels must be nonnegative");
      for (long m = a; m <= b; ++m) {
        cubes.push_back(Cube::interval(0, envelope_length(*set.contraction, static_cast<unsigned>(m))));
      }
    } else {
      cubes.push_back(parse_box(item));
    }
  }
  for (const auto& q : cubes) {
    if (q.dim() != dim) throw UsageError("cube " + q.to_string() + " does not match the set dimension");
  }
  return cubes;
}

unsigned resolve_jobs(unsigned flag_value) {
  const char* env = std::getenv("PORE_METRICS_JOBS");
  if (env == nullptr || *env == '\0') return flag_value;
  const long v = parse_long(env, "PORE_METRICS_JOBS");
  if (v < 1 || v > 1024) throw UsageError("PORE_METRICS_JOBS must lie in 1..1024");
  return static_cast<unsigned>(v);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dyadic pores, ratio and porosity checks, distance-weight means and pore-length statistics",
               "pore-metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  std::string set_text;
  std::string cubes_text;
  std::optional<unsigned> max_gen;
  std::string rule = "constant";
  std::string c = "1/2";
  long level = 0;
  bool reflect = false;
  std::string spec_out;
  std::string s_text;
  std::string alpha_text;
  std::string p_text;
  std::string sigma_text;
  std::string gamma_text;
  std::string levels;
  bool divergence = false;
  std::string t_text = "1/10";
  std::string xi1;
  std::string xi2;
  std::string radius = "8";

  auto add_set_cubes = [&](CLI::App* sub) {
    sub->add_option("--set", set_text, "lattice | point:x | points:a,b | generated:rule[:c]:level[:reflect] | FILE")
        ->required();
    sub->add_option("--cubes", cubes_text, "[a,b) | unit:[a,b) | dyadic:a..b | sym:a..b | envelopes:a..b; ';'-separated")
        ->required();
    sub->add_option("--max-gen", max_gen, "Enumeration depth in dyadic generations");
  };
  const auto rules = CLI::IsMember({"constant", "half_harmonic"});

  auto* gen = app.add_subcommand("gen-set", "Points of the three-copy set at a given level");
  gen->add_option("--rule", rule, "Contraction rule")->check(rules)->required();
  gen->add_option("--c", c, "Constant contraction");
  gen->add_option("--level", level, "Construction level")->required();
  gen->add_flag("--reflect", reflect, "Add the mirror image -E");
  gen->add_option("--spec-out", spec_out, "Also write the set-spec JSON here");
  add_common(gen, common);

  auto* pores = app.add_subcommand("pores", "Dyadic pore counts per generation");
  add_set_cubes(pores);
  add_common(pores, common);

  auto* ls = app.add_subcommand("ls-ratio", "Largest/smallest fraction lengths and their ratio per cube");
  add_set_cubes(ls);
  ls->add_option("--s", s_text, "Fraction s")->required();
  add_common(ls, common);

  auto* ap = app.add_subcommand("ap-scan", "A_p products of dist^-alpha per cube");
  add_set_cubes(ap);
  ap->add_option("--alpha", alpha_text, "Exponent(s), comma-separated")->required();
  ap->add_option("--p", p_text, "p value(s), comma-separated")->required();
  add_common(ap, common);

  auto* por = app.add_subcommand("porosity-check", "Weak porosity mass test per cube");
  add_set_cubes(por);
  por->add_option("--sigma", sigma_text, "Required mass share")->required();
  por->add_option("--gamma", gamma_text, "Length share of the maximal pore")->required();
  add_common(por, common);

  auto* prob = app.add_subcommand("prob-stats", "Moments of the component length law, or the divergence scan");
  prob->add_option("--rule", rule, "Contraction rule")->check(rules);
  prob->add_option("--c", c, "Constant contraction");
  prob->add_option("--levels", levels, "Level range a..b")->required();
  prob->add_flag("--divergence", divergence, "Quantile spread scan for c = 1/2");
  prob->add_option("--t", t_text, "Fraction t for the divergence scan");
  prob->add_option("--xi1", xi1, "Lower quantile level (default 2t)");
  prob->add_option("--xi2", xi2, "Upper quantile level (default 2t + 1/4)");
  add_common(prob, common);

  auto* fig = app.add_subcommand("fig1", "Points in [-r, r] of the reflected sets for c = 1, 1 - 1/(2n), 1/2");
  fig->add_option("--radius", radius, "Window half-width");
  add_common(fig, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kOk;
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    const Format fmt{common.decimal};
    const unsigned jobs = resolve_jobs(common.jobs);
    Report r{Table("", {})};
    if (name == "gen-set") {
      r = cmd_gen_set(rule, c, level, reflect, spec_out, fmt);
    } else if (name == "pores") {
      r = cmd_pores(parse_set_arg(set_text), cubes_text, max_gen, jobs, fmt);
    } else if (name == "ls-ratio") {
      r = cmd_ls_ratio(parse_set_arg(set_text), cubes_text, s_text, max_gen, jobs, fmt);
    } else if (name == "ap-scan") {
      r = cmd_ap_scan(parse_set_arg(set_text), cubes_text, alpha_text, p_text, max_gen, jobs, fmt);
    } else if (name == "porosity-check") {
      r = cmd_porosity(parse_set_arg(set_text), cubes_text, sigma_text, gamma_text, max_gen, jobs, fmt);
    } else if (name == "prob-stats") {
      r = cmd_prob_stats(rule, c, levels, divergence, t_text, xi1, xi2, fmt);
    } else {
      r = cmd_fig1(arg_rational("radius", radius), fmt);
    }

    for (const auto& note : r.notes) err << note << "\n";
    std::ostringstream data;
    if (common.format == "json") {
      r.table.write_json(data);
    } else {
      r.table.write_csv(data);
    }
    if (common.out.empty()) {
      out << data.str();
    } else {
      write_file(common.out, data.str());
    }
    const std::string meta_path = !common.meta.empty() ? common.meta
                                  : common.out.empty() ? std::string()
                                                       : common.out + ".meta.json";
    if (!meta_path.empty()) {
      Json meta;
      meta["schema"] = kSchema;
      meta["tool"] = "pore-metrics";
      meta["version"] = kVersion;
      meta["command"] = reference_line(args);
      meta["subcommand"] = name;
      meta["jobs"] = jobs;
      meta["format"] = common.format;
      meta["rows"] = r.table.rows().size();
      meta["exit_status"] = r.status;
      meta["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      meta["notes"] = r.notes;
      meta["details"] = r.extra;
      write_file(meta_path, meta.dump(2) + "\n");
    }
    return r.status;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << sub->help();
    return kUsage;
  } catch (const InsufficientDepthError& e) {
    err << "error: " << e.what() << "\n";
    return kInsufficientDepth;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  }
}

}  // namespace poremetrics::cli
