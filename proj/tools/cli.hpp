#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "poremetrics/cube.hpp"
#include "poremetrics/error.hpp"
#include "poremetrics/io.hpp"

namespace poremetrics::cli {

enum ExitCode { kOk = 0, kUsage = 1, kPrecondition = 2, kInsufficientDepth = 3 };

/// Malformed command-line input (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// lattice | point:x | points:a,b,... | generated:rule[:c]:level[:reflect] | path to a set-spec JSON file.
SetSpec parse_set_arg(const std::string& text);

/// Semicolon-separated items: [a,b) or [a,b)x[c,d)..., unit:[a,b), dyadic:a..b ([0,2^k)^n),
/// sym:a..b ([-2^k,2^k)^n), envelopes:a..b (generated sets only).
std::vector<Cube> parse_cubes(const std::string& text, const SetSpec& set, std::size_t dim);

/// "a..b" with a <= b.
std::pair<long, long> parse_range(const std::string& text);

/// --jobs value, replaced by PORE_METRICS_JOBS when that is set.
unsigned resolve_jobs(unsigned flag_value);

/// Runs one command line (without the program name). Data goes to `out` unless --out is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace poremetrics::cli
