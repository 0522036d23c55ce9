#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "poremetrics/rational.hpp"
#include "poremetrics/set_models.hpp"

namespace poremetrics {

inline constexpr const char* kSchema = "pore-metrics/1";

/// Serializable description of a set E.
struct SetSpec {
  enum class Type { Lattice, Points, Generated, Boxes };

  Type type = Type::Lattice;
  std::vector<Point> points;  // Points: every point has the same dimension
  std::optional<ContractionSequence> contraction;  // Generated
  unsigned level = 0;
  bool reflect = false;
  std::vector<Box> boxes;  // Boxes

  friend bool operator==(const SetSpec&, const SetSpec&);
};

/// Reads the set-spec JSON. Rationals may be "p/q", terminating decimals or integers.
SetSpec parse_set_spec(const std::string& json_text);
SetSpec load_set_spec(const std::string& path);
/// Canonical JSON (fixed key order, rationals as "p/q"), newline terminated.
std::string dump_set_spec(const SetSpec& spec);

SetOracle make_oracle(const SetSpec& spec);

/// Rows of string cells rendered as CSV or as schema-tagged JSON.
class Table {
 public:
  Table(std::string name, std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  void add(std::vector<std::string> row);

  void write_csv(std::ostream& out) const;
  /// {"schema", "report", "columns", "rows": [{column: cell}]}.
  void write_json(std::ostream& out) const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Quotes a CSV cell when it holds a comma, quote or newline.
std::string csv_cell(const std::string& cell);

}  // namespace poremetrics
