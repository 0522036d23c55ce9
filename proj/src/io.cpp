#include "poremetrics/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "poremetrics/error.hpp"

namespace poremetrics {

using Json = nlohmann::ordered_json;

namespace {

Rational read_rational(const Json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(j.dump());
  throw PreconditionError(std::string(what) + " must be a \"p/q\" string or an integer");
}

Point read_point(const Json& j) {
  if (j.is_array()) {
    Point p;
    for (const auto& x : j) p.push_back(read_rational(x, "coordinate"));
    if (p.empty()) throw PreconditionError("empty point");
    return p;
  }
  return {read_rational(j, "point")};
}

Json write_point(const Point& p) {
  if (p.size() == 1) return to_string(p[0]);
  Json a = Json::array();
  for (const auto& x : p) a.push_back(to_string(x));
  return a;
}

const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw PreconditionError(std::string("set spec lacks \"") + key + "\"");
  return j.at(key);
}

}  // namespace

bool operator==(const SetSpec& a, const SetSpec& b) {
  if (a.type != b.type || a.points != b.points || a.contraction != b.contraction || a.level != b.level ||
      a.reflect != b.reflect || a.boxes.size() != b.boxes.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    if (a.boxes[i].lo != b.boxes[i].lo || a.boxes[i].hi != b.boxes[i].hi) return false;
  }
  return true;
}

SetSpec parse_set_spec(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& err) {
    throw PreconditionError(std::string("set spec is not valid JSON: ") + err.what());
  }
  if (!j.is_object()) throw PreconditionError("set spec must be a JSON object");
  SetSpec spec;
  const std::string type = field(j, "type").get<std::string>();
  if (type == "lattice") {
    spec.type = SetSpec::Type::Lattice;
  } else if (type == "points") {
    spec.type = SetSpec::Type::Points;
    for (const auto& p : field(j, "points")) spec.points.push_back(read_point(p));
    if (spec.points.empty()) throw PreconditionError("points set is empty");
    for (const auto& p : spec.points) {
      if (p.size() != spec.points.front().size()) throw PreconditionError("points of mixed dimension");
    }
  } else if (type == "generated") {
    spec.type = SetSpec::Type::Generated;
    const Json& c = field(j, "contraction");
    const std::string rule = field(c, "rule").get<std::string>();
    if (rule == "constant") {
      spec.contraction = ContractionSequence::constant(read_rational(field(c, "c"), "c"));
    } else if (rule == "half_harmonic") {
      spec.contraction = ContractionSequence::half_harmonic();
    } else {
      throw PreconditionError("unknown contraction rule \"" + rule + "\"");
    }
    const long level = field(j, "level").get<long>();
    if (level < 0) throw PreconditionError("level must be nonnegative");
    spec.level = static_cast<unsigned>(level);
    spec.reflect = j.value("reflect", false);
  } else if (type == "boxes") {
    spec.type = SetSpec::Type::Boxes;
    for (const auto& b : field(j, "boxes")) {
      Box box{read_point(field(b, "lo")), read_point(field(b, "hi"))};
      if (box.lo.size() != box.hi.size()) throw PreconditionError("box corners of mixed dimension");
      spec.boxes.push_back(std::move(box));
    }
    if (spec.boxes.empty()) throw PreconditionError("box union is empty");
  } else {
    throw PreconditionError("unknown set type \"" + type + "\"");
  }
  return spec;
}

SetSpec load_set_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read set spec " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_set_spec(buf.str());
}

std::string dump_set_spec(const SetSpec& spec) {
  Json j;
  switch (spec.type) {
    case SetSpec::Type::Lattice:
      j["type"] = "lattice";
      break;
    case SetSpec::Type::Points: {
      j["type"] = "points";
      Json a = Json::array();
      for (const auto& p : spec.points) a.push_back(write_point(p));
      j["points"] = a;
      break;
    }
    case SetSpec::Type::Generated: {
      j["type"] = "generated";
      const ContractionSequence& seq = *spec.contraction;
      if (seq.rule() == ContractionSequence::Rule::Constant) {
        j["contraction"] = {{"rule", "constant"}, {"c", to_string(seq.constant_value())}};
      } else {
        j["contraction"] = {{"rule", "half_harmonic"}};
      }
      j["level"] = spec.level;
      j["reflect"] = spec.reflect;
      break;
    }
    case SetSpec::Type::Boxes: {
      j["type"] = "boxes";
      Json a = Json::array();
      for (const auto& b : spec.boxes) {
        Json lo = Json::array();
        Json hi = Json::array();
        for (const auto& x : b.lo) lo.push_back(to_string(x));
        for (const auto& x : b.hi) hi.push_back(to_string(x));
        a.push_back({{"lo", lo}, {"hi", hi}});
      }
      j["boxes"] = a;
      break;
    }
  }
  return j.dump(2) + "\n";
}

SetOracle make_oracle(const SetSpec& spec) {
  switch (spec.type) {
    case SetSpec::Type::Lattice:
      return SetOracle::integer_lattice();
    case SetSpec::Type::Points:
      if (spec.points.front().size() == 1) {
        std::vector<Rational> xs;
        for (const auto& p : spec.points) xs.push_back(p[0]);
        return SetOracle::finite_points(std::move(xs));
      }
      return SetOracle::point_cloud(spec.points);
    case SetSpec::Type::Generated:
      return SetOracle::generated(*spec.contraction, spec.level, spec.reflect);
    case SetSpec::Type::Boxes:
      return SetOracle::box_union(spec.boxes);
  }
  throw UnsupportedError("unknown set type");
}

Table::Table(std::string name, std::vector<std::string> columns) : name_(std::move(name)), columns_(std::move(columns)) {}

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns_.size()) throw std::logic_error("row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char ch : cell) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << csv_cell(columns_[i]);
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
}

void Table::write_json(std::ostream& out) const {
  Json j;
  j["schema"] = kSchema;
  j["report"] = name_;
  j["columns"] = columns_;
  Json rows = Json::array();
  for (const auto& row : rows_) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[columns_[i]] = row[i];
    rows.push_back(r);
  }
  j["rows"] = rows;
  out << j.dump(2) << "\n";
}

}  // namespace poremetrics
