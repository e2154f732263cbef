#pragma once

// Instance documents (JSON), run records and CSV output.
//
// Instance schema:
//   {"dim": 1|2, "norm": "L1"|"L2", "B": <positive>, "agents": [{"x": [..dim numbers..], "b": <0..B>}, ...]}
// "norm" is optional for dim 1 (must be L1 if given) and required for dim 2.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpfl/core.hpp"
#include "dpfl/hardness.hpp"
#include "dpfl/mechanisms.hpp"
#include "dpfl/sp_harness.hpp"

namespace dpfl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::size_t line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Byte offsets where each element of the top-level "agents" array starts;
/// empty if the array cannot be located. Strings are skipped correctly.
inline std::vector<std::size_t> agent_offsets(const std::string& text) {
  std::vector<std::size_t> out;
  int depth = 0;
  bool in_string = false, escaped = false;
  std::size_t key_start = 0;
  std::string last_key;
  int agents_depth = -1;
  bool expect_element = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (ch == '\\') escaped = true;
      else if (ch == '"') {
        in_string = false;
        last_key = text.substr(key_start, i - key_start);
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (expect_element && ch != ']') {
      out.push_back(i);
      expect_element = false;
    }
    switch (ch) {
      case '"':
        in_string = true;
        key_start = i + 1;
        break;
      case '{':
        ++depth;
        break;
      case '}':
        --depth;
        break;
      case '[':
        ++depth;
        if (agents_depth < 0 && depth == 2 && last_key == "agents") {
          agents_depth = depth;
          expect_element = true;
        }
        break;
      case ']':
        if (depth == agents_depth) return out;
        --depth;
        break;
      case ',':
        if (depth == agents_depth) expect_element = true;
        break;
      default: break;
    }
  }
  return out;
}

inline const nlohmann::json& require_key(const nlohmann::json& obj, const char* key, const std::string& source,
                                         std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(source, line, std::string("missing key \"") + key + "\"");
  return *it;
}

inline double require_number(const nlohmann::json& v, const std::string& what, const std::string& source,
                             std::size_t line) {
  if (!v.is_number()) throw ParseError(source, line, what + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(source, line, what + " must be finite");
  return d;
}

}  // namespace detail

/// Parses an instance document; `source` names it in error messages.
inline Instance parse_instance_text(const std::string& text, const std::string& source = "<input>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t line = detail::line_at(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    throw ParseError(source, line, "malformed JSON: " + (pos == std::string::npos ? msg : msg.substr(pos)));
  }
  if (!doc.is_object()) throw ParseError(source, 1, "instance must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "dim" && key != "norm" && key != "B" && key != "agents")
      throw ParseError(source, 1, "unknown key \"" + key + "\"");

  const nlohmann::json& jdim = detail::require_key(doc, "dim", source, 1);
  if (!jdim.is_number_integer() || (jdim.get<int>() != 1 && jdim.get<int>() != 2))
    throw ParseError(source, 1, "dim must be 1 or 2");
  const int dim = jdim.get<int>();

  Norm norm = Norm::L1;
  const auto jnorm = doc.find("norm");
  if (jnorm != doc.end()) {
    if (!jnorm->is_string() || (*jnorm != "L1" && *jnorm != "L2"))
      throw ParseError(source, 1, "norm must be \"L1\" or \"L2\"");
    norm = *jnorm == "L1" ? Norm::L1 : Norm::L2;
    if (dim == 1 && norm != Norm::L1) throw ParseError(source, 1, "dim/norm mismatch: a 1D instance has no L2 norm");
  } else if (dim == 2) {
    throw ParseError(source, 1, "dim/norm mismatch: a 2D instance needs \"norm\"");
  }

  const double B = detail::require_number(detail::require_key(doc, "B", source, 1), "B", source, 1);
  if (!(B > 0.0)) throw ParseError(source, 1, "B must be positive");

  const nlohmann::json& jagents = detail::require_key(doc, "agents", source, 1);
  if (!jagents.is_array() || jagents.empty()) throw ParseError(source, 1, "agents must be a non-empty array");
  const std::vector<std::size_t> offsets = detail::agent_offsets(text);
  std::vector<Agent> agents;
  agents.reserve(jagents.size());
  for (std::size_t i = 0; i < jagents.size(); ++i) {
    const std::size_t line = i < offsets.size() ? detail::line_at(text, offsets[i]) : 1;
    const std::string who = "agent " + std::to_string(i);
    const nlohmann::json& ja = jagents[i];
    if (!ja.is_object()) throw ParseError(source, line, who + " must be an object");
    for (const auto& [key, value] : ja.items())
      if (key != "x" && key != "b") throw ParseError(source, line, who + ": unknown key \"" + key + "\"");
    const nlohmann::json& jx = detail::require_key(ja, "x", source, line);
    if (!jx.is_array() || jx.size() != static_cast<std::size_t>(dim))
      throw ParseError(source, line, who + ": x must have " + std::to_string(dim) + " coordinate(s)");
    Agent a;
    a.id = static_cast<int>(i);
    a.location.x = detail::require_number(jx[0], who + " x", source, line);
    if (dim == 2) a.location.y = detail::require_number(jx[1], who + " y", source, line);
    a.b = detail::require_number(detail::require_key(ja, "b", source, line), who + " b", source, line);
    if (a.b < 0.0) throw ParseError(source, line, who + ": preferred distance is negative");
    if (a.b > B) throw ParseError(source, line, who + ": preferred distance exceeds B");
    agents.push_back(a);
  }
  return Instance(std::move(agents), dim, norm, B);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Instance parse_instance(const std::string& path) { return parse_instance_text(read_file(path), path); }

/// One agent per line. Numbers use the shortest decimal that round-trips.
inline std::string instance_to_json(const Instance& inst) {
  auto num = [](double v) { return nlohmann::json(v).dump(); };
  std::string s = "{\"dim\": " + std::to_string(inst.dim());
  if (inst.dim() == 2) s += std::string(", \"norm\": \"") + to_string(inst.norm()) + "\"";
  s += ", \"B\": " + num(inst.bound()) + ", \"agents\": [\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Agent& a = inst.agent(i);
    s += "  {\"x\": [" + num(a.location.x);
    if (inst.dim() == 2) s += ", " + num(a.location.y);
    s += "], \"b\": " + num(a.b) + "}";
    s += i + 1 < inst.size() ? ",\n" : "\n";
  }
  s += "]}\n";
  return s;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

inline void write_instance(const Instance& inst, const std::string& path) { write_text(path, instance_to_json(inst)); }

// ---------------------------------------------------------------------------
// Run records

struct RunRecord {
  std::string instance_ref;
  std::string mechanism;
  std::vector<Point> facilities;
  std::size_t n = 0;
  double B = 0.0;
  double sc = 0.0;
  double opt = 0.0;
  double gap = 0.0;
  double bound_rhs = 0.0;
  bool within_bound = false;
};

inline RunRecord make_run_record(const std::string& ref, const MechanismSel& sel, const Instance& inst) {
  RunRecord r;
  r.instance_ref = ref;
  r.mechanism = to_string(sel.id);
  if (sel.id == Mechanism::k_median) r.mechanism += "(k=" + std::to_string(sel.k) + ")";
  const Placement p = run_mechanism(sel, inst);
  r.facilities = p.facilities;
  r.n = inst.size();
  r.B = inst.bound();
  r.sc = p.social_cost;
  r.opt = oracle_for(sel, inst).opt_value;
  r.gap = r.sc - r.opt;
  r.bound_rhs = additive_bound(sel, inst, r.opt, p.facilities);
  r.within_bound = r.sc <= r.bound_rhs + 1e-9;
  return r;
}

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline const char* csv_header() { return "instance,n,B,mechanism,sc,opt,gap,bound,within_bound\n"; }

inline std::string to_csv_row(const RunRecord& r) {
  return csv_field(r.instance_ref) + "," + std::to_string(r.n) + "," + format_double(r.B) + "," +
         csv_field(r.mechanism) + "," + format_double(r.sc) + "," + format_double(r.opt) + "," + format_double(r.gap) +
         "," + format_double(r.bound_rhs) + "," + (r.within_bound ? "true" : "false") + "\n";
}

inline std::string to_csv(const std::vector<RunRecord>& rows) {
  std::string s = csv_header();
  for (const RunRecord& r : rows) s += to_csv_row(r);
  return s;
}

// ---------------------------------------------------------------------------
// JSON summaries for CLI output

inline nlohmann::json points_json(const std::vector<Point>& pts, int dim) {
  nlohmann::json a = nlohmann::json::array();
  for (const Point& p : pts) a.push_back(dim == 1 ? nlohmann::json::array({p.x}) : nlohmann::json::array({p.x, p.y}));
  return a;
}

inline std::string hex_digest(std::uint64_t d) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
  return buf;
}

inline nlohmann::json to_json(const ObservationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"description", c.description},
                      {"relation", c.relation},
                      {"expected", c.expected},
                      {"actual", c.actual},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  return {{"obs_id", r.obs_id}, {"instance_digest", hex_digest(r.instance_digest)}, {"all_pass", r.all_pass},
          {"checks", checks}};
}

inline nlohmann::json to_json(const DeviationResult& d) {
  return {{"agent_ids", d.agent_ids},
          {"best_reports", d.best_reports},
          {"true_cost_honest", d.true_cost_honest},
          {"true_cost_deviating", d.true_cost_deviating},
          {"gain", d.gain},
          {"grid_pitch", d.grid_pitch},
          {"evaluations", d.evaluations},
          {"reduced_grid", d.reduced_grid}};
}

inline nlohmann::json to_json(const AuditReport& r, bool expect_sp) {
  return {{"mechanism", r.mechanism},
          {"instances", r.instances},
          {"deviation_searches", r.deviation_searches},
          {"worst_gap", r.worst_gap},
          {"worst_gap_per_nB", r.worst_gap_per_nB},
          {"worst_gap_instance", hex_digest(r.worst_gap_instance)},
          {"worst_gain", r.worst_gain},
          {"worst_gain_instance", hex_digest(r.worst_gain_instance)},
          {"worst_deviation", to_json(r.worst_deviation)},
          {"bound_violations", r.bound_violations},
          {"strategy_proof_expected", expect_sp},
          {"pass", r.pass(expect_sp)}};
}

}  // namespace dpfl
