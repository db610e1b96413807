#pragma once

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "varid/identify.hpp"
#include "varid/sim.hpp"

namespace varid {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

struct ParsedGraph {
  DirectedGraph graph{1, {}};
  int dropped_self_loops = 0;
};

namespace detail {

inline ParsedGraph graph_from_lists(int n, const std::vector<std::pair<int, int>>& raw) {
  ParsedGraph out;
  std::vector<Edge> edges;
  for (const auto& [i, j] : raw) {
    if (i == j) {
      ++out.dropped_self_loops;  // self-loops are implicit; accept and drop
      continue;
    }
    edges.push_back({i, j});
  }
  out.graph = DirectedGraph(n, std::move(edges));
  return out;
}

inline ParsedGraph parse_graph_json(const json& j) {
  if (!j.contains("n") || !j.contains("edges"))
    throw InputError("graph JSON needs \"n\" and \"edges\"");
  std::vector<std::pair<int, int>> raw;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw InputError("graph JSON: edge must be a pair");
    raw.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  }
  return graph_from_lists(j.at("n").get<int>(), raw);
}

inline ParsedGraph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  if (!(in >> tok) || tok != "n") throw InputError("edge list must start with a line 'n <count>'");
  int n = 0;
  if (!(in >> n)) throw InputError("edge list: invalid node count");
  std::vector<std::pair<int, int>> raw;
  int i = 0, j = 0;
  while (in >> i >> j) raw.push_back({i, j});
  if (!in.eof()) throw InputError("edge list: trailing garbage");
  return graph_from_lists(n, raw);
}

}  // namespace detail

/// Accepts either the JSON form {"n": ..., "edges": [[i,j], ...]} or a plain
/// text edge list headed by a line "n <count>". Listed self-loops are
/// dropped; the count of dropped entries is reported for a caller warning.
inline ParsedGraph parse_graph(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return detail::parse_graph_json(json::parse(text));
    break;
  }
  return detail::parse_graph_text(text);
}

inline json graph_to_json(const DirectedGraph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back({i, j});
  return json{{"n", g.node_count()}, {"edges", edges}};
}

inline MaximalClassSet parse_class_set(const std::string& text) {
  const json j = json::parse(text);
  if (!j.contains("classes")) throw InputError("class set JSON needs \"classes\"");
  MaximalClassSet mc;
  int max_node = 0;
  for (const auto& c : j.at("classes")) {
    std::vector<int> cls;
    for (const auto& v : c) {
      const int node = v.get<int>();
      if (node < 1) throw InputError("class set JSON: node indices are 1-based");
      max_node = std::max(max_node, node);
      cls.push_back(node);
    }
    std::sort(cls.begin(), cls.end());
    cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
    mc.classes.push_back(std::move(cls));
  }
  std::sort(mc.classes.begin(), mc.classes.end());
  mc.classes.erase(std::unique(mc.classes.begin(), mc.classes.end()), mc.classes.end());
  mc.n = max_node;
  return mc;
}

inline json class_set_to_json(const MaximalClassSet& mc) {
  json classes = json::array();
  for (const auto& c : mc.classes) classes.push_back(c);
  return json{{"classes", classes}};
}

/// Parameters JSON: {"n":..., "edges":[...], "lambda":[[...]], "omega":...}.
inline VarParameters parse_parameters(const std::string& text) {
  const json j = json::parse(text);
  for (const char* key : {"n", "edges", "lambda", "omega"})
    if (!j.contains(key)) throw InputError(std::string("parameters JSON needs \"") + key + "\"");
  json graph_part{{"n", j.at("n")}, {"edges", j.at("edges")}};
  const auto parsed = detail::parse_graph_json(graph_part);
  const int n = parsed.graph.node_count();
  const auto& lam = j.at("lambda");
  if (!lam.is_array() || static_cast<int>(lam.size()) != n)
    throw InputError("parameters JSON: lambda must be an n x n array");
  Matrix lambda(n, n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(lam.at(r).size()) != n)
      throw InputError("parameters JSON: lambda must be an n x n array");
    for (int c = 0; c < n; ++c) lambda(r, c) = lam.at(r).at(c).get<double>();
  }
  VarParameters p{parsed.graph, std::move(lambda), j.at("omega").get<double>()};
  validate_parameters(p);
  return p;
}

inline json parameters_to_json(const VarParameters& p) {
  json j = graph_to_json(p.graph);
  json lam = json::array();
  for (int r = 0; r < p.lambda.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < p.lambda.cols(); ++c) row.push_back(p.lambda(r, c));
    lam.push_back(row);
  }
  j["lambda"] = lam;
  j["omega"] = p.omega;
  return j;
}

/// CSV matrix: comma-separated decimal values, one row per line, no header.
inline Matrix parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InputError("CSV: invalid number '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("CSV: no rows");
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw InputError("CSV: ragged rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

inline Matrix parse_square_csv(const std::string& text) {
  Matrix m = parse_csv(text);
  if (m.rows() != m.cols()) throw InputError("CSV: expected a square matrix");
  return m;
}

inline std::string emit_csv(const Matrix& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
  return out.str();
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline const char* to_string(DimProvenance p) {
  return p == DimProvenance::formula ? "formula" : "numeric";
}

inline const char* to_string(Verdict v) {
  return v == Verdict::identifiable ? "identifiable" : "criteria_not_satisfied";
}

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::different_dimension: return "different_dimension";
    case Criterion::same_dim_different_maxclasses: return "same_dim_different_maxclasses";
    case Criterion::cross_maxclass_condition: return "cross_maxclass_condition";
    default: return "none";
  }
}

inline json dimension_to_json(const ModelDimension& d) {
  return json{{"dim", d.value}, {"provenance", to_string(d.provenance)}};
}

inline json rank_report_to_json(const GenericRankReport& r) {
  json gap;
  if (std::isfinite(r.singular_value_gap)) gap = r.singular_value_gap;
  return json{{"rank", r.rank},
              {"trials", r.trials},
              {"singular_value_gap", gap},
              {"seeds_used", r.seeds_used}};
}

inline json jacobian_to_json(const JacobianBundle& b, const GenericRankReport& rank) {
  auto edge_label = [](const char* prefix, const Edge& e) {
    return std::string(prefix) + "_" + std::to_string(e.first) + "_" + std::to_string(e.second);
  };
  json rows = json::array();
  for (const auto& e : b.row_edges) rows.push_back(edge_label("lambda", e));
  rows.push_back("omega");
  json cols_ext = json::array(), cols_red = json::array();
  for (const auto& e : b.extended_cols) cols_ext.push_back(edge_label("sigma", e));
  for (const auto& e : b.reduced_cols) cols_red.push_back(edge_label("sigma", e));
  return json{{"row_labels", rows},
              {"col_labels_extended", cols_ext},
              {"col_labels_reduced", cols_red},
              {"extended", matrix_to_json(b.extended)},
              {"reduced", matrix_to_json(b.reduced)},
              {"rank_report", rank_report_to_json(rank)}};
}

inline json verdict_to_json(const IdentifiabilityVerdict& v) {
  json witnesses;
  if (v.witness_first && v.witness_second)
    witnesses = json{{"first", {v.witness_first->first, v.witness_first->second}},
                     {"second", {v.witness_second->first, v.witness_second->second}}};
  return json{{"pair", {v.pair.first + 1, v.pair.second + 1}},
              {"verdict", to_string(v.verdict)},
              {"criterion", to_string(v.criterion)},
              {"witnesses", witnesses},
              {"dims", {dimension_to_json(v.dim_first), dimension_to_json(v.dim_second)}}};
}

inline json recovery_to_json(const RecoveryReport& r) {
  json candidates = json::array(), removed = json::array();
  for (const auto& c : r.candidate_sets) candidates.push_back(c);
  for (const auto& c : r.removed_sets) removed.push_back(c);
  json j = class_set_to_json(r.classes);
  j["candidates"] = candidates;
  j["removed"] = removed;
  j["weakly_connected"] = r.weakly_connected;
  return j;
}

inline std::string dump(const json& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

}  // namespace varid
