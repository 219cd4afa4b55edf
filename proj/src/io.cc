#include "seep/io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "seep/errors.h"

namespace seep {
namespace {

using nlohmann::json;

std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r') {
      ++i;
    }
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::int64_t ParseId(std::string_view tok, std::size_t line_no) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw DataError("line " + std::to_string(line_no) + ": node id '" +
                    std::string(tok) + "' is not an integer");
  }
  if (v < 0) {
    throw DataError("line " + std::to_string(line_no) + ": negative node id");
  }
  return v;
}

double ParseWeight(std::string_view tok, std::size_t line_no) {
  const std::string s(tok);
  std::size_t used = 0;
  double w = 0.0;
  try {
    w = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(w)) {
    throw DataError("line " + std::to_string(line_no) + ": weight '" + s +
                    "' is not a finite number");
  }
  if (w < 0.0) {
    throw DataError("line " + std::to_string(line_no) + ": negative weight");
  }
  return w;
}

std::optional<int> NodesPragma(std::string_view line) {
  constexpr std::string_view kPrefix = "# nodes:";
  if (line.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  const auto toks = Tokens(line.substr(kPrefix.size()));
  if (toks.size() != 1) return std::nullopt;
  int n = 0;
  auto [ptr, ec] =
      std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), n);
  if (ec != std::errc() || ptr != toks[0].data() + toks[0].size() || n < 0) {
    return std::nullopt;
  }
  return n;
}

[[noreturn]] void SchemaError(const std::string& path, const std::string& msg) {
  throw DataError("schema violation at " + path + ": " + msg);
}

}  // namespace

Graph ReadEdgeList(std::istream& in, std::optional<int> n) {
  std::vector<Edge> edges;
  std::optional<int> pragma_n;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = Tokens(line);
    if (toks.empty()) continue;
    if (toks[0].front() == '#') {
      if (auto p = NodesPragma(line)) pragma_n = p;
      continue;
    }
    if (toks.size() < 2 || toks.size() > 3) {
      throw DataError("line " + std::to_string(line_no) +
                      ": expected 'u v [w]', got " +
                      std::to_string(toks.size()) + " fields");
    }
    Edge e;
    e.u = ParseId(toks[0], line_no);
    e.v = ParseId(toks[1], line_no);
    e.w = toks.size() == 3 ? ParseWeight(toks[2], line_no) : 1.0;
    edges.push_back(e);
  }
  if (in.bad()) throw DataError("read error after line " + std::to_string(line_no));
  return GraphFromEdges(edges, n.has_value() ? n : pragma_n);
}

Graph ReadEdgeListFile(const std::string& path, std::optional<int> n) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path + "'");
  return ReadEdgeList(in, n);
}

void WriteEdgeList(std::ostream& out, const Graph& graph) {
  out << "# nodes: " << graph.num_nodes() << '\n';
  const SparseMatrix& a = graph.adjacency();
  std::ostringstream w;
  w.precision(17);
  for (int c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      const int r = static_cast<int>(it.row());
      if (r > c) continue;
      const double weight = r == c ? it.value() / 2.0 : it.value();
      out << r << '\t' << c;
      if (weight != 1.0) {
        w.str("");
        w << weight;
        out << '\t' << w.str();
      }
      out << '\n';
    }
  }
}

json MatrixToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json HierarchyToJson(const HierarchyResult& result, const json& meta) {
  json doc;
  doc["n"] = result.n;
  json levels = json::array();
  for (const HierarchyLevel& level : result.levels) {
    json l;
    l["k"] = level.k;
    l["membership"] = level.composed.assignment();
    l["omega"] = MatrixToJson(level.affinity.values);
    l["relative_membership"] = level.relative.assignment();
    const LevelDiagnostics& d = level.diagnostics;
    if (!d.mean_errors.empty()) {
      l["mean_errors"] = d.mean_errors;
      l["minima"] = d.minima;
      l["null_fit"] = {{"sigma", d.null_fit.sigma}, {"msle", d.null_fit.msle}};
      l["conditional_fit"] = {{"sigma", d.conditional_fit.sigma},
                              {"msle", d.conditional_fit.msle}};
    }
    levels.push_back(std::move(l));
  }
  doc["levels"] = std::move(levels);
  doc["finest"] = {{"k_hat", result.finest.k_hat},
                   {"k_plus", result.finest.k_plus},
                   {"k_minus", result.finest.k_minus},
                   {"r", result.finest.r},
                   {"fallback_single_group", result.finest.fallback_single_group},
                   {"capped", result.finest.capped}};
  if (!meta.is_null()) doc["meta"] = meta;
  return doc;
}

json TruthToJson(const GroundTruth& truth, const json& meta) {
  json doc;
  const int n = truth.partitions.empty() ? 0 : truth.partitions[0].num_items();
  doc["n"] = n;
  AffinityMatrix fine;
  fine.values = truth.omega;
  if (!truth.partitions.empty()) fine.group_sizes = truth.partitions[0].group_sizes();
  json levels = json::array();
  for (const Partition& p : truth.partitions) {
    // Groups of p as a partition of the finest groups.
    std::vector<int> coarse(truth.partitions[0].num_groups());
    for (int i = 0; i < n; ++i) coarse[truth.partitions[0].group_of(i)] = p.group_of(i);
    const AffinityMatrix omega =
        UpdateAffinity(fine, Partition(coarse, p.num_groups()));
    json l;
    l["k"] = p.num_groups();
    l["membership"] = p.assignment();
    l["omega"] = MatrixToJson(omega.values);
    levels.push_back(std::move(l));
  }
  doc["levels"] = std::move(levels);
  doc["omega_fine"] = MatrixToJson(truth.omega);
  if (!meta.is_null()) doc["meta"] = meta;
  return doc;
}

std::vector<Partition> PartitionsFromJson(const json& doc) {
  if (!doc.is_object()) SchemaError("$", "expected an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    SchemaError("$.n", "expected an integer");
  }
  const std::int64_t n = doc["n"].get<std::int64_t>();
  if (n < 0) SchemaError("$.n", "must be non-negative");
  if (!doc.contains("levels") || !doc["levels"].is_array()) {
    SchemaError("$.levels", "expected an array");
  }
  std::vector<Partition> out;
  const json& levels = doc["levels"];
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string path = "$.levels[" + std::to_string(i) + "]";
    const json& l = levels[i];
    if (!l.is_object()) SchemaError(path, "expected an object");
    if (!l.contains("membership") || !l["membership"].is_array()) {
      SchemaError(path + ".membership", "expected an array");
    }
    const json& m = l["membership"];
    if (static_cast<std::int64_t>(m.size()) != n) {
      SchemaError(path + ".membership", "expected " + std::to_string(n) +
                                            " entries, found " +
                                            std::to_string(m.size()));
    }
    std::vector<int> labels(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!m[j].is_number_integer() || m[j].get<std::int64_t>() < 0) {
        SchemaError(path + ".membership[" + std::to_string(j) + "]",
                    "expected a non-negative integer");
      }
      labels[j] = m[j].get<int>();
    }
    Partition p = Partition::FromLabels(labels);
    if (l.contains("k")) {
      if (!l["k"].is_number_integer()) SchemaError(path + ".k", "expected an integer");
      if (l["k"].get<int>() != p.num_groups()) {
        SchemaError(path + ".k", "declares " + std::to_string(l["k"].get<int>()) +
                                     " groups but membership has " +
                                     std::to_string(p.num_groups()));
      }
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) SchemaError("$.levels", "must contain at least one level");
  return out;
}

json ScoreToJson(const ScoreReport& report) {
  return {{"xi", MatrixToJson(report.xi)},
          {"precision", report.precision},
          {"recall", report.recall},
          {"n_levels_true", report.n_levels_true},
          {"n_levels_inferred", report.n_levels_inferred}};
}

}  // namespace seep
