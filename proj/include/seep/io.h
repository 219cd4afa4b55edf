#ifndef SEEP_IO_H_
#define SEEP_IO_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seep/evaluation.h"
#include "seep/graph.h"
#include "seep/hierarchy.h"
#include "seep/partition.h"
#include "seep/synthetic.h"

namespace seep {

// Edge lists: one edge per line, `u v [w]` separated by spaces or tabs,
// 0-based integer ids. Lines starting with '#' are comments; a comment of the
// form `# nodes: N` fixes the node count so trailing isolated nodes survive a
// round trip. Parse errors throw DataError naming the line number.
Graph ReadEdgeList(std::istream& in, std::optional<int> n = std::nullopt);
Graph ReadEdgeListFile(const std::string& path,
                       std::optional<int> n = std::nullopt);

// Writes each undirected edge once, self-loops with their original weight.
void WriteEdgeList(std::ostream& out, const Graph& graph);

// {"n", "levels": [{"k", "membership", "omega", ...diagnostics}], "meta"}.
nlohmann::json HierarchyToJson(const HierarchyResult& result,
                               const nlohmann::json& meta = {});

// Hierarchy schema for the planted partitions plus "omega_fine". Level
// affinities are the expected densities of the generating model.
nlohmann::json TruthToJson(const GroundTruth& truth,
                           const nlohmann::json& meta = {});

// Reads the "levels[].membership" arrays of a hierarchy or truth document.
// Throws DataError with a JSON-path style location on schema violations.
std::vector<Partition> PartitionsFromJson(const nlohmann::json& doc);

nlohmann::json ScoreToJson(const ScoreReport& report);

nlohmann::json MatrixToJson(const Eigen::MatrixXd& m);

}  // namespace seep

#endif  // SEEP_IO_H_
