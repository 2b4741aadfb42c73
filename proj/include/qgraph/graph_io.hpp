#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "qgraph/graph.hpp"

namespace qgraph {

// Graph-description files:
//
//   [vertices]
//   id=v0 condition=delta:0
//   id=v1 condition=dirichlet
//   [edges]
//   id=e0 from=v0 to=v1 length=1.0 potential=0.5:0,0.5:2
//   [cuts]
//   edge=e0 t=0.25 family=robin params=1.5
//
// Blank lines and '#' comments are ignored; whitespace around '=', ',' and
// ':' is insignificant. All cut lines must share one family.
struct GraphFile {
  MetricGraph graph;
  std::optional<CutSet> cuts;
};

GraphFile parse_graph(std::string_view text);
GraphFile read_graph_file(const std::filesystem::path& path);
std::string format_graph(const MetricGraph& graph, const std::optional<CutSet>& cuts = std::nullopt);

}  // namespace qgraph
