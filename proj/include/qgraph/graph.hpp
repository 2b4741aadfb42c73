#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qgraph {

// Matching condition at a vertex: continuity plus sum of inward derivatives
// equal to chi * f(v), or f(v) = 0 on a leaf.
struct VertexCondition {
  enum class Kind { Delta, Dirichlet };

  Kind kind = Kind::Delta;
  double chi = 0.0;

  static VertexCondition delta(double chi) { return {Kind::Delta, chi}; }
  static VertexCondition dirichlet() { return {Kind::Dirichlet, 0.0}; }

  bool is_dirichlet() const { return kind == Kind::Dirichlet; }
};

struct Vertex {
  std::string id;
  VertexCondition condition;
};

struct PotentialSegment {
  double length = 0.0;
  double q = 0.0;
};

// Edges are oriented from `from` to `to`; the local coordinate t runs over
// [0, length]. Loops have from == to.
struct Edge {
  std::string id;
  std::size_t from = 0;
  std::size_t to = 0;
  double length = 0.0;
  std::vector<PotentialSegment> potential;

  bool is_loop() const { return from == to; }
};

struct EdgePoint {
  std::size_t edge = 0;
  double t = 0.0;
};

class MetricGraph {
 public:
  MetricGraph() = default;
  // An empty potential list on an edge means q = 0 on the whole edge.
  MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vertex& vertex(std::size_t v) const { return vertices_.at(v); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Loops contribute 2 to the degree of their vertex.
  std::size_t degree(std::size_t v) const;
  std::optional<std::size_t> find_vertex(std::string_view id) const;
  std::optional<std::size_t> find_edge(std::string_view id) const;
  double total_length() const;
  double max_abs_potential() const;
  double potential_at(const EdgePoint& p) const;

  MetricGraph with_condition(std::size_t v, VertexCondition condition) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

class GraphBuilder {
 public:
  GraphBuilder& vertex(std::string id, VertexCondition condition = VertexCondition::delta(0.0));
  GraphBuilder& edge(std::string id, std::string_view from, std::string_view to, double length,
                     std::vector<PotentialSegment> potential = {});
  MetricGraph build() const;

 private:
  std::size_t index_of(std::string_view id) const;

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

enum class DiagnosticKind {
  EmptyGraph,
  DuplicateVertexId,
  DuplicateEdgeId,
  BadEndpoint,
  NonpositiveLength,
  NonfiniteValue,
  NonpositiveSegment,
  PotentialLengthMismatch,
  DirichletNotLeaf,
  UnreferencedVertex,
  Disconnected,
};

struct Diagnostic {
  DiagnosticKind kind;
  std::string message;
};

std::string_view to_string(DiagnosticKind kind);

std::vector<Diagnostic> validate(const MetricGraph& graph);

// Throws InvalidGraph carrying the first diagnostic.
void require_valid(const MetricGraph& graph);

// |E| - |V| + 1.
std::size_t betti(const MetricGraph& graph);

// Number of connected components and the component label of every vertex.
struct Components {
  std::size_t count = 0;
  std::vector<std::size_t> label;
};
Components connected_components(const MetricGraph& graph);

// Cut points and the boundary conditions imposed at the two sides c+ / c- of
// every cut. The side of the edge toward `from` is c-, the other one c+.
struct CutPoint {
  std::size_t edge = 0;
  double t = 0.0;
  int label = 0;
};

enum class CutFamily { Glued, Flux, ImaginaryFlux, Robin };

std::string_view to_string(CutFamily family);
std::optional<CutFamily> parse_cut_family(std::string_view name);

class CutSet {
 public:
  CutSet() = default;
  CutSet(std::vector<CutPoint> cuts, CutFamily family, std::vector<double> params = {});

  const std::vector<CutPoint>& cuts() const { return cuts_; }
  CutFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }

  CutSet with(CutFamily family, std::vector<double> params) const;
  CutSet glued() const { return with(CutFamily::Glued, std::vector<double>(size(), 0.0)); }

 private:
  std::vector<CutPoint> cuts_;
  CutFamily family_ = CutFamily::Glued;
  std::vector<double> params_;
};

// Checks positions against the graph: interior, pairwise distinct, away from
// potential-segment boundaries.
void require_valid_cuts(const MetricGraph& graph, const CutSet& cuts);

// Deterministic BFS spanning tree from vertex 0, edges scanned in index
// order. Returns in_tree flag per edge.
std::vector<bool> spanning_tree(const MetricGraph& graph);

struct TreeSelection {
  // Explicit tree edge list; empty means the deterministic BFS rule.
  std::vector<std::size_t> tree_edges;
};

struct PositionRule {
  // Positions for the non-tree edges in increasing edge order; empty means
  // midpoints.
  std::vector<double> explicit_positions;
};

// One cut per non-tree edge (Glued family).
CutSet spanning_tree_cuts(const MetricGraph& graph, const TreeSelection& tree = {},
                          const PositionRule& positions = {});

std::vector<std::size_t> non_tree_edges(const MetricGraph& graph, const TreeSelection& tree = {});

struct Subdivision {
  MetricGraph graph;
  // New vertex index of every input point.
  std::vector<std::size_t> point_vertex;
  // For every new edge: the original edge and the offset of its start.
  std::vector<EdgePoint> origin;
};

// Inserts a Delta(0) degree-2 vertex at each point.
Subdivision subdivide(const MetricGraph& graph, const std::vector<EdgePoint>& points);
MetricGraph subdivide_at(const MetricGraph& graph, const std::vector<EdgePoint>& points);

// Severs the graph at every point: each point becomes two leaves (c- and c+)
// carrying `leaf_condition`.
Subdivision open_at(const MetricGraph& graph, const std::vector<EdgePoint>& points,
                    VertexCondition leaf_condition);

// Topology of the complement of a finite point set (typically a nodal set).
struct NodalTopology {
  std::size_t phi = 0;               // number of points
  std::size_t nu = 0;                // components of the complement
  std::size_t beta_complement = 0;   // sum of Betti numbers of the components
  std::size_t eta = 0;               // beta(graph) - beta_complement
};
NodalTopology nodal_topology(const MetricGraph& graph, const std::vector<EdgePoint>& zeros);

// Few-zeros cutting procedure: zeros are processed in input order and a cut
// is placed at distance eps (forward along the edge when possible) from a
// zero only if severing the already-cut graph at that zero keeps it
// connected. Returns a Glued cut set with eta = 1 + phi - nu cuts.
// eps <= 0 selects 1e-3 * edge length.
CutSet cut_for_nodal_set(const MetricGraph& graph, const std::vector<EdgePoint>& zeros,
                         double eps = 0.0);

}  // namespace qgraph
