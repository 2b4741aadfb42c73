#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

constexpr double kSegmentSumTol = 1e-12;
constexpr double kBoundaryTol = 1e-12;

// Union-find over vertex indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::string point_name(const Edge& e, double t) {
  std::ostringstream os;
  os.precision(17);
  os << e.id << "@" << t;
  return os.str();
}

// Potential segments of an edge restricted to [a, b].
std::vector<PotentialSegment> slice_potential(const Edge& e, double a, double b) {
  std::vector<PotentialSegment> out;
  double start = 0.0;
  for (const auto& seg : e.potential) {
    const double end = start + seg.length;
    const double lo = std::max(start, a);
    const double hi = std::min(end, b);
    if (hi - lo > kBoundaryTol * std::max(1.0, e.length)) out.push_back({hi - lo, seg.q});
    start = end;
  }
  if (out.empty()) out.push_back({b - a, 0.0});
  // Absorb rounding so the pieces sum to the sliced length exactly.
  double sum = 0.0;
  for (const auto& s : out) sum += s.length;
  out.back().length += (b - a) - sum;
  return out;
}

struct PointOnEdge {
  double t;
  std::size_t index;  // position in the caller's point list
};

std::vector<std::vector<PointOnEdge>> group_points(const MetricGraph& graph,
                                                   const std::vector<EdgePoint>& points) {
  std::vector<std::vector<PointOnEdge>> per_edge(graph.edge_count());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.edge >= graph.edge_count())
      throw Error(ErrorCode::InvalidCut, "point references unknown edge");
    const double len = graph.edge(p.edge).length;
    if (!(p.t > 0.0 && p.t < len))
      throw Error(ErrorCode::InvalidCut, "point must be strictly interior to its edge");
    per_edge[p.edge].push_back({p.t, i});
  }
  for (auto& list : per_edge) {
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    for (std::size_t k = 1; k < list.size(); ++k) {
      if (list[k].t - list[k - 1].t <= kBoundaryTol * std::max(1.0, list[k].t))
        throw Error(ErrorCode::DuplicatePoint, "two points coincide on an edge");
    }
  }
  return per_edge;
}

// Shared implementation of subdivide/open_at. When `open` is set every point
// yields two leaves instead of one degree-2 vertex.
Subdivision split_graph(const MetricGraph& graph, const std::vector<EdgePoint>& points, bool open,
                        VertexCondition leaf_condition) {
  const auto per_edge = group_points(graph, points);
  std::vector<Vertex> vertices = graph.vertices();
  std::vector<Edge> edges;
  Subdivision out;
  out.point_vertex.assign(points.size(), 0);

  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.edge(e);
    std::size_t current = edge.from;
    double start = 0.0;
    int piece = 0;
    auto emit = [&](std::size_t to, double end) {
      Edge ne;
      ne.id = piece == 0 && per_edge[e].empty() ? edge.id : edge.id + "#" + std::to_string(piece);
      ne.from = current;
      ne.to = to;
      ne.length = end - start;
      ne.potential = slice_potential(edge, start, end);
      edges.push_back(std::move(ne));
      out.origin.push_back({e, start});
      ++piece;
    };
    for (const auto& p : per_edge[e]) {
      const std::string name = point_name(edge, p.t);
      if (open) {
        vertices.push_back({name + "-", leaf_condition});
        const std::size_t minus = vertices.size() - 1;
        vertices.push_back({name + "+", leaf_condition});
        const std::size_t plus = vertices.size() - 1;
        emit(minus, p.t);
        current = plus;
        out.point_vertex[p.index] = plus;
      } else {
        vertices.push_back({name, VertexCondition::delta(0.0)});
        const std::size_t mid = vertices.size() - 1;
        emit(mid, p.t);
        current = mid;
        out.point_vertex[p.index] = mid;
      }
      start = p.t;
    }
    emit(edge.to, edge.length);
  }
  out.graph = MetricGraph(std::move(vertices), std::move(edges));
  return out;
}

}  // namespace

MetricGraph::MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.potential.empty()) e.potential.push_back({e.length, 0.0});
  }
}

std::size_t MetricGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (const auto& e : edges_) {
    if (e.from == v) ++d;
    if (e.to == v) ++d;
  }
  return d;
}

std::optional<std::size_t> MetricGraph::find_vertex(std::string_view id) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> MetricGraph::find_edge(std::string_view id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].id == id) return i;
  return std::nullopt;
}

double MetricGraph::total_length() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.length;
  return total;
}

double MetricGraph::max_abs_potential() const {
  double m = 0.0;
  for (const auto& e : edges_)
    for (const auto& s : e.potential) m = std::max(m, std::abs(s.q));
  return m;
}

double MetricGraph::potential_at(const EdgePoint& p) const {
  const Edge& e = edge(p.edge);
  double start = 0.0;
  for (const auto& s : e.potential) {
    if (p.t < start + s.length) return s.q;
    start += s.length;
  }
  return e.potential.back().q;
}

MetricGraph MetricGraph::with_condition(std::size_t v, VertexCondition condition) const {
  auto vertices = vertices_;
  vertices.at(v).condition = condition;
  return MetricGraph(std::move(vertices), edges_);
}

GraphBuilder& GraphBuilder::vertex(std::string id, VertexCondition condition) {
  vertices_.push_back({std::move(id), condition});
  return *this;
}

GraphBuilder& GraphBuilder::edge(std::string id, std::string_view from, std::string_view to,
                                 double length, std::vector<PotentialSegment> potential) {
  edges_.push_back({std::move(id), index_of(from), index_of(to), length, std::move(potential)});
  return *this;
}

MetricGraph GraphBuilder::build() const { return MetricGraph(vertices_, edges_); }

std::size_t GraphBuilder::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].id == id) return i;
  throw Error(ErrorCode::InvalidGraph, "unknown vertex id '" + std::string(id) + "'");
}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::EmptyGraph: return "EmptyGraph";
    case DiagnosticKind::DuplicateVertexId: return "DuplicateVertexId";
    case DiagnosticKind::DuplicateEdgeId: return "DuplicateEdgeId";
    case DiagnosticKind::BadEndpoint: return "BadEndpoint";
    case DiagnosticKind::NonpositiveLength: return "NonpositiveLength";
    case DiagnosticKind::NonfiniteValue: return "NonfiniteValue";
    case DiagnosticKind::NonpositiveSegment: return "NonpositiveSegment";
    case DiagnosticKind::PotentialLengthMismatch: return "PotentialLengthMismatch";
    case DiagnosticKind::DirichletNotLeaf: return "DirichletNotLeaf";
    case DiagnosticKind::UnreferencedVertex: return "UnreferencedVertex";
    case DiagnosticKind::Disconnected: return "Disconnected";
  }
  return "Unknown";
}

std::vector<Diagnostic> validate(const MetricGraph& graph) {
  std::vector<Diagnostic> out;
  if (graph.vertex_count() == 0 || graph.edge_count() == 0) {
    out.push_back({DiagnosticKind::EmptyGraph, "graph needs at least one vertex and one edge"});
    return out;
  }
  std::set<std::string> ids;
  for (const auto& v : graph.vertices()) {
    if (!ids.insert(v.id).second)
      out.push_back({DiagnosticKind::DuplicateVertexId, "vertex id '" + v.id + "' repeated"});
    if (!v.condition.is_dirichlet() && !std::isfinite(v.condition.chi))
      out.push_back({DiagnosticKind::NonfiniteValue, "vertex '" + v.id + "' has non-finite chi"});
  }
  ids.clear();
  bool endpoints_ok = true;
  for (const auto& e : graph.edges()) {
    if (!ids.insert(e.id).second)
      out.push_back({DiagnosticKind::DuplicateEdgeId, "edge id '" + e.id + "' repeated"});
    if (e.from >= graph.vertex_count() || e.to >= graph.vertex_count()) {
      out.push_back({DiagnosticKind::BadEndpoint, "edge '" + e.id + "' references unknown vertex"});
      endpoints_ok = false;
    }
    if (!std::isfinite(e.length)) {
      out.push_back({DiagnosticKind::NonfiniteValue, "edge '" + e.id + "' has non-finite length"});
      continue;
    }
    if (e.length <= 0.0) {
      out.push_back({DiagnosticKind::NonpositiveLength, "edge '" + e.id + "' has length <= 0"});
      continue;
    }
    double sum = 0.0;
    for (const auto& s : e.potential) {
      if (!std::isfinite(s.length) || !std::isfinite(s.q)) {
        out.push_back({DiagnosticKind::NonfiniteValue, "edge '" + e.id + "' potential not finite"});
      } else if (s.length <= 0.0) {
        out.push_back(
            {DiagnosticKind::NonpositiveSegment, "edge '" + e.id + "' has a potential segment <= 0"});
      }
      sum += s.length;
    }
    if (std::abs(sum - e.length) > kSegmentSumTol * e.length)
      out.push_back({DiagnosticKind::PotentialLengthMismatch,
                     "edge '" + e.id + "' potential segments do not sum to its length"});
  }
  if (!endpoints_ok) return out;

  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    const std::size_t d = graph.degree(v);
    if (d == 0)
      out.push_back(
          {DiagnosticKind::UnreferencedVertex, "vertex '" + graph.vertex(v).id + "' has no edges"});
    if (graph.vertex(v).condition.is_dirichlet() && d != 1)
      out.push_back({DiagnosticKind::DirichletNotLeaf,
                     "Dirichlet condition on non-leaf vertex '" + graph.vertex(v).id + "'"});
  }
  if (connected_components(graph).count > 1)
    out.push_back({DiagnosticKind::Disconnected, "graph is not connected"});
  return out;
}

void require_valid(const MetricGraph& graph) {
  const auto diags = validate(graph);
  if (!diags.empty()) throw Error(ErrorCode::InvalidGraph, diags.front().message);
}

std::size_t betti(const MetricGraph& graph) {
  require_valid(graph);
  return graph.edge_count() + 1 - graph.vertex_count();
}

Components connected_components(const MetricGraph& graph) {
  DisjointSets sets(graph.vertex_count());
  for (const auto& e : graph.edges()) {
    if (e.from < graph.vertex_count() && e.to < graph.vertex_count()) sets.unite(e.from, e.to);
  }
  Components c;
  c.label.assign(graph.vertex_count(), 0);
  std::vector<std::size_t> root_label(graph.vertex_count(), static_cast<std::size_t>(-1));
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    const std::size_t r = sets.find(v);
    if (root_label[r] == static_cast<std::size_t>(-1)) root_label[r] = c.count++;
    c.label[v] = root_label[r];
  }
  return c;
}

std::string_view to_string(CutFamily family) {
  switch (family) {
    case CutFamily::Glued: return "glued";
    case CutFamily::Flux: return "flux";
    case CutFamily::ImaginaryFlux: return "imaginary-flux";
    case CutFamily::Robin: return "robin";
  }
  return "unknown";
}

std::optional<CutFamily> parse_cut_family(std::string_view name) {
  if (name == "glued") return CutFamily::Glued;
  if (name == "flux") return CutFamily::Flux;
  if (name == "imaginary-flux" || name == "iflux") return CutFamily::ImaginaryFlux;
  if (name == "robin") return CutFamily::Robin;
  return std::nullopt;
}

CutSet::CutSet(std::vector<CutPoint> cuts, CutFamily family, std::vector<double> params)
    : cuts_(std::move(cuts)), family_(family), params_(std::move(params)) {
  if (params_.empty()) params_.assign(cuts_.size(), 0.0);
  if (params_.size() != cuts_.size())
    throw Error(ErrorCode::InvalidCut, "parameter vector length must equal the number of cuts");
}

CutSet CutSet::with(CutFamily family, std::vector<double> params) const {
  return CutSet(cuts_, family, std::move(params));
}

void require_valid_cuts(const MetricGraph& graph, const CutSet& cuts) {
  std::vector<EdgePoint> points;
  for (const auto& c : cuts.cuts()) points.push_back({c.edge, c.t});
  group_points(graph, points);
  for (const auto& c : cuts.cuts()) {
    const Edge& e = graph.edge(c.edge);
    double boundary = 0.0;
    for (std::size_t k = 0; k + 1 < e.potential.size(); ++k) {
      boundary += e.potential[k].length;
      if (std::abs(boundary - c.t) <= kBoundaryTol * std::max(1.0, e.length))
        throw Error(ErrorCode::InvalidCut, "cut point lies on a potential-segment boundary");
    }
  }
}

std::vector<bool> spanning_tree(const MetricGraph& graph) {
  require_valid(graph);
  std::vector<bool> in_tree(graph.edge_count(), false);
  std::vector<bool> seen(graph.vertex_count(), false);
  std::queue<std::size_t> queue;
  queue.push(0);
  seen[0] = true;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop();
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      const Edge& edge = graph.edge(e);
      if (edge.is_loop()) continue;
      std::size_t other;
      if (edge.from == v) {
        other = edge.to;
      } else if (edge.to == v) {
        other = edge.from;
      } else {
        continue;
      }
      if (seen[other]) continue;
      seen[other] = true;
      in_tree[e] = true;
      queue.push(other);
    }
  }
  return in_tree;
}

std::vector<std::size_t> non_tree_edges(const MetricGraph& graph, const TreeSelection& tree) {
  std::vector<bool> in_tree;
  if (tree.tree_edges.empty()) {
    in_tree = spanning_tree(graph);
  } else {
    require_valid(graph);
    in_tree.assign(graph.edge_count(), false);
    DisjointSets sets(graph.vertex_count());
    for (std::size_t e : tree.tree_edges) {
      if (e >= graph.edge_count()) throw Error(ErrorCode::InvalidGraph, "tree edge out of range");
      if (!sets.unite(graph.edge(e).from, graph.edge(e).to))
        throw Error(ErrorCode::InvalidGraph, "explicit tree edges contain a cycle");
      in_tree[e] = true;
    }
    if (tree.tree_edges.size() + 1 != graph.vertex_count())
      throw Error(ErrorCode::InvalidGraph, "explicit tree edges do not span the graph");
  }
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < graph.edge_count(); ++e)
    if (!in_tree[e]) out.push_back(e);
  return out;
}

CutSet spanning_tree_cuts(const MetricGraph& graph, const TreeSelection& tree,
                          const PositionRule& positions) {
  const auto complement = non_tree_edges(graph, tree);
  if (!positions.explicit_positions.empty() &&
      positions.explicit_positions.size() != complement.size())
    throw Error(ErrorCode::InvalidCut, "need one explicit position per non-tree edge");
  std::vector<CutPoint> cuts;
  for (std::size_t j = 0; j < complement.size(); ++j) {
    const std::size_t e = complement[j];
    const double t = positions.explicit_positions.empty() ? 0.5 * graph.edge(e).length
                                                          : positions.explicit_positions[j];
    cuts.push_back({e, t, static_cast<int>(j)});
  }
  CutSet out(std::move(cuts), CutFamily::Glued);
  require_valid_cuts(graph, out);
  return out;
}

Subdivision subdivide(const MetricGraph& graph, const std::vector<EdgePoint>& points) {
  return split_graph(graph, points, false, VertexCondition::delta(0.0));
}

MetricGraph subdivide_at(const MetricGraph& graph, const std::vector<EdgePoint>& points) {
  return subdivide(graph, points).graph;
}

Subdivision open_at(const MetricGraph& graph, const std::vector<EdgePoint>& points,
                    VertexCondition leaf_condition) {
  return split_graph(graph, points, true, leaf_condition);
}

NodalTopology nodal_topology(const MetricGraph& graph, const std::vector<EdgePoint>& zeros) {
  const auto opened = open_at(graph, zeros, VertexCondition::delta(0.0));
  const auto comps = connected_components(opened.graph);
  NodalTopology t;
  t.phi = zeros.size();
  t.nu = comps.count;
  // Per-component E - V + 1, summed by explicit labeling.
  std::vector<long> edges_in(comps.count, 0), vertices_in(comps.count, 0);
  for (const auto& e : opened.graph.edges()) ++edges_in[comps.label[e.from]];
  for (std::size_t v = 0; v < opened.graph.vertex_count(); ++v) ++vertices_in[comps.label[v]];
  long sum = 0;
  for (std::size_t c = 0; c < comps.count; ++c) sum += edges_in[c] - vertices_in[c] + 1;
  t.beta_complement = static_cast<std::size_t>(sum);
  t.eta = betti(graph) - t.beta_complement;
  return t;
}

CutSet cut_for_nodal_set(const MetricGraph& graph, const std::vector<EdgePoint>& zeros, double eps) {
  require_valid(graph);
  group_points(graph, zeros);  // interior + distinct

  std::vector<EdgePoint> cut_points;
  std::vector<CutPoint> cuts;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const EdgePoint& z = zeros[i];
    auto trial = cut_points;
    trial.push_back(z);
    const auto opened = open_at(graph, trial, VertexCondition::delta(0.0));
    if (connected_components(opened.graph).count > 1) continue;

    const double len = graph.edge(z.edge).length;
    const double offset = eps > 0.0 ? eps : 1e-3 * len;
    // Any other marked point in the closed interval [a, b] blocks the offset.
    auto blocked = [&](double a, double b) {
      auto hits = [&](const EdgePoint& p) { return p.edge == z.edge && p.t >= a && p.t <= b; };
      for (std::size_t k = 0; k < zeros.size(); ++k)
        if (k != i && hits(zeros[k])) return true;
      for (const auto& c : cut_points)
        if (hits(c)) return true;
      return false;
    };
    double t;
    if (z.t + offset < len && !blocked(z.t, z.t + offset)) {
      t = z.t + offset;
    } else if (z.t - offset > 0.0 && !blocked(z.t - offset, z.t)) {
      t = z.t - offset;
    } else {
      throw Error(ErrorCode::EpsilonTooLarge, "nodal cut offset leaves the edge or crosses a marked point");
    }
    cut_points.push_back({z.edge, t});
    cuts.push_back({z.edge, t, static_cast<int>(i)});
  }

  const auto topo = nodal_topology(graph, zeros);
  if (cuts.size() != topo.eta || topo.eta + topo.nu != 1 + topo.phi)
    throw Error(ErrorCode::InvalidCut, "nodal cut count inconsistent with nodal topology");
  return CutSet(std::move(cuts), CutFamily::Glued);
}

}  // namespace qgraph
