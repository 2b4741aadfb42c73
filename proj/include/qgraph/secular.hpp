#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "qgraph/graph.hpp"
#include "qgraph/transfer.hpp"

namespace qgraph {

// A maximal piece of an edge with constant potential and no cut inside.
// Local coordinate x runs over [0, length] starting at `offset` on the edge.
struct Segment {
  std::size_t edge = 0;
  double offset = 0.0;
  double length = 0.0;
  double q = 0.0;
};

enum class End { Start, Finish };

struct SegmentEnd {
  std::size_t segment = 0;
  End end = End::Start;
};

// Consecutive segments on one edge meeting at a point that is not a cut.
struct Junction {
  std::size_t before = 0;
  std::size_t after = 0;
};

// The segment ending at the cut (side c-) and the one starting there (c+).
struct CutSides {
  std::size_t minus = 0;
  std::size_t plus = 0;
};

class SpectralProblem {
 public:
  SpectralProblem(MetricGraph graph, CutSet cuts = {});

  const MetricGraph& graph() const { return graph_; }
  const CutSet& cuts() const { return cuts_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t unknown_count() const { return 2 * segments_.size(); }

  // Segment ends attached to each vertex, in edge order.
  const std::vector<std::vector<SegmentEnd>>& vertex_ends() const { return vertex_ends_; }
  const std::vector<Junction>& junctions() const { return junctions_; }
  const std::vector<CutSides>& cut_sides() const { return cut_sides_; }
  // Segments of every edge in increasing position.
  const std::vector<std::size_t>& edge_segments(std::size_t e) const { return edge_segments_.at(e); }

  // Segment containing the edge point and the local coordinate. At a segment
  // boundary `prefer` chooses the segment that starts there (Start) or the
  // one that ends there (Finish).
  std::pair<std::size_t, double> locate(const EdgePoint& p, End prefer = End::Start) const;

  bool self_adjoint() const { return cuts_.family() != CutFamily::ImaginaryFlux; }
  // True when the conditions have real coefficients.
  bool real_conditions() const { return cuts_.family() != CutFamily::Flux; }

  SpectralProblem with_cuts(CutSet cuts) const { return SpectralProblem(graph_, std::move(cuts)); }

 private:
  MetricGraph graph_;
  CutSet cuts_;
  std::vector<Segment> segments_;
  std::vector<std::vector<std::size_t>> edge_segments_;
  std::vector<std::vector<SegmentEnd>> vertex_ends_;
  std::vector<Junction> junctions_;
  std::vector<CutSides> cut_sides_;
};

// Unknowns are (f, f'/kappa) at the start of every segment, interleaved.
// Rows expressing derivatives are divided by kappa = sqrt(max(1, |lambda|)),
// which keeps the matrix entries O(1) for large lambda.
double secular_scale(cplx lambda);

struct RowBlock {
  enum class Kind { Vertex, Junction, Cut };
  Kind kind;
  std::size_t index;
  std::size_t first_row;
  std::size_t rows;
};

struct SecularSystem {
  Eigen::MatrixXcd matrix;
  std::vector<RowBlock> blocks;
  double scale = 1.0;
};

SecularSystem assemble_secular(const SpectralProblem& problem, cplx lambda);
Eigen::MatrixXcd secular_matrix(const SpectralProblem& problem, cplx lambda);

// Converts between scaled unknowns and (f, f') at segment starts.
Eigen::VectorXcd unscale_coefficients(const Eigen::VectorXcd& x, double scale);
Eigen::VectorXcd scale_coefficients(const Eigen::VectorXcd& coeffs, double scale);

// Singular values of M(lambda) in decreasing order.
Eigen::VectorXd secular_singular_values(const SpectralProblem& problem, cplx lambda);
// max(1, sigma_max). The matrix can vanish identically (a single loop at an
// eigenvalue), so tolerances are taken relative to this rather than sigma_max.
double secular_reference_norm(const Eigen::VectorXd& singular_values);
// sigma_min / secular_reference_norm of M(lambda).
double relative_sigma_min(const SpectralProblem& problem, cplx lambda);

// Number of eigenvalues strictly below lambda (self-adjoint families only).
// Throws NotSelfAdjointFamily for ImaginaryFlux.
std::size_t count_below(const SpectralProblem& problem, double lambda);

}  // namespace qgraph
