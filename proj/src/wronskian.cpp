#include "qgraph/wronskian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "qgraph/errors.hpp"

namespace qgraph {
namespace {

double end_x(const SpectralProblem& p, const SegmentEnd& e) {
  return e.end == End::Start ? 0.0 : p.segments()[e.segment].length;
}

cplx end_value(const GraphFunction& f, const SegmentEnd& e) {
  return f.value(e.segment, end_x(*f.problem, e));
}

cplx end_inward(const GraphFunction& f, const SegmentEnd& e) {
  const auto d = f.slope(e.segment, end_x(*f.problem, e));
  return e.end == End::Start ? d : -d;
}

void check_vertices(const GraphFunction& f, double tol, const std::vector<std::size_t>& skip) {
  const auto& g = f.problem->graph();
  const double scale = std::max(1.0, f.sup_norm()) * std::sqrt(std::max(1.0, std::abs(f.lambda)));
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (std::find(skip.begin(), skip.end(), v) != skip.end()) continue;
    if (vertex_residual(f, v) > tol * scale) {
      throw Error(ErrorCode::ConditionMismatch, "conditions violated at vertex " + g.vertex(v).id);
    }
  }
}

// Vertex owning a segment end, if the end lies at a vertex of the graph.
std::optional<std::size_t> owner(const SpectralProblem& p, const SegmentEnd& e) {
  for (std::size_t v = 0; v < p.vertex_ends().size(); ++v) {
    for (const auto& x : p.vertex_ends()[v]) {
      if (x.segment == e.segment && x.end == e.end) return v;
    }
  }
  return std::nullopt;
}

}  // namespace

cplx wronskian_at(const GraphFunction& f1, const GraphFunction& f2, const SegmentEnd& end) {
  return end_value(f1, end) * end_inward(f2, end) - end_inward(f1, end) * end_value(f2, end);
}

cplx wronskian_vertex_sum(const GraphFunction& f1, const GraphFunction& f2, std::size_t vertex, double tol) {
  for (const auto* f : {&f1, &f2}) {
    const double scale = std::max(1.0, f->sup_norm()) * std::sqrt(std::max(1.0, std::abs(f->lambda)));
    if (vertex_residual(*f, vertex) > tol * scale) {
      throw Error(ErrorCode::ConditionMismatch,
                  "conditions violated at vertex " + f->problem->graph().vertex(vertex).id);
    }
  }
  cplx sum = 0.0;
  for (const auto& e : f1.problem->vertex_ends().at(vertex)) sum += wronskian_at(f1, f2, e);
  return sum;
}

LeafWronskians wronskian_leaf_transfer(const GraphFunction& f1, const GraphFunction& f2,
                                       const SegmentEnd& leaf_a, const SegmentEnd& leaf_b, double tol) {
  std::vector<std::size_t> skip;
  for (const auto& e : {leaf_a, leaf_b}) {
    if (auto v = owner(*f1.problem, e)) skip.push_back(*v);
  }
  check_vertices(f1, tol, skip);
  check_vertices(f2, tol, skip);
  return {wronskian_at(f1, f2, leaf_a), wronskian_at(f1, f2, leaf_b)};
}

SegmentEnd cut_minus(const SpectralProblem& problem, std::size_t j) {
  return {problem.cut_sides().at(j).minus, End::Finish};
}

SegmentEnd cut_plus(const SpectralProblem& problem, std::size_t j) {
  return {problem.cut_sides().at(j).plus, End::Start};
}

SegmentEnd leaf_end(const SpectralProblem& problem, std::size_t vertex) {
  const auto& ends = problem.vertex_ends().at(vertex);
  if (ends.size() != 1) {
    throw Error(ErrorCode::InvalidGraph, "vertex " + problem.graph().vertex(vertex).id + " is not a leaf");
  }
  return ends.front();
}

RhoSolution solve_rho(const SpectralProblem& problem, double lambda, std::size_t j, double resonance_tol) {
  if (j >= problem.cuts().size()) throw Error(ErrorCode::InvalidCut, "cut index out of range");
  auto glued = std::make_shared<const SpectralProblem>(problem.with_cuts(problem.cuts().glued()));
  auto sys = assemble_secular(*glued, lambda);
  const auto& block = *std::find_if(sys.blocks.begin(), sys.blocks.end(), [&](const RowBlock& b) {
    return b.kind == RowBlock::Kind::Cut && b.index == j;
  });
  const auto r0 = static_cast<Eigen::Index>(block.first_row);
  const auto minus = glued->cut_sides()[j].minus, plus = glued->cut_sides()[j].plus;
  const auto& seg = glued->segments()[minus];
  const auto b = basis_at(lambda, seg.q, seg.length);
  sys.matrix.row(r0).setZero();
  sys.matrix.row(r0 + 1).setZero();
  sys.matrix(r0, static_cast<Eigen::Index>(2 * minus)) = b.c;
  sys.matrix(r0, static_cast<Eigen::Index>(2 * minus + 1)) = sys.scale * b.s;
  sys.matrix(r0 + 1, static_cast<Eigen::Index>(2 * plus)) = 1.0;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(sys.matrix.rows());
  rhs(r0 + 1) = 1.0;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) < resonance_tol * secular_reference_norm(s)) {
    throw Error(ErrorCode::DirichletResonance,
                "lambda = " + std::to_string(lambda) + " is a Dirichlet eigenvalue at cut " + std::to_string(j));
  }
  const Eigen::VectorXcd x = svd.solve(rhs);
  RhoSolution out;
  out.rho = {glued, lambda, unscale_coefficients(x, sys.scale)};
  for (Eigen::Index i = 0; i < out.rho.coeffs.size(); ++i) out.rho.coeffs(i) = out.rho.coeffs(i).real();
  out.residual = (sys.matrix * scale_coefficients(out.rho.coeffs, sys.scale) - rhs).cwiseAbs().maxCoeff();
  out.r = (end_inward(out.rho, cut_plus(*glued, j)) + end_inward(out.rho, cut_minus(*glued, j))).real();
  return out;
}

}  // namespace qgraph
