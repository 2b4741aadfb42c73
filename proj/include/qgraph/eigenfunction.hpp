#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "qgraph/graph.hpp"
#include "qgraph/secular.hpp"

namespace qgraph {

// A solution of -f'' + (q - lambda) f = 0 on every segment of a problem,
// stored as (f, f') at each segment start (edge-coordinate derivative).
struct GraphFunction {
  std::shared_ptr<const SpectralProblem> problem;
  cplx lambda = 0.0;
  Eigen::VectorXcd coeffs;

  cplx value(std::size_t segment, double x) const;
  cplx slope(std::size_t segment, double x) const;
  // At a segment boundary `prefer` picks the segment starting there or the
  // one ending there (the c+ and c- sides at a cut).
  cplx value(const EdgePoint& p, End prefer = End::Start) const;
  cplx slope(const EdgePoint& p, End prefer = End::Start) const;

  // Requires real lambda.
  double l2_norm() const;
  // Maximum of |f| over a uniform sampling of every segment.
  double sup_norm(std::size_t samples_per_segment = 64) const;
  bool is_real(double tol = 1e-10) const;
};

struct Eigenpair : GraphFunction {
  // Factor that took the unit-length null vector of the secular matrix to the
  // L2-normalized function.
  double norm_constant = 1.0;
  // Max-norm of the scaled secular matrix applied to the coefficients.
  double residual = 0.0;
};

struct EigenfunctionOptions {
  // sigma_min of M(lambda) relative to secular_reference_norm.
  double eig_tol = 1e-8;
  double mult_tol = 1e-7;
};

// Throws NotAnEigenvalue, DegenerateEigenvalue.
Eigenpair eigenfunction(const SpectralProblem& problem, double lambda,
                        const EigenfunctionOptions& options = {});
Eigenpair eigenfunction(std::shared_ptr<const SpectralProblem> problem, double lambda,
                        const EigenfunctionOptions& options = {});

// n-th eigenpair (1-based), requiring lambda_n to be simple.
Eigenpair nth_eigenpair(const SpectralProblem& problem, std::size_t n,
                        const EigenfunctionOptions& options = {});

// Fixes the global phase (real with nonnegative value at the first segment
// start for real problems) and L2-normalizes. Returns the scale applied.
double normalize(GraphFunction& f);

// Basis of solutions at lambda satisfying every condition except those of
// the listed vertices.
std::vector<GraphFunction> solution_space(const SpectralProblem& problem, cplx lambda,
                                          const std::vector<std::size_t>& free_vertices,
                                          double tol = 1e-7);

// Residual of the conditions at one vertex: max of the continuity mismatches
// and |sum of inward derivatives - chi f(v)|, or |f(v)| for Dirichlet.
double vertex_residual(const GraphFunction& f, std::size_t vertex);

struct SampledPoint {
  std::size_t edge;
  std::size_t segment;
  double t;
  cplx f;
  cplx fprime;
};
// Uniform sampling of every segment with `per_segment` intervals.
std::vector<SampledPoint> sample(const GraphFunction& f, std::size_t per_segment);

struct ZeroOptions {
  double vertex_zero_tol = 1e-8;
};

// Interior zeros of a real function, sorted by edge and position. Zeros at
// segment junctions are reported once; Dirichlet vertices are not zeros.
// Throws VertexZero when |f(v)| < vertex_zero_tol * sup|f| at a non-Dirichlet
// vertex and ZeroAtCut when the function vanishes at a cut.
std::vector<EdgePoint> find_zeros(const GraphFunction& f, const ZeroOptions& options = {});
std::size_t count_zeros(const GraphFunction& f, const ZeroOptions& options = {});
std::size_t nodal_domain_count(const GraphFunction& f, const ZeroOptions& options = {});

}  // namespace qgraph
