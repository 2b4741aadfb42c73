#pragma once

#include <cstddef>

#include "qgraph/eigenfunction.hpp"

namespace qgraph {

// W(f1, f2) = f1 df2 - df1 f2 at a segment end, with d the derivative
// pointing into the segment (away from the vertex or leaf).
cplx wronskian_at(const GraphFunction& f1, const GraphFunction& f2, const SegmentEnd& end);

// Sum of the outward Wronskians over the edges at a vertex. Throws
// ConditionMismatch when f1 or f2 violates the vertex conditions by more
// than tol * |f|.
cplx wronskian_vertex_sum(const GraphFunction& f1, const GraphFunction& f2, std::size_t vertex,
                          double tol = 1e-8);

struct LeafWronskians {
  cplx a, b;
};

// Wronskians at two leaves given as segment ends (graph leaves or the sides
// of a cut). Throws ConditionMismatch when f1 or f2 violates the conditions
// at any vertex other than the two leaves.
LeafWronskians wronskian_leaf_transfer(const GraphFunction& f1, const GraphFunction& f2,
                                       const SegmentEnd& leaf_a, const SegmentEnd& leaf_b,
                                       double tol = 1e-8);

// Ends of the c- and c+ sides of cut j.
SegmentEnd cut_minus(const SpectralProblem& problem, std::size_t j);
SegmentEnd cut_plus(const SpectralProblem& problem, std::size_t j);
// End of the unique edge at a degree-1 vertex.
SegmentEnd leaf_end(const SpectralProblem& problem, std::size_t vertex);

struct RhoSolution {
  GraphFunction rho;
  // rho'(c+) + rho'(c-) with derivatives pointing away from the cut.
  double r = 0.0;
  double residual = 0.0;
};

// Solution with the vertex conditions of the graph, all cuts except j
// glued, rho(c_j-) = 0 and rho(c_j+) = 1. Throws DirichletResonance when
// lambda is an eigenvalue of the problem with Dirichlet conditions at c_j.
RhoSolution solve_rho(const SpectralProblem& problem, double lambda, std::size_t j,
                      double resonance_tol = 1e-10);

}  // namespace qgraph
