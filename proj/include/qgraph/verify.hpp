#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/eigenfunction.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/perturbation.hpp"

namespace qgraph {

struct VerificationReport {
  std::string graph;
  std::size_t n = 0;
  double lambda = 0.0;
  std::size_t phi = 0;
  std::size_t nu = 0;
  std::size_t beta = 0;
  std::size_t eta = 0;
  HessianReport hessian;
  long predicted = 0;
  long observed = 0;
  bool pass = false;
  // Empty unless the case was skipped (degenerate eigenvalue, vertex zero).
  std::string skip_reason;
  // Checks that failed, in the order they were made.
  std::vector<std::string> failures;
  // Parameters of the critical point (gamma-tilde for the cut variants).
  std::vector<double> critical_point;
  CutSet cuts;
  // |lambda_{phi+1}(H_gamma-tilde) - lambda_n| for the cut variants.
  double lambda_mismatch = 0.0;

  bool skipped() const { return !skip_reason.empty(); }
};

struct VerifyOptions {
  std::string graph_name = "graph";
  HessianOptions hessian;
  double gradient_tol = 1e-5;
  double lambda_tol = 1e-8;
  double zero_position_tol = 1e-6;
  double equipartition_tol = 1e-8;
  // Eigenvalues closer than this (relative) count as degenerate.
  double simplicity_tol = 1e-7;
};

// Morse index of lambda_n(alpha) at alpha = 0 against phi - (n - 1).
VerificationReport verify_theorem1(const MetricGraph& graph, std::size_t n, const VerifyOptions& options = {});
std::vector<VerificationReport> verify_theorem1(const MetricGraph& graph, std::size_t first, std::size_t last,
                                                const VerifyOptions& options = {});

// Morse index of lambda_{phi+1}(H_gamma) at gamma-tilde against n-1+beta-phi,
// with one cut per non-tree edge.
VerificationReport verify_theorem2(const MetricGraph& graph, std::size_t n, const VerifyOptions& options = {});

// Same with eta = 1 + phi - nu cuts from the few-zeros procedure; index n - nu.
VerificationReport verify_theorem2_few_zeros(const MetricGraph& graph, std::size_t n,
                                             const VerifyOptions& options = {});

struct PartitionEnergy {
  double energy = 0.0;                // max groundstate over components
  std::vector<double> groundstates;   // per component, by lowest vertex index
  double residual = 0.0;              // max - min groundstate
  std::size_t components = 0;
  bool cycles_broken = false;         // components = m - beta + 1
};

// Dirichlet conditions at every point, groundstate of each component.
// Throws ImproperPartition for points at vertices or repeated points.
PartitionEnergy partition_energy(const MetricGraph& graph, const std::vector<EdgePoint>& points);

// Lambda along the equipartitions given by the zeros of the (phi+1)-th
// eigenfunction of H_gamma; index n - nu at gamma-tilde.
VerificationReport verify_partition_criticality(const MetricGraph& graph, std::size_t n,
                                                const VerifyOptions& options = {});

// Cuts at the points of largest |psi| on the given edges, so that the
// eigenfunction is far from zero at every cut.
CutSet cuts_at_maxima(const GraphFunction& psi, const std::vector<std::size_t>& edges);

// Moves every cut produced by cut_for_nodal_set to the point of largest
// |psi| between the neighbouring zeros on its edge. The topology of the cut
// graph is unchanged.
CutSet relocate_nodal_cuts(const GraphFunction& psi, const CutSet& cuts, const std::vector<EdgePoint>& zeros);

}  // namespace qgraph
