#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "qgraph/eigenfunction.hpp"
#include "qgraph/graph.hpp"

namespace qgraph {

// Reduces an angle to (-pi, pi].
double reduce_angle(double a);

// Fluxes of a one-form that is constant on every edge (value a[e] in the
// edge orientation). alpha_j is the integral around the cycle that runs
// along the cut edge in its orientation and returns through the tree formed
// by the uncut edges. Throws PathNotFound when the uncut edges do not form a
// spanning tree.
std::vector<double> flux_from_potential(const MetricGraph& graph, const CutSet& cuts,
                                        const std::vector<double>& a);

double lambda_n_alpha(const MetricGraph& graph, const CutSet& cuts, std::size_t n,
                      const std::vector<double>& alpha);

double lambda_m_gamma(const MetricGraph& graph, const CutSet& cuts, std::size_t m,
                      const std::vector<double>& gamma);

struct ContinuationOptions {
  std::size_t steps = 8;
  // Maximum number of halvings of a path step before giving up.
  std::size_t max_halvings = 10;
  // Search window as a fraction of the distance from lambda_n(H0) to its
  // nearest neighbour.
  double window_fraction = 0.25;
};

// Real branch of lambda_n(H^{i alpha}) followed along the straight path from
// alpha = 0. Throws DegenerateAtZero when lambda_n(H0) is not simple and
// BranchLost when no real eigenvalue is found near the previous one.
double lambda_n_ialpha_continued(const MetricGraph& graph, const CutSet& cuts, std::size_t n,
                                 const std::vector<double>& alpha, const ContinuationOptions& options = {});

struct GammaTilde {
  std::vector<double> gamma;       // psi'(c+)/psi(c+)
  std::vector<double> gamma_minus; // -psi'(c-)/psi(c-)
  double consistency = 0.0;        // max |gamma - gamma_minus|
};

// Throws ZeroAtCut when |psi(c_j)| < vertex_zero_tol * sup|psi|.
GammaTilde gamma_tilde(const GraphFunction& psi, const CutSet& cuts, double vertex_zero_tol = 1e-8);

using ScalarField = std::function<double(const std::vector<double>&)>;

struct HessianReport {
  Eigen::MatrixXd matrix;
  double h = 0.0;
  bool richardson = true;
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd gradient;
  double gradient_norm = 0.0;
  double value = 0.0;
  double degen_tol = 0.0;
  std::size_t morse_index = 0;
  std::size_t positive = 0;
  std::size_t degenerate = 0;
  bool nondegenerate = true;
};

struct HessianOptions {
  double h = 1e-3;
  // Combine steps h and h/2 to cancel the O(h^2) truncation error.
  bool richardson = true;
  // Negative selects 1e-4 * (1 + |f(x)|).
  double degen_tol = -1.0;
};

// Central-difference Hessian and gradient. Throws EvaluationFailed when f
// throws at a stencil point.
HessianReport hessian_fd(const ScalarField& f, const std::vector<double>& x, const HessianOptions& options = {});

struct MorseResult {
  std::size_t index = 0;
  bool nondegenerate = true;
};
MorseResult morse_index(const Eigen::MatrixXd& symmetric, double degen_tol);
MorseResult morse_index(const HessianReport& report, double degen_tol);

struct MapRResult {
  std::vector<double> alpha;
  double lambda = 0.0;
};
struct MapRInverseResult {
  std::vector<double> gamma;
  double lambda = 0.0;
};

// alpha_j = log(g(c+)/g(c-)) for the m-th eigenfunction g of H_gamma.
// Throws SignFlipAtCut, ZeroAtCut, DegenerateEigenvalue.
MapRResult map_R(const MetricGraph& graph, const CutSet& cuts, std::size_t m, const std::vector<double>& gamma);

// gamma_j = phi'(c+)/phi(c+) for the continued n-th eigenfunction phi of
// H^{i alpha}.
MapRInverseResult map_R_inverse(const MetricGraph& graph, const CutSet& cuts, std::size_t n,
                                const std::vector<double>& alpha, const ContinuationOptions& options = {});

// Max over the first `count` eigenvalues of |lambda_k(varsigma - alpha) -
// lambda_k(varsigma + alpha)| under Flux conditions.
double symmetry_spectrum_check(const MetricGraph& graph, const CutSet& cuts, const std::vector<double>& varsigma,
                               const std::vector<double>& alpha, std::size_t count);

// All 2^beta symmetry points with entries in {0, pi}, in binary order.
std::vector<std::vector<double>> symmetry_points(std::size_t dimension);

}  // namespace qgraph
