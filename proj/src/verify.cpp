#include "qgraph/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qgraph/errors.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph {
namespace {

struct Base {
  std::optional<Eigenpair> psi;
  std::vector<EdgePoint> zeros;
};

// Simplicity, eigenfunction, zeros. Sets skip_reason when a hypothesis fails.
Base prepare(const MetricGraph& graph, std::size_t n, const VerifyOptions& options, VerificationReport& r) {
  Base b;
  r.graph = options.graph_name;
  r.n = n;
  r.beta = betti(graph);
  const SpectralProblem problem(graph);
  const auto spec = find_eigenvalues(problem, n + 1);
  r.lambda = spec.entries[n - 1].lambda;
  const double tol = options.simplicity_tol * (1.0 + std::abs(r.lambda));
  const bool close_below = n > 1 && r.lambda - spec.entries[n - 2].lambda < tol;
  const bool close_above = spec.entries[n].lambda - r.lambda < tol;
  if (close_below || close_above || spec.entries[n - 1].multiplicity > 1) {
    r.skip_reason = "degenerate";
    return b;
  }
  try {
    b.psi = eigenfunction(problem, r.lambda);
    b.zeros = find_zeros(*b.psi);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::VertexZero) {
      r.skip_reason = "vertex-zero";
    } else if (e.code() == ErrorCode::DegenerateEigenvalue) {
      r.skip_reason = "degenerate";
    } else {
      throw;
    }
    b.psi.reset();
    return b;
  }
  const auto topo = nodal_topology(graph, b.zeros);
  r.phi = topo.phi;
  r.nu = topo.nu;
  r.eta = topo.eta;
  return b;
}

void check(VerificationReport& r, bool ok, const std::string& what) {
  if (!ok) r.failures.push_back(what);
}

void check_hessian(VerificationReport& r, const VerifyOptions& options) {
  const auto& h = r.hessian;
  r.observed = static_cast<long>(h.morse_index);
  check(r, h.gradient_norm < options.gradient_tol, "gradient");
  check(r, h.nondegenerate, "degenerate-hessian");
  check(r, r.observed == r.predicted, "index");
}

void finish(VerificationReport& r) { r.pass = r.failures.empty(); }

double arg_max_abs(const GraphFunction& psi, std::size_t edge, double a, double b) {
  constexpr int samples = 2000;
  const auto& e = psi.problem->graph().edge(edge);
  std::vector<double> bounds;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < e.potential.size(); ++k) bounds.push_back(acc += e.potential[k].length);
  double best_t = 0.5 * (a + b), best = -1.0;
  for (int k = 0; k < samples; ++k) {
    const double t = a + (b - a) * (k + 0.5) / samples;
    const bool near_bound =
        std::any_of(bounds.begin(), bounds.end(), [&](double x) { return std::abs(x - t) < 1e-9 * e.length; });
    if (near_bound) continue;
    const double v = std::abs(psi.value(EdgePoint{edge, t}));
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  return best_t;
}

// Shared by the two cut variants: gamma-tilde, eigenvalue identity and the
// Hessian of gamma -> lambda_{phi+1}(H_gamma).
void run_cut_variant(const MetricGraph& graph, const Eigenpair& psi, const CutSet& cuts,
                     const VerifyOptions& options, VerificationReport& r) {
  r.cuts = cuts;
  const auto gt = gamma_tilde(psi, cuts);
  r.critical_point = gt.gamma;
  check(r, gt.consistency < 1e-8 * (1.0 + std::abs(r.lambda)), "gamma-consistency");
  const std::size_t m = r.phi + 1;
  const double at = lambda_m_gamma(graph, cuts, m, gt.gamma);
  r.lambda_mismatch = std::abs(at - r.lambda);
  check(r, r.lambda_mismatch < options.lambda_tol, "lambda-equality");
  const ScalarField f = [&](const std::vector<double>& g) { return lambda_m_gamma(graph, cuts, m, g); };
  r.hessian = hessian_fd(f, gt.gamma, options.hessian);
  check_hessian(r, options);
}

std::vector<MetricGraph> split_components(const MetricGraph& graph) {
  const auto comps = connected_components(graph);
  std::vector<std::vector<Vertex>> verts(comps.count);
  std::vector<std::vector<Edge>> edges(comps.count);
  std::vector<std::size_t> local(graph.vertex_count());
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    auto& vs = verts[comps.label[v]];
    local[v] = vs.size();
    vs.push_back(graph.vertex(v));
  }
  for (const auto& e : graph.edges()) {
    Edge copy = e;
    copy.from = local[e.from];
    copy.to = local[e.to];
    edges[comps.label[e.from]].push_back(std::move(copy));
  }
  std::vector<MetricGraph> out;
  for (std::size_t c = 0; c < comps.count; ++c) out.emplace_back(std::move(verts[c]), std::move(edges[c]));
  return out;
}

}  // namespace

VerificationReport verify_theorem1(const MetricGraph& graph, std::size_t n, const VerifyOptions& options) {
  VerificationReport r;
  const auto base = prepare(graph, n, options, r);
  if (r.skipped()) return r;
  r.predicted = static_cast<long>(r.phi) - static_cast<long>(n - 1);
  r.cuts = spanning_tree_cuts(graph);
  const auto cuts = r.cuts;
  r.critical_point.assign(cuts.size(), 0.0);
  const ScalarField f = [&](const std::vector<double>& a) { return lambda_n_alpha(graph, cuts, n, a); };
  r.hessian = hessian_fd(f, r.critical_point, options.hessian);
  check_hessian(r, options);
  check(r, r.predicted >= 0 && r.predicted <= static_cast<long>(r.beta), "surplus-range");
  finish(r);
  return r;
}

std::vector<VerificationReport> verify_theorem1(const MetricGraph& graph, std::size_t first, std::size_t last,
                                                const VerifyOptions& options) {
  std::vector<VerificationReport> out;
  for (std::size_t n = first; n <= last; ++n) out.push_back(verify_theorem1(graph, n, options));
  return out;
}

VerificationReport verify_theorem2(const MetricGraph& graph, std::size_t n, const VerifyOptions& options) {
  VerificationReport r;
  const auto base = prepare(graph, n, options, r);
  if (r.skipped()) return r;
  r.predicted = static_cast<long>(n) - 1 + static_cast<long>(r.beta) - static_cast<long>(r.phi);
  try {
    run_cut_variant(graph, *base.psi, cuts_at_maxima(*base.psi, non_tree_edges(graph)), options, r);
  } catch (const Error& e) {
    r.failures.push_back(std::string(to_string(e.code())));
  }
  finish(r);
  return r;
}

VerificationReport verify_theorem2_few_zeros(const MetricGraph& graph, std::size_t n, const VerifyOptions& options) {
  VerificationReport r;
  const auto base = prepare(graph, n, options, r);
  if (r.skipped()) return r;
  r.predicted = static_cast<long>(n) - static_cast<long>(r.nu);
  try {
    const auto nodal = cut_for_nodal_set(graph, base.zeros);
    check(r, nodal.size() == 1 + r.phi - r.nu, "eta");
    check(r, nodal.size() == r.eta, "eta-betti");
    run_cut_variant(graph, *base.psi, relocate_nodal_cuts(*base.psi, nodal, base.zeros), options, r);
    check(r, r.predicted >= 0 && r.predicted <= static_cast<long>(r.eta), "deficiency-range");
  } catch (const Error& e) {
    r.failures.push_back(std::string(to_string(e.code())));
  }
  finish(r);
  return r;
}

PartitionEnergy partition_energy(const MetricGraph& graph, const std::vector<EdgePoint>& points) {
  for (const auto& p : points) {
    if (p.edge >= graph.edge_count() || !(p.t > 0.0) || !(p.t < graph.edge(p.edge).length)) {
      throw Error(ErrorCode::ImproperPartition, "partition points must lie strictly inside edges");
    }
  }
  Subdivision opened;
  try {
    opened = open_at(graph, points, VertexCondition::dirichlet());
  } catch (const Error& e) {
    throw Error(ErrorCode::ImproperPartition, e.what());
  }
  PartitionEnergy out;
  for (const auto& comp : split_components(opened.graph)) {
    out.groundstates.push_back(nth_eigenvalue(SpectralProblem(comp), 1));
  }
  out.components = out.groundstates.size();
  const auto [lo, hi] = std::minmax_element(out.groundstates.begin(), out.groundstates.end());
  out.energy = *hi;
  out.residual = *hi - *lo;
  const auto expected = static_cast<long>(points.size()) - static_cast<long>(betti(graph)) + 1;
  out.cycles_broken = static_cast<long>(out.components) == expected;
  return out;
}

VerificationReport verify_partition_criticality(const MetricGraph& graph, std::size_t n,
                                                const VerifyOptions& options) {
  VerificationReport r;
  const auto base = prepare(graph, n, options, r);
  if (r.skipped()) return r;
  r.predicted = static_cast<long>(n) - static_cast<long>(r.nu);
  try {
    const auto nodal = partition_energy(graph, base.zeros);
    check(r, nodal.residual < options.equipartition_tol, "equipartition");
    check(r, std::abs(nodal.energy - r.lambda) < options.lambda_tol, "nodal-energy");

    const auto cuts = relocate_nodal_cuts(*base.psi, cut_for_nodal_set(graph, base.zeros), base.zeros);
    r.cuts = cuts;
    check(r, cuts.size() == r.eta, "eta");
    const auto gt = gamma_tilde(*base.psi, cuts);
    r.critical_point = gt.gamma;
    const std::size_t m = r.phi + 1;
    auto partition_at = [&](const std::vector<double>& g) {
      const auto pair = nth_eigenpair(SpectralProblem(graph, cuts.with(CutFamily::Robin, g)), m);
      auto zeros = find_zeros(pair);
      if (zeros.size() != r.phi) {
        throw Error(ErrorCode::EvaluationFailed, "partition has " + std::to_string(zeros.size()) + " points");
      }
      return zeros;
    };
    const auto transplanted = partition_at(gt.gamma);
    double shift = 0.0;
    for (std::size_t k = 0; k < transplanted.size(); ++k) {
      shift = std::max(shift, transplanted[k].edge == base.zeros[k].edge
                                  ? std::abs(transplanted[k].t - base.zeros[k].t)
                                  : std::numeric_limits<double>::infinity());
    }
    check(r, shift < options.zero_position_tol, "transplanted-partition");
    const double at = partition_energy(graph, transplanted).energy;
    r.lambda_mismatch = std::abs(at - r.lambda);
    check(r, r.lambda_mismatch < options.lambda_tol, "lambda-equality");
    const ScalarField f = [&](const std::vector<double>& g) { return partition_energy(graph, partition_at(g)).energy; };
    r.hessian = hessian_fd(f, gt.gamma, options.hessian);
    check_hessian(r, options);
  } catch (const Error& e) {
    r.failures.push_back(std::string(to_string(e.code())));
  }
  finish(r);
  return r;
}

CutSet cuts_at_maxima(const GraphFunction& psi, const std::vector<std::size_t>& edges) {
  std::vector<CutPoint> cuts;
  int label = 0;
  for (auto e : edges) {
    const double ell = psi.problem->graph().edge(e).length;
    cuts.push_back({e, arg_max_abs(psi, e, 0.0, ell), label++});
  }
  return CutSet(std::move(cuts), CutFamily::Glued);
}

CutSet relocate_nodal_cuts(const GraphFunction& psi, const CutSet& cuts, const std::vector<EdgePoint>& zeros) {
  std::vector<CutPoint> moved;
  for (const auto& c : cuts.cuts()) {
    double a = 0.0, b = psi.problem->graph().edge(c.edge).length;
    for (const auto& z : zeros) {
      if (z.edge != c.edge) continue;
      if (z.t < c.t) a = std::max(a, z.t);
      if (z.t > c.t) b = std::min(b, z.t);
    }
    moved.push_back({c.edge, arg_max_abs(psi, c.edge, a, b), c.label});
  }
  return CutSet(std::move(moved), CutFamily::Glued);
}

}  // namespace qgraph
