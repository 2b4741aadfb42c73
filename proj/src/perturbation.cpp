#include "qgraph/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/tools/roots.hpp>

#include "qgraph/errors.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> scaled(const std::vector<double>& v, double s) {
  std::vector<double> out(v);
  for (auto& x : out) x *= s;
  return out;
}

double secular_det(const SpectralProblem& p, double lambda) {
  const Eigen::MatrixXd m = secular_matrix(p, lambda).real();
  return m.partialPivLu().determinant();
}

// Real root of det M nearest to `center` within [center - w, center + w].
std::optional<double> nearest_root(const SpectralProblem& p, double center, double w) {
  constexpr int samples = 32;
  std::vector<double> xs(samples + 1), ds(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    xs[i] = center - w + 2.0 * w * i / samples;
    ds[i] = secular_det(p, xs[i]);
  }
  std::optional<double> best;
  auto consider = [&](double r) {
    if (!best || std::abs(r - center) < std::abs(*best - center)) best = r;
  };
  for (int i = 0; i < samples; ++i) {
    if (ds[i] == 0.0) {
      consider(xs[i]);
      continue;
    }
    if (ds[i] * ds[i + 1] >= 0.0) continue;
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    const auto [a, b] = boost::math::tools::toms748_solve([&](double x) { return secular_det(p, x); }, xs[i],
                                                          xs[i + 1], ds[i], ds[i + 1], tol, iters);
    consider(0.5 * (a + b));
  }
  if (ds[samples] == 0.0) consider(xs[samples]);
  return best;
}

double continued_eigenvalue(const MetricGraph& graph, const CutSet& cuts, std::size_t n,
                            const std::vector<double>& alpha, const ContinuationOptions& options) {
  if (n == 0) throw Error(ErrorCode::InvalidGraph, "eigenvalue index is 1-based");
  const SpectralProblem glued(graph, cuts.glued());
  const auto spec = find_eigenvalues(glued, n + 1).values();
  const double lam0 = spec[n - 1];
  double gap = spec[n] - lam0;
  if (n > 1) gap = std::min(gap, lam0 - spec[n - 2]);
  if (gap < 1e-7 * (1.0 + std::abs(lam0))) {
    throw Error(ErrorCode::DegenerateAtZero, "lambda_" + std::to_string(n) + " of H0 is not simple");
  }
  const double w = options.window_fraction * gap;
  const auto steps = std::max<std::size_t>(options.steps, 1);

  double s = 0.0, ds = 1.0 / static_cast<double>(steps);
  double prev = lam0, slope = 0.0;
  std::size_t halvings = 0;
  while (s < 1.0) {
    const double next = std::min(1.0, s + ds);
    const double step = next - s;
    const SpectralProblem p(graph, cuts.with(CutFamily::ImaginaryFlux, scaled(alpha, next)));
    const double pred = prev + slope * step;
    const auto root = nearest_root(p, pred, w);
    if (root && std::abs(*root - prev) <= w) {
      slope = (*root - prev) / step;
      prev = *root;
      s = next;
      continue;
    }
    if (++halvings > options.max_halvings) {
      throw Error(ErrorCode::BranchLost, "no real eigenvalue near " + std::to_string(prev) + " at path fraction " +
                                             std::to_string(next));
    }
    ds *= 0.5;
  }
  return prev;
}

std::pair<cplx, cplx> cut_values(const GraphFunction& g, std::size_t j) {
  const auto& cs = g.problem->cut_sides().at(j);
  const auto& segs = g.problem->segments();
  return {g.value(cs.minus, segs[cs.minus].length), g.value(cs.plus, 0.0)};
}

}  // namespace

double reduce_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

std::vector<double> flux_from_potential(const MetricGraph& graph, const CutSet& cuts, const std::vector<double>& a) {
  if (a.size() != graph.edge_count()) {
    throw Error(ErrorCode::InvalidGraph, "one-form needs one value per edge");
  }
  std::vector<bool> cut_edge(graph.edge_count(), false);
  for (const auto& c : cuts.cuts()) cut_edge.at(c.edge) = true;

  // BFS over uncut edges from vertex 0, recording the signed integral of a
  // from the root to every vertex.
  const auto nv = graph.vertex_count();
  std::vector<std::optional<double>> potential(nv);
  potential[0] = 0.0;
  std::vector<std::size_t> queue{0};
  std::size_t tree_edges = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto v = queue[head];
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      if (cut_edge[e]) continue;
      const auto& edge = graph.edge(e);
      const double integral = a[e] * edge.length;
      std::optional<std::pair<std::size_t, double>> step;
      if (edge.from == v && !potential[edge.to]) step = {{edge.to, *potential[v] + integral}};
      if (edge.to == v && !potential[edge.from]) step = {{edge.from, *potential[v] - integral}};
      if (step) {
        potential[step->first] = step->second;
        queue.push_back(step->first);
        ++tree_edges;
      }
    }
  }
  const auto uncut = static_cast<std::size_t>(std::count(cut_edge.begin(), cut_edge.end(), false));
  if (queue.size() != nv || tree_edges != uncut) {
    throw Error(ErrorCode::PathNotFound, "uncut edges do not form a spanning tree");
  }
  std::vector<double> alpha;
  for (const auto& c : cuts.cuts()) {
    const auto& edge = graph.edge(c.edge);
    const double around = a[c.edge] * edge.length + *potential[edge.to] - *potential[edge.from];
    alpha.push_back(reduce_angle(around));
  }
  return alpha;
}

double lambda_n_alpha(const MetricGraph& graph, const CutSet& cuts, std::size_t n, const std::vector<double>& alpha) {
  return nth_eigenvalue(SpectralProblem(graph, cuts.with(CutFamily::Flux, alpha)), n);
}

double lambda_m_gamma(const MetricGraph& graph, const CutSet& cuts, std::size_t m, const std::vector<double>& gamma) {
  return nth_eigenvalue(SpectralProblem(graph, cuts.with(CutFamily::Robin, gamma)), m);
}

double lambda_n_ialpha_continued(const MetricGraph& graph, const CutSet& cuts, std::size_t n,
                                 const std::vector<double>& alpha, const ContinuationOptions& options) {
  return continued_eigenvalue(graph, cuts, n, alpha, options);
}

GammaTilde gamma_tilde(const GraphFunction& psi, const CutSet& cuts, double vertex_zero_tol) {
  GammaTilde out;
  const double sup = psi.sup_norm();
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    const EdgePoint p{cuts.cuts()[j].edge, cuts.cuts()[j].t};
    const cplx fp = psi.value(p, End::Start), fm = psi.value(p, End::Finish);
    if (std::min(std::abs(fp), std::abs(fm)) < vertex_zero_tol * sup) {
      throw Error(ErrorCode::ZeroAtCut, "eigenfunction vanishes at cut " + std::to_string(j));
    }
    // Derivatives pointing away from the cut: +slope on the c+ side,
    // -slope on the c- side.
    const double gp = std::real(psi.slope(p, End::Start) / fp);
    const double gm = -std::real(-psi.slope(p, End::Finish) / fm);
    out.gamma.push_back(gp);
    out.gamma_minus.push_back(gm);
    out.consistency = std::max(out.consistency, std::abs(gp - gm));
  }
  return out;
}

HessianReport hessian_fd(const ScalarField& f, const std::vector<double>& x, const HessianOptions& options) {
  const auto d = x.size();
  auto eval = [&](const std::vector<double>& p) {
    try {
      return f(p);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::EvaluationFailed, std::string("stencil evaluation failed: ") + e.what());
    }
  };
  HessianReport r;
  r.h = options.h;
  r.richardson = options.richardson;
  r.value = eval(x);
  const auto di = static_cast<Eigen::Index>(d);

  auto stencil = [&](double h, Eigen::MatrixXd& hess, Eigen::VectorXd& grad) {
    hess = Eigen::MatrixXd::Zero(di, di);
    grad = Eigen::VectorXd::Zero(di);
    auto shifted = [&](std::size_t i, double si, std::size_t j, double sj) {
      auto p = x;
      p[i] += si * h;
      if (j < d) p[j] += sj * h;
      return eval(p);
    };
    for (std::size_t i = 0; i < d; ++i) {
      const double fp = shifted(i, 1.0, d, 0.0), fm = shifted(i, -1.0, d, 0.0);
      const auto ii = static_cast<Eigen::Index>(i);
      hess(ii, ii) = (fp - 2.0 * r.value + fm) / (h * h);
      grad(ii) = (fp - fm) / (2.0 * h);
    }
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        const double v = (shifted(i, 1.0, j, 1.0) - shifted(i, 1.0, j, -1.0) - shifted(i, -1.0, j, 1.0) +
                          shifted(i, -1.0, j, -1.0)) /
                         (4.0 * h * h);
        const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
        hess(ii, jj) = hess(jj, ii) = v;
      }
    }
  };
  Eigen::MatrixXd h1;
  Eigen::VectorXd g1;
  stencil(options.h, h1, g1);
  if (options.richardson) {
    Eigen::MatrixXd h2;
    Eigen::VectorXd g2;
    stencil(0.5 * options.h, h2, g2);
    r.matrix = (4.0 * h2 - h1) / 3.0;
    r.gradient = (4.0 * g2 - g1) / 3.0;
  } else {
    r.matrix = h1;
    r.gradient = g1;
  }
  r.matrix = 0.5 * (r.matrix + r.matrix.transpose()).eval();
  r.gradient_norm = d == 0 ? 0.0 : r.gradient.norm();
  r.degen_tol = options.degen_tol >= 0.0 ? options.degen_tol : 1e-4 * (1.0 + std::abs(r.value));
  if (d > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.matrix, Eigen::EigenvaluesOnly);
    r.eigenvalues = es.eigenvalues();
  } else {
    r.eigenvalues = Eigen::VectorXd();
  }
  for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k) {
    const double e = r.eigenvalues(k);
    if (e < -r.degen_tol) {
      ++r.morse_index;
    } else if (e > r.degen_tol) {
      ++r.positive;
    } else {
      ++r.degenerate;
    }
  }
  r.nondegenerate = r.degenerate == 0;
  return r;
}

MorseResult morse_index(const Eigen::MatrixXd& symmetric, double degen_tol) {
  MorseResult out;
  if (symmetric.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) < -degen_tol) ++out.index;
    if (std::abs(ev(k)) <= degen_tol) out.nondegenerate = false;
  }
  return out;
}

MorseResult morse_index(const HessianReport& report, double degen_tol) {
  return morse_index(report.matrix, degen_tol);
}

MapRResult map_R(const MetricGraph& graph, const CutSet& cuts, std::size_t m, const std::vector<double>& gamma) {
  const SpectralProblem p(graph, cuts.with(CutFamily::Robin, gamma));
  const auto g = nth_eigenpair(p, m);
  const double sup = g.sup_norm();
  MapRResult out;
  out.lambda = g.lambda.real();
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    const auto [minus, plus] = cut_values(g, j);
    if (std::min(std::abs(minus), std::abs(plus)) < 1e-8 * sup) {
      throw Error(ErrorCode::ZeroAtCut, "H_gamma eigenfunction vanishes at cut " + std::to_string(j));
    }
    const double ratio = std::real(plus / minus);
    if (ratio <= 0.0) {
      throw Error(ErrorCode::SignFlipAtCut, "g(c+)/g(c-) <= 0 at cut " + std::to_string(j));
    }
    out.alpha.push_back(std::log(ratio));
  }
  return out;
}

MapRInverseResult map_R_inverse(const MetricGraph& graph, const CutSet& cuts, std::size_t n,
                                const std::vector<double>& alpha, const ContinuationOptions& options) {
  MapRInverseResult out;
  out.lambda = continued_eigenvalue(graph, cuts, n, alpha, options);
  const SpectralProblem p(graph, cuts.with(CutFamily::ImaginaryFlux, alpha));
  const auto phi = eigenfunction(p, out.lambda);
  const double sup = phi.sup_norm();
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    const auto& cs = p.cut_sides()[j];
    const cplx v = phi.value(cs.plus, 0.0);
    if (std::abs(v) < 1e-8 * sup) {
      throw Error(ErrorCode::ZeroAtCut, "continued eigenfunction vanishes at cut " + std::to_string(j));
    }
    out.gamma.push_back(std::real(phi.slope(cs.plus, 0.0) / v));
  }
  return out;
}

double symmetry_spectrum_check(const MetricGraph& graph, const CutSet& cuts, const std::vector<double>& varsigma,
                               const std::vector<double>& alpha, std::size_t count) {
  std::vector<double> lo(varsigma.size()), hi(varsigma.size());
  for (std::size_t j = 0; j < varsigma.size(); ++j) {
    lo[j] = varsigma[j] - alpha.at(j);
    hi[j] = varsigma[j] + alpha.at(j);
  }
  const auto a = find_eigenvalues(SpectralProblem(graph, cuts.with(CutFamily::Flux, lo)), count).values();
  const auto b = find_eigenvalues(SpectralProblem(graph, cuts.with(CutFamily::Flux, hi)), count).values();
  double dev = 0.0;
  for (std::size_t k = 0; k < count; ++k) dev = std::max(dev, std::abs(a[k] - b[k]));
  return dev;
}

std::vector<std::vector<double>> symmetry_points(std::size_t dimension) {
  std::vector<std::vector<double>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << dimension); ++mask) {
    std::vector<double> p(dimension);
    for (std::size_t j = 0; j < dimension; ++j) p[j] = (mask >> j) & 1U ? kPi : 0.0;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace qgraph
