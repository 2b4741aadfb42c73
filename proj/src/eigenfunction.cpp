#include "qgraph/eigenfunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "qgraph/errors.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph {
namespace {

Basis<cplx> basis_for(cplx lambda, double q, double x) {
  if (lambda.imag() == 0.0) {
    const auto b = basis_at(lambda.real(), q, x);
    return {b.c, b.s, b.dc, b.ds};
  }
  return basis_at(lambda, q, x);
}

Eigen::JacobiSVD<Eigen::MatrixXcd> full_svd(const Eigen::MatrixXcd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

double inf_norm(const Eigen::VectorXcd& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v(i)));
  return m;
}

}  // namespace

cplx GraphFunction::value(std::size_t segment, double x) const {
  const auto& s = problem->segments()[segment];
  const auto b = basis_for(lambda, s.q, x);
  const auto k = static_cast<Eigen::Index>(2 * segment);
  return coeffs(k) * b.c + coeffs(k + 1) * b.s;
}

cplx GraphFunction::slope(std::size_t segment, double x) const {
  const auto& s = problem->segments()[segment];
  const auto b = basis_for(lambda, s.q, x);
  const auto k = static_cast<Eigen::Index>(2 * segment);
  return coeffs(k) * b.dc + coeffs(k + 1) * b.ds;
}

cplx GraphFunction::value(const EdgePoint& p, End prefer) const {
  const auto [seg, x] = problem->locate(p, prefer);
  return value(seg, x);
}

cplx GraphFunction::slope(const EdgePoint& p, End prefer) const {
  const auto [seg, x] = problem->locate(p, prefer);
  return slope(seg, x);
}

double GraphFunction::l2_norm() const {
  double total = 0.0;
  const auto& segs = problem->segments();
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const auto in = basis_integrals(lambda.real(), segs[s].q, segs[s].length);
    const auto k = static_cast<Eigen::Index>(2 * s);
    const cplx a = coeffs(k), b = coeffs(k + 1);
    total += std::norm(a) * in.cc + std::norm(b) * in.ss + 2.0 * std::real(a * std::conj(b)) * in.cs;
  }
  return std::sqrt(std::max(total, 0.0));
}

double GraphFunction::sup_norm(std::size_t samples_per_segment) const {
  double m = 0.0;
  const auto& segs = problem->segments();
  for (std::size_t s = 0; s < segs.size(); ++s) {
    for (std::size_t i = 0; i <= samples_per_segment; ++i) {
      const double x = segs[s].length * static_cast<double>(i) / static_cast<double>(samples_per_segment);
      m = std::max(m, std::abs(value(s, x)));
    }
  }
  return m;
}

bool GraphFunction::is_real(double tol) const {
  if (lambda.imag() != 0.0) return false;
  const double scale = inf_norm(coeffs);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    if (std::abs(coeffs(i).imag()) > tol * scale) return false;
  }
  return true;
}

double normalize(GraphFunction& f) {
  auto& c = f.coeffs;
  const double big = inf_norm(c);
  if (big == 0.0) throw Error(ErrorCode::EvaluationFailed, "cannot normalize the zero function");
  const bool real = f.problem->real_conditions() && f.lambda.imag() == 0.0;
  Eigen::Index pivot = 0;
  if (real || std::abs(c(0)) <= 1e-8 * big) {
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      if (std::abs(c(i)) > std::abs(c(pivot))) pivot = i;
    }
  }
  const cplx rot = std::conj(c(pivot)) / std::abs(c(pivot));
  c *= rot;
  if (real) {
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = c(i).real();
    // Sign: value at the first segment start nonnegative, falling back to the
    // first significant coefficient.
    Eigen::Index lead = 0;
    while (lead + 1 < c.size() && std::abs(c(lead)) <= 1e-12 * big) ++lead;
    if (c(lead).real() < 0.0) {
      c = -c;
    }
  }
  const double n = f.l2_norm();
  c /= n;
  return 1.0 / n;
}

Eigenpair eigenfunction(std::shared_ptr<const SpectralProblem> problem, double lambda,
                        const EigenfunctionOptions& options) {
  const auto sys = assemble_secular(*problem, lambda);
  const auto svd = full_svd(sys.matrix);
  const auto& s = svd.singularValues();
  const double ref = secular_reference_norm(s);
  const auto last = s.size() - 1;
  if (s(last) > options.eig_tol * ref) {
    throw Error(ErrorCode::NotAnEigenvalue,
                "sigma_min/|M| = " + std::to_string(s(last) / ref) + " at lambda = " + std::to_string(lambda));
  }
  if (last > 0 && s(last - 1) < options.mult_tol * ref) {
    throw Error(ErrorCode::DegenerateEigenvalue,
                "eigenvalue " + std::to_string(lambda) + " is not simple");
  }
  Eigenpair pair;
  pair.problem = std::move(problem);
  pair.lambda = lambda;
  pair.coeffs = unscale_coefficients(svd.matrixV().col(last), sys.scale);
  pair.norm_constant = normalize(pair);
  pair.residual = inf_norm(sys.matrix * scale_coefficients(pair.coeffs, sys.scale));
  return pair;
}

Eigenpair eigenfunction(const SpectralProblem& problem, double lambda, const EigenfunctionOptions& options) {
  return eigenfunction(std::make_shared<const SpectralProblem>(problem), lambda, options);
}

Eigenpair nth_eigenpair(const SpectralProblem& problem, std::size_t n, const EigenfunctionOptions& options) {
  return eigenfunction(problem, nth_eigenvalue(problem, n), options);
}

std::vector<GraphFunction> solution_space(const SpectralProblem& problem, cplx lambda,
                                          const std::vector<std::size_t>& free_vertices, double tol) {
  const auto sys = assemble_secular(problem, lambda);
  std::vector<Eigen::Index> keep;
  for (const auto& b : sys.blocks) {
    const bool drop = b.kind == RowBlock::Kind::Vertex &&
                      std::find(free_vertices.begin(), free_vertices.end(), b.index) != free_vertices.end();
    if (drop) continue;
    for (std::size_t r = 0; r < b.rows; ++r) keep.push_back(static_cast<Eigen::Index>(b.first_row + r));
  }
  const auto cols = sys.matrix.cols();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(keep.size()), cols);
  for (std::size_t i = 0; i < keep.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = sys.matrix.row(keep[i]);

  auto shared = std::make_shared<const SpectralProblem>(problem);
  std::vector<GraphFunction> out;
  if (m.rows() == 0) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(cols);
      e(k) = 1.0;
      out.push_back({shared, lambda, unscale_coefficients(e, sys.scale)});
    }
    return out;
  }
  const auto svd = full_svd(m);
  const auto& s = svd.singularValues();
  const double ref = secular_reference_norm(s);
  for (Eigen::Index k = 0; k < cols; ++k) {
    if (k >= s.size() || s(k) < tol * ref) {
      out.push_back({shared, lambda, unscale_coefficients(svd.matrixV().col(k), sys.scale)});
    }
  }
  return out;
}

double vertex_residual(const GraphFunction& f, std::size_t vertex) {
  const auto& ends = f.problem->vertex_ends().at(vertex);
  const auto& segs = f.problem->segments();
  const auto& cond = f.problem->graph().vertex(vertex).condition;
  auto val = [&](const SegmentEnd& e) {
    return f.value(e.segment, e.end == End::Start ? 0.0 : segs[e.segment].length);
  };
  auto inward = [&](const SegmentEnd& e) {
    const auto d = f.slope(e.segment, e.end == End::Start ? 0.0 : segs[e.segment].length);
    return e.end == End::Start ? d : -d;
  };
  const cplx v0 = val(ends.front());
  if (cond.is_dirichlet()) return std::abs(v0);
  double r = 0.0;
  cplx sum = -cond.chi * v0;
  for (const auto& e : ends) {
    r = std::max(r, std::abs(val(e) - v0));
    sum += inward(e);
  }
  return std::max(r, std::abs(sum));
}

std::vector<SampledPoint> sample(const GraphFunction& f, std::size_t per_segment) {
  std::vector<SampledPoint> out;
  const auto& segs = f.problem->segments();
  for (std::size_t s = 0; s < segs.size(); ++s) {
    for (std::size_t i = 0; i <= per_segment; ++i) {
      const double x = segs[s].length * static_cast<double>(i) / static_cast<double>(per_segment);
      out.push_back({segs[s].edge, s, segs[s].offset + x, f.value(s, x), f.slope(s, x)});
    }
  }
  return out;
}

std::vector<EdgePoint> find_zeros(const GraphFunction& f, const ZeroOptions& options) {
  if (!f.is_real(1e-8)) throw Error(ErrorCode::EvaluationFailed, "zero counting needs a real function");
  const auto& p = *f.problem;
  const auto& g = p.graph();
  const auto& segs = p.segments();
  const double sup = f.sup_norm();

  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.vertex(v).condition.is_dirichlet()) continue;
    const auto& e = p.vertex_ends()[v].front();
    const double fv = std::abs(f.value(e.segment, e.end == End::Start ? 0.0 : segs[e.segment].length));
    if (fv < options.vertex_zero_tol * sup) {
      throw Error(ErrorCode::VertexZero, "eigenfunction vanishes at vertex " + g.vertex(v).id);
    }
  }
  for (std::size_t j = 0; j < p.cut_sides().size(); ++j) {
    const auto& cs = p.cut_sides()[j];
    const double a = std::abs(f.value(cs.minus, segs[cs.minus].length));
    const double b = std::abs(f.value(cs.plus, 0.0));
    if (std::min(a, b) < options.vertex_zero_tol * sup) {
      throw Error(ErrorCode::ZeroAtCut, "function vanishes at cut " + std::to_string(j));
    }
  }

  std::vector<EdgePoint> zeros;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const double ell = g.edge(e).length;
    std::vector<double> found;
    const auto& es = p.edge_segments(e);
    for (std::size_t k = 0; k < es.size(); ++k) {
      const auto& seg = segs[es[k]];
      const auto idx = static_cast<Eigen::Index>(2 * es[k]);
      const double a = f.coeffs(idx).real(), b = f.coeffs(idx + 1).real();
      const double z = f.lambda.real() - seg.q;
      const double len = seg.length;
      const double margin = 1e-12 * len;
      auto accept = [&](double x) {
        if (x > margin && x < len - margin) found.push_back(seg.offset + x);
      };
      if (std::abs(z) < kLinearSwitch) {
        if (b != 0.0) accept(-a / b);
      } else if (z > 0.0) {
        const double w = std::sqrt(z);
        const double theta = std::atan2(b / w, a);
        const double pi = std::numbers::pi;
        const auto kmin = static_cast<long>(std::floor((-theta - pi / 2.0) / pi));
        for (long m = kmin;; ++m) {
          const double x = (theta + pi / 2.0 + static_cast<double>(m) * pi) / w;
          if (x >= len) break;
          accept(x);
        }
      } else {
        const double kap = std::sqrt(-z);
        if (b != 0.0) {
          const double r = -a * kap / b;
          if (std::abs(r) < 1.0) accept(std::atanh(r) / kap);
        }
      }
      if (k > 0 && std::abs(f.value(es[k], 0.0)) < 1e-9 * sup) found.push_back(seg.offset);
    }
    std::sort(found.begin(), found.end());
    double last = -1.0;
    for (double t : found) {
      if (t - last > 1e-9 * ell) zeros.push_back({e, t});
      last = t;
    }
  }
  return zeros;
}

std::size_t count_zeros(const GraphFunction& f, const ZeroOptions& options) {
  return find_zeros(f, options).size();
}

std::size_t nodal_domain_count(const GraphFunction& f, const ZeroOptions& options) {
  return nodal_topology(f.problem->graph(), find_zeros(f, options)).nu;
}

}  // namespace qgraph
