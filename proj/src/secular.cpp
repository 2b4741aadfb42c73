#include "qgraph/secular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qgraph/errors.hpp"

namespace qgraph {
namespace {

enum class BoundaryKind { Junction, Cut };

struct Boundary {
  double t;
  BoundaryKind kind;
  std::size_t cut;
};

Basis<cplx> basis_for(cplx lambda, double q, double x) {
  if (lambda.imag() == 0.0) {
    const auto b = basis_at(lambda.real(), q, x);
    return {b.c, b.s, b.dc, b.ds};
  }
  return basis_at(lambda, q, x);
}

// Row coefficients on the two unknowns of one segment.
struct Form {
  std::size_t segment;
  cplx a, b;
};

class Assembler {
 public:
  Assembler(const SpectralProblem& p, cplx lambda)
      : p_(p), lambda_(lambda), scale_(secular_scale(lambda)) {
    const auto n = p.unknown_count();
    m_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    ends_.reserve(p.segments().size());
    for (const auto& s : p.segments()) ends_.push_back(basis_for(lambda, s.q, s.length));
  }

  Form value(const SegmentEnd& e) const {
    if (e.end == End::Start) return {e.segment, 1.0, 0.0};
    const auto& b = ends_[e.segment];
    return {e.segment, b.c, scale_ * b.s};
  }

  // Edge-direction derivative divided by the scale.
  Form slope(const SegmentEnd& e) const {
    if (e.end == End::Start) return {e.segment, 0.0, 1.0};
    const auto& b = ends_[e.segment];
    return {e.segment, b.dc / scale_, b.ds};
  }

  // Derivative into the segment, divided by the scale.
  Form inward(const SegmentEnd& e) const {
    auto f = slope(e);
    if (e.end == End::Finish) {
      f.a = -f.a;
      f.b = -f.b;
    }
    return f;
  }

  void add(std::size_t row, const Form& f, cplx weight) {
    const auto r = static_cast<Eigen::Index>(row);
    const auto c = static_cast<Eigen::Index>(2 * f.segment);
    m_(r, c) += weight * f.a;
    m_(r, c + 1) += weight * f.b;
  }

  SecularSystem run() {
    std::size_t row = 0;
    SecularSystem sys;
    const auto& g = p_.graph();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      const auto& ends = p_.vertex_ends()[v];
      const auto first = row;
      const auto& cond = g.vertex(v).condition;
      if (cond.is_dirichlet()) {
        add(row++, value(ends.front()), 1.0);
      } else {
        for (std::size_t k = 1; k < ends.size(); ++k) {
          add(row, value(ends[0]), 1.0);
          add(row, value(ends[k]), -1.0);
          ++row;
        }
        for (const auto& e : ends) add(row, inward(e), 1.0);
        add(row, value(ends.front()), -cond.chi / scale_);
        ++row;
      }
      sys.blocks.push_back({RowBlock::Kind::Vertex, v, first, row - first});
    }
    for (std::size_t j = 0; j < p_.junctions().size(); ++j) {
      const auto& jn = p_.junctions()[j];
      const SegmentEnd before{jn.before, End::Finish}, after{jn.after, End::Start};
      add(row, value(before), 1.0);
      add(row, value(after), -1.0);
      add(row + 1, slope(before), 1.0);
      add(row + 1, slope(after), -1.0);
      sys.blocks.push_back({RowBlock::Kind::Junction, j, row, 2});
      row += 2;
    }
    const auto& cuts = p_.cuts();
    for (std::size_t j = 0; j < cuts.size(); ++j) {
      const auto& cs = p_.cut_sides()[j];
      const SegmentEnd minus{cs.minus, End::Finish}, plus{cs.plus, End::Start};
      const double par = cuts.params()[j];
      switch (cuts.family()) {
        case CutFamily::Glued:
        case CutFamily::Flux:
        case CutFamily::ImaginaryFlux: {
          cplx jump = 1.0;
          if (cuts.family() == CutFamily::Flux) jump = std::polar(1.0, par);
          if (cuts.family() == CutFamily::ImaginaryFlux) jump = std::exp(par);
          add(row, value(plus), 1.0);
          add(row, value(minus), -jump);
          add(row + 1, slope(plus), 1.0);
          add(row + 1, slope(minus), -jump);
          break;
        }
        case CutFamily::Robin:
          add(row, slope(plus), 1.0);
          add(row, value(plus), -par / scale_);
          add(row + 1, slope(minus), 1.0);
          add(row + 1, value(minus), -par / scale_);
          break;
      }
      sys.blocks.push_back({RowBlock::Kind::Cut, j, row, 2});
      row += 2;
    }
    sys.matrix = std::move(m_);
    sys.scale = scale_;
    return sys;
  }

 private:
  const SpectralProblem& p_;
  cplx lambda_;
  double scale_;
  Eigen::MatrixXcd m_;
  std::vector<Basis<cplx>> ends_;
};

}  // namespace

SpectralProblem::SpectralProblem(MetricGraph graph, CutSet cuts)
    : graph_(std::move(graph)), cuts_(std::move(cuts)) {
  require_valid(graph_);
  require_valid_cuts(graph_, cuts_);
  edge_segments_.resize(graph_.edge_count());
  vertex_ends_.resize(graph_.vertex_count());
  cut_sides_.resize(cuts_.size());

  for (std::size_t e = 0; e < graph_.edge_count(); ++e) {
    const auto& edge = graph_.edge(e);
    std::vector<Boundary> bounds;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < edge.potential.size(); ++k) {
      acc += edge.potential[k].length;
      bounds.push_back({acc, BoundaryKind::Junction, 0});
    }
    for (std::size_t j = 0; j < cuts_.size(); ++j) {
      if (cuts_.cuts()[j].edge == e) bounds.push_back({cuts_.cuts()[j].t, BoundaryKind::Cut, j});
    }
    std::sort(bounds.begin(), bounds.end(),
              [](const Boundary& a, const Boundary& b) { return a.t < b.t; });

    double start = 0.0;
    std::size_t piece = 0;
    double piece_end = edge.potential.front().length;
    for (std::size_t k = 0; k <= bounds.size(); ++k) {
      const double stop = k < bounds.size() ? bounds[k].t : edge.length;
      while (piece + 1 < edge.potential.size() && start >= piece_end - 1e-12 * edge.length) {
        ++piece;
        piece_end += edge.potential[piece].length;
      }
      const auto idx = segments_.size();
      segments_.push_back({e, start, stop - start, edge.potential[piece].q});
      edge_segments_[e].push_back(idx);
      if (k > 0) {
        const auto& b = bounds[k - 1];
        if (b.kind == BoundaryKind::Junction) {
          junctions_.push_back({idx - 1, idx});
        } else {
          cut_sides_[b.cut] = {idx - 1, idx};
        }
      }
      start = stop;
    }
    vertex_ends_[edge.from].push_back({edge_segments_[e].front(), End::Start});
    vertex_ends_[edge.to].push_back({edge_segments_[e].back(), End::Finish});
  }
}

std::pair<std::size_t, double> SpectralProblem::locate(const EdgePoint& p, End prefer) const {
  const auto& segs = edge_segments_.at(p.edge);
  const double tol = 1e-13 * graph_.edge(p.edge).length;
  std::size_t pick = segs.front();
  if (prefer == End::Start) {
    for (auto s : segs) {
      if (segments_[s].offset <= p.t + tol) pick = s;
    }
  } else {
    pick = segs.back();
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
      const auto& seg = segments_[*it];
      if (seg.offset + seg.length >= p.t - tol) pick = *it;
    }
  }
  const auto& seg = segments_[pick];
  return {pick, std::clamp(p.t - seg.offset, 0.0, seg.length)};
}

double secular_reference_norm(const Eigen::VectorXd& singular_values) {
  return singular_values.size() == 0 ? 1.0 : std::max(1.0, singular_values(0));
}

double secular_scale(cplx lambda) { return std::sqrt(std::max(1.0, std::abs(lambda))); }

SecularSystem assemble_secular(const SpectralProblem& problem, cplx lambda) {
  return Assembler(problem, lambda).run();
}

Eigen::MatrixXcd secular_matrix(const SpectralProblem& problem, cplx lambda) {
  return assemble_secular(problem, lambda).matrix;
}

Eigen::VectorXcd unscale_coefficients(const Eigen::VectorXcd& x, double scale) {
  Eigen::VectorXcd c = x;
  for (Eigen::Index k = 1; k < c.size(); k += 2) c(k) *= scale;
  return c;
}

Eigen::VectorXcd scale_coefficients(const Eigen::VectorXcd& coeffs, double scale) {
  Eigen::VectorXcd x = coeffs;
  for (Eigen::Index k = 1; k < x.size(); k += 2) x(k) /= scale;
  return x;
}

Eigen::VectorXd secular_singular_values(const SpectralProblem& problem, cplx lambda) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(secular_matrix(problem, lambda));
  return svd.singularValues();
}

double relative_sigma_min(const SpectralProblem& problem, cplx lambda) {
  const auto s = secular_singular_values(problem, lambda);
  if (s.size() == 0) return 0.0;
  return s(s.size() - 1) / secular_reference_norm(s);
}

std::size_t count_below(const SpectralProblem& problem, double lambda) {
  if (!problem.self_adjoint()) {
    throw Error(ErrorCode::NotSelfAdjointFamily, "eigenvalue counting needs a self-adjoint family");
  }
  // Every segment is split at an irrational fraction so that Dirichlet
  // eigenvalues of the pieces rarely coincide with those of the graph.
  constexpr double split = 0.6180339887498949;
  const auto& g = problem.graph();
  const auto& cuts = problem.cuts();
  const bool robin = cuts.family() == CutFamily::Robin;

  constexpr long none = -1;
  std::vector<double> chi;
  std::vector<long> vertex_node(g.vertex_count(), none);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.vertex(v).condition.is_dirichlet()) continue;
    vertex_node[v] = static_cast<long>(chi.size());
    chi.push_back(g.vertex(v).condition.chi);
  }
  const auto& segs = problem.segments();
  std::vector<long> start_node(segs.size(), none), end_node(segs.size(), none);
  std::vector<double> phase(segs.size(), 0.0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& es = problem.edge_segments(e);
    start_node[es.front()] = vertex_node[g.edge(e).from];
    end_node[es.back()] = vertex_node[g.edge(e).to];
  }
  for (const auto& jn : problem.junctions()) {
    start_node[jn.after] = end_node[jn.before] = static_cast<long>(chi.size());
    chi.push_back(0.0);
  }
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    const auto& cs = problem.cut_sides()[j];
    const double par = cuts.params()[j];
    if (robin) {
      start_node[cs.plus] = static_cast<long>(chi.size());
      chi.push_back(par);
      end_node[cs.minus] = static_cast<long>(chi.size());
      chi.push_back(-par);
    } else {
      start_node[cs.plus] = end_node[cs.minus] = static_cast<long>(chi.size());
      chi.push_back(0.0);
      if (cuts.family() == CutFamily::Flux) phase[cs.plus] = par;
    }
  }
  std::vector<long> mid_node(segs.size());
  for (auto& m : mid_node) {
    m = static_cast<long>(chi.size());
    chi.push_back(0.0);
  }

  const auto n = static_cast<Eigen::Index>(chi.size());
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  long dirichlet = 0;
  auto piece = [&](long u, long w, double len, double pot, double theta) {
    dirichlet += dirichlet_count_below(lambda, pot, len);
    const auto r = dtn_ratios(lambda, pot, len);
    if (u != none) q(u, u) -= r.diag;
    if (w != none) q(w, w) -= r.diag;
    if (u != none && w != none) {
      q(u, w) += std::polar(r.off, -theta);
      q(w, u) += std::polar(r.off, theta);
    }
  };
  for (std::size_t s = 0; s < segs.size(); ++s) {
    piece(start_node[s], mid_node[s], split * segs[s].length, segs[s].q, phase[s]);
    piece(mid_node[s], end_node[s], (1.0 - split) * segs[s].length, segs[s].q, 0.0);
  }
  for (Eigen::Index k = 0; k < n; ++k) q(k, k) -= chi[static_cast<std::size_t>(k)];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  long positive = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > 0.0) ++positive;
  }
  return static_cast<std::size_t>(dirichlet + positive);
}

}  // namespace qgraph
