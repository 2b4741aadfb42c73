#include "qgraph/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>

#include <Eigen/SVD>

namespace qgraph {
namespace {

// Eigenvalue counting with a cache of evaluated points.
class Counter {
 public:
  explicit Counter(const SpectralProblem& p) : p_(p) {}

  std::size_t operator()(double lambda) {
    if (auto it = samples_.find(lambda); it != samples_.end()) return it->second;
    ++evaluations_;
    const auto n = count_below(p_, lambda);
    samples_.emplace(lambda, n);
    return n;
  }

  // Smallest lambda with count_below(lambda') >= k for all lambda' > lambda,
  // i.e. lambda_k, by bisection between cached samples.
  double locate(std::size_t k) {
    double a = samples_.begin()->first, b = std::prev(samples_.end())->first;
    for (const auto& [x, n] : samples_) {
      if (n < k) a = x;
    }
    for (auto it = samples_.rbegin(); it != samples_.rend(); ++it) {
      if (it->second >= k) b = it->first;
    }
    for (int iter = 0; iter < 400; ++iter) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (b - a <= 4e-16 * std::max({1.0, std::abs(a), std::abs(b)})) break;
      if ((*this)(mid) >= k) {
        b = mid;
      } else {
        a = mid;
      }
    }
    return 0.5 * (a + b);
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const SpectralProblem& p_;
  std::map<double, std::size_t> samples_;
  std::size_t evaluations_ = 0;
};

struct Bracket {
  double lower;
  std::size_t below;
  bool expanded;
};

Bracket prepare(Counter& count, const SpectralProblem& problem, std::optional<double> lambda_min,
                std::size_t wanted) {
  Bracket br{lambda_min.value_or(spectrum_lower_bound(problem)), 0, false};
  if (!lambda_min) {
    while (count(br.lower) > 0) {
      br.lower = 2.0 * br.lower - 1.0;
      br.expanded = true;
    }
  }
  br.below = count(br.lower);
  double width = 1.0;
  while (count(br.lower + width) < br.below + wanted) width *= 2.0;
  return br;
}

}  // namespace

std::vector<double> Spectrum::values() const {
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(e.lambda);
  return v;
}

double spectrum_lower_bound(const SpectralProblem& problem) {
  const auto& g = problem.graph();
  double bound = 0.0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto& c = g.vertex(v).condition;
    if (!c.is_dirichlet()) {
      bound = std::max(bound, std::abs(c.chi) * static_cast<double>(g.degree(v)));
    }
  }
  if (problem.cuts().family() == CutFamily::Robin) {
    for (double gamma : problem.cuts().params()) bound = std::max(bound, std::abs(gamma));
  }
  return -bound * bound - g.max_abs_potential() - 1.0;
}

Spectrum find_eigenvalues(const SpectralProblem& problem, std::size_t count,
                          const SpectrumOptions& options) {
  Counter counter(problem);
  Spectrum out;
  if (count == 0) return out;
  const auto br = prepare(counter, problem, options.lambda_min, count);
  auto& diag = out.diagnostics;
  diag.lower_bound = br.lower;
  diag.lower_bound_expanded = br.expanded;
  diag.bracket_tol = 4e-16;

  std::vector<double> values;
  for (std::size_t k = br.below + 1; k <= br.below + count; ++k) values.push_back(counter.locate(k));

  std::size_t i = 0;
  while (i < values.size()) {
    const double lam = values[i];
    const double delta = options.cluster_tol * (1.0 + std::abs(lam));
    const auto mult = counter(lam + delta) - counter(lam - delta);
    const auto nullity = secular_nullity(problem, lam, options.mult_tol);
    const double residual = relative_sigma_min(problem, lam);
    ++diag.brackets;
    std::size_t j = i;
    while (j < values.size() && values[j] <= lam + delta) {
      out.entries.push_back({values[j], std::max<std::size_t>(mult, 1), nullity, residual});
      ++j;
    }
    if (nullity != mult) {
      diag.multiplicity_mismatch.push_back(i);
      if (diag.warnings.empty()) diag.warnings.push_back(ErrorCode::ScanStepTooCoarse);
    }
    i = j;
  }
  diag.count_evaluations = counter.evaluations();
  return out;
}

double nth_eigenvalue(const SpectralProblem& problem, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidGraph, "eigenvalue index is 1-based");
  Counter counter(problem);
  prepare(counter, problem, std::nullopt, n);
  return counter.locate(n);
}

std::size_t secular_nullity(const SpectralProblem& problem, cplx lambda, double tol) {
  const auto s = secular_singular_values(problem, lambda);
  const double ref = secular_reference_norm(s);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) < tol * ref) ++k;
  }
  return k;
}

}  // namespace qgraph
