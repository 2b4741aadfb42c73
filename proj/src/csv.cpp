#include "qgraph/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

namespace qgraph {
namespace {

std::string join(const std::vector<double>& v, char sep) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out.push_back(sep);
    out += format_number(v[k]);
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum) {
  os << "index,lambda,multiplicity,residual\n";
  for (std::size_t k = 0; k < spectrum.entries.size(); ++k) {
    const auto& e = spectrum.entries[k];
    os << k + 1 << ',' << format_number(e.lambda) << ',' << e.multiplicity << ',' << format_number(e.residual)
       << '\n';
  }
}

void write_eigenfunction_csv(std::ostream& os, const GraphFunction& f, std::size_t per_segment) {
  const auto& g = f.problem->graph();
  os << "edge,segment,t,f,fprime\n";
  for (const auto& p : sample(f, per_segment)) {
    os << g.edge(p.edge).id << ',' << p.segment << ',' << format_number(p.t) << ',' << format_number(p.f.real())
       << ',' << format_number(p.fprime.real()) << '\n';
  }
}

std::vector<double> flux_axis(std::size_t points) {
  const long c = (static_cast<long>(points) - 1) / 2;
  std::vector<double> out;
  for (std::size_t k = 0; k < points; ++k) {
    out.push_back(2.0 * std::numbers::pi * static_cast<double>(static_cast<long>(k) - c) /
                  static_cast<double>(points));
  }
  return out;
}

std::vector<FluxScanRow> flux_scan(const MetricGraph& graph, const CutSet& cuts, std::size_t n,
                                   std::size_t points_per_axis) {
  const auto axis = flux_axis(points_per_axis);
  const std::size_t d = cuts.size();
  std::vector<FluxScanRow> rows;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    FluxScanRow row{std::vector<double>(d), n, 0.0};
    for (std::size_t j = 0; j < d; ++j) row.alpha[j] = axis[idx[j]];
    row.lambda = lambda_n_alpha(graph, cuts, n, row.alpha);
    rows.push_back(std::move(row));
    std::size_t j = d;
    while (j > 0 && ++idx[j - 1] == points_per_axis) idx[--j] = 0;
    if (j == 0) break;
  }
  FluxScanRow wrap = rows.front();
  for (auto& a : wrap.alpha) a += 2.0 * std::numbers::pi;
  wrap.lambda = lambda_n_alpha(graph, cuts, n, wrap.alpha);
  rows.push_back(std::move(wrap));
  return rows;
}

void write_flux_scan_csv(std::ostream& os, const std::vector<FluxScanRow>& rows, std::size_t dimension) {
  for (std::size_t j = 0; j < dimension; ++j) os << "alpha_" << j + 1 << ',';
  os << "n,lambda\n";
  for (const auto& r : rows) {
    for (double a : r.alpha) os << format_number(a) << ',';
    os << r.n << ',' << format_number(r.lambda) << '\n';
  }
}

void write_verification_header(std::ostream& os) {
  os << "graph,n,lambda,phi,nu,beta,eta,predicted,observed,nondegenerate,pass,skip_reason\n";
}

void write_verification_row(std::ostream& os, const VerificationReport& r) {
  os << r.graph << ',' << r.n << ',' << format_number(r.lambda) << ',' << r.phi << ',' << r.nu << ',' << r.beta
     << ',' << r.eta << ',' << r.predicted << ',' << r.observed << ',' << (r.hessian.nondegenerate ? 1 : 0) << ','
     << (r.pass ? 1 : 0) << ',' << r.skip_reason << '\n';
}

void write_symmetry_header(std::ostream& os) { os << "graph,varsigma,alpha,N,deviation,pass\n"; }

void write_symmetry_row(std::ostream& os, const SymmetryRow& row) {
  os << row.graph << ',' << join(row.varsigma, ';') << ',' << join(row.alpha, ';') << ',' << row.count << ','
     << format_number(row.deviation) << ',' << (row.pass ? 1 : 0) << '\n';
}

void write_hessian_report(std::ostream& os, const HessianReport& r) {
  os << "dimension: " << r.matrix.rows() << '\n';
  os << "h: " << format_number(r.h) << '\n';
  os << "richardson: " << (r.richardson ? "true" : "false") << '\n';
  os << "value: " << format_number(r.value) << '\n';
  os << "gradient_norm: " << format_number(r.gradient_norm) << '\n';
  os << "degen_tol: " << format_number(r.degen_tol) << '\n';
  os << "morse_index: " << r.morse_index << '\n';
  os << "positive: " << r.positive << '\n';
  os << "degenerate: " << r.degenerate << '\n';
  os << "nondegenerate: " << (r.nondegenerate ? "true" : "false") << '\n';
  os << "eigenvalues:";
  for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k) os << ' ' << format_number(r.eigenvalues(k));
  os << "\nmatrix:\n";
  for (Eigen::Index i = 0; i < r.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.matrix.cols(); ++j) os << (j ? " " : "  ") << format_number(r.matrix(i, j));
    os << '\n';
  }
}

}  // namespace qgraph
