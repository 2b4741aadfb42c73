#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "qgraph/eigenfunction.hpp"
#include "qgraph/perturbation.hpp"
#include "qgraph/spectrum.hpp"
#include "qgraph/verify.hpp"

namespace qgraph {

// Shortest round-trip decimal form; -0 is written as 0.
std::string format_number(double x);

// index,lambda,multiplicity,residual
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum);

// edge,segment,t,f,fprime with `per_segment` intervals on every segment.
// Complex functions are written by their real parts.
void write_eigenfunction_csv(std::ostream& os, const GraphFunction& f, std::size_t per_segment);

// Grid of G points per axis, alpha_k = 2 pi (k - c) / G with c = (G - 1) / 2
// rounded down, so that 0 is a grid point and all points lie in (-pi, pi].
std::vector<double> flux_axis(std::size_t points);

struct FluxScanRow {
  std::vector<double> alpha;
  std::size_t n = 0;
  double lambda = 0.0;
};

// All G^d grid points in lexicographic order (alpha_1 slowest) followed by
// one wrap row repeating the first point shifted by 2 pi in every
// coordinate.
std::vector<FluxScanRow> flux_scan(const MetricGraph& graph, const CutSet& cuts, std::size_t n,
                                   std::size_t points_per_axis);

// alpha_1,...,alpha_d,n,lambda
void write_flux_scan_csv(std::ostream& os, const std::vector<FluxScanRow>& rows, std::size_t dimension);

// graph,n,lambda,phi,nu,beta,eta,predicted,observed,nondegenerate,pass,skip_reason
void write_verification_header(std::ostream& os);
void write_verification_row(std::ostream& os, const VerificationReport& r);

struct SymmetryRow {
  std::string graph;
  std::vector<double> varsigma;
  std::vector<double> alpha;
  std::size_t count = 0;
  double deviation = 0.0;
  bool pass = false;
};

// graph,varsigma,alpha,N,deviation,pass; vectors are joined with ';'.
void write_symmetry_header(std::ostream& os);
void write_symmetry_row(std::ostream& os, const SymmetryRow& row);

// Plain-text Hessian report: one "key: value" line per scalar, matrix rows
// after "matrix:".
void write_hessian_report(std::ostream& os, const HessianReport& report);

}  // namespace qgraph
