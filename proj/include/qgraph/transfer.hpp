#pragma once

#include <complex>

#include <Eigen/Core>

namespace qgraph {

using cplx = std::complex<double>;

// Below this |lambda - q| a segment is treated as potential-free linear.
inline constexpr double kLinearSwitch = 1e-12;

// Fundamental solutions of -f'' + (q - lambda) f = 0 started at x = 0:
// c(0) = 1, c'(0) = 0 and s(0) = 0, s'(0) = 1.
template <typename T>
struct Basis {
  T c, s, dc, ds;
};

Basis<double> basis_at(double lambda, double q, double x);
Basis<cplx> basis_at(cplx lambda, double q, double x);

// Maps (f, f') at the start of a constant-q segment to its end.
Eigen::Matrix2d segment_transfer(double lambda, double q, double len);
Eigen::Matrix2cd segment_transfer(cplx lambda, double q, double len);

// Integrals over [0, len] of c^2, s^2 and c*s for real lambda.
struct BasisIntegrals {
  double cc, ss, cs;
};
BasisIntegrals basis_integrals(double lambda, double q, double len);

// Entries of the Dirichlet-to-Neumann block of a constant-q segment, in an
// overflow-safe form.
struct DtnRatios {
  double diag;  // c(len) / s(len)
  double off;   // 1 / s(len)
};
DtnRatios dtn_ratios(double lambda, double q, double len);

// Dirichlet eigenvalues of the segment lying strictly below lambda.
long dirichlet_count_below(double lambda, double q, double len);

}  // namespace qgraph
