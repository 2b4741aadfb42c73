#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qgraph/errors.hpp"
#include "qgraph/secular.hpp"

namespace qgraph {

struct SpectrumEntry {
  double lambda = 0.0;
  std::size_t multiplicity = 1;  // size of the eigenvalue cluster from the count
  std::size_t nullity = 1;       // secular singular values below the multiplicity tolerance
  double residual = 0.0;         // relative_sigma_min of the secular matrix
};

struct ScanDiagnostics {
  double lower_bound = 0.0;
  bool lower_bound_expanded = false;
  double bracket_tol = 0.0;
  std::size_t count_evaluations = 0;
  std::size_t brackets = 0;
  // Entries whose cluster size disagrees with the secular nullity.
  std::vector<std::size_t> multiplicity_mismatch;
  std::vector<ErrorCode> warnings;
};

struct Spectrum {
  // One entry per eigenvalue with repetition: entries[k] is lambda_{k+1}.
  std::vector<SpectrumEntry> entries;
  ScanDiagnostics diagnostics;

  std::vector<double> values() const;
};

struct SpectrumOptions {
  std::optional<double> lambda_min;
  // Relative width for grouping eigenvalues into one cluster.
  double cluster_tol = 1e-9;
  // Singular values below mult_tol * secular_reference_norm count toward the
  // nullity.
  double mult_tol = 1e-7;
};

// Crude lower bound -(max|chi| * degree)^2 - max|q| on the spectrum.
double spectrum_lower_bound(const SpectralProblem& problem);

// First `count` eigenvalues (with multiplicity) at or above lambda_min.
// Throws NotSelfAdjointFamily for ImaginaryFlux.
Spectrum find_eigenvalues(const SpectralProblem& problem, std::size_t count,
                          const SpectrumOptions& options = {});

// lambda_n, 1-based, in ascending order with multiplicity.
double nth_eigenvalue(const SpectralProblem& problem, std::size_t n);

// Number of singular values of M(lambda) below tol * secular_reference_norm.
std::size_t secular_nullity(const SpectralProblem& problem, cplx lambda, double tol = 1e-7);

}  // namespace qgraph
