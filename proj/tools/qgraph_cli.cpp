#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "qgraph/csv.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/verify.hpp"

namespace fs = std::filesystem;
using namespace qgraph;

namespace {

enum Exit { kOk = 0, kInputError = 1, kDiagnostics = 2, kFailingRows = 3 };

struct RunConfig {
  std::string command;
  std::string which = "theorem1";
  fs::path graph;
  fs::path out = ".";
  std::string n = "2:8";
  std::size_t count = 8;
  std::optional<std::size_t> grid;
  double h = 1e-3;
  std::optional<double> tol;
};

struct Range {
  std::size_t first, last;
};

Range parse_range(const std::string& s) {
  auto to_index = [&](const std::string& t) {
    std::size_t used = 0;
    const long v = std::stol(t, &used);
    if (used != t.size() || v < 1) throw std::invalid_argument(t);
    return static_cast<std::size_t>(v);
  };
  try {
    const auto colon = s.find(':');
    if (colon == std::string::npos) {
      const auto v = to_index(s);
      return {v, v};
    }
    const Range r{to_index(s.substr(0, colon)), to_index(s.substr(colon + 1))};
    if (r.last < r.first) throw std::invalid_argument(s);
    return r;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "--n expects k or a:b with 1 <= a <= b, got '" + s + "'");
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << content;
}

int cmd_spectrum(const RunConfig& cfg, const GraphFile& file) {
  const SpectralProblem problem(file.graph, file.cuts.value_or(CutSet{}));
  const auto spectrum = find_eigenvalues(problem, cfg.count);
  std::ostringstream os;
  write_spectrum_csv(os, spectrum);
  write_file(cfg.out / "spectrum.csv", os.str());
  auto shared = std::make_shared<const SpectralProblem>(problem);
  for (std::size_t k = 0; k < spectrum.entries.size(); ++k) {
    if (spectrum.entries[k].multiplicity != 1) continue;
    std::ostringstream ef;
    write_eigenfunction_csv(ef, eigenfunction(shared, spectrum.entries[k].lambda), cfg.grid.value_or(64));
    write_file(cfg.out / ("eigenfunction_" + std::to_string(k + 1) + ".csv"), ef.str());
  }
  for (auto w : spectrum.diagnostics.warnings) std::cerr << "warning: " << to_string(w) << '\n';
  return spectrum.diagnostics.warnings.empty() ? kOk : kDiagnostics;
}

int cmd_flux_scan(const RunConfig& cfg, const GraphFile& file) {
  const auto cuts = file.cuts ? file.cuts->glued() : spanning_tree_cuts(file.graph);
  if (cuts.empty()) throw Error(ErrorCode::InvalidGraph, "flux-scan needs a graph with at least one cycle");
  const auto range = parse_range(cfg.n);
  std::ostringstream os;
  write_flux_scan_csv(os, flux_scan(file.graph, cuts.with(CutFamily::Flux, std::vector<double>(cuts.size(), 0.0)),
                                    range.first, cfg.grid.value_or(9)),
                      cuts.size());
  write_file(cfg.out / "flux_scan.csv", os.str());
  return kOk;
}

// Deterministic, well-spread flux vectors: fractional parts of multiples of
// square roots of primes.
std::vector<std::vector<double>> sample_alphas(std::size_t d, std::size_t count) {
  constexpr std::array<double, 8> primes{2, 3, 5, 7, 11, 13, 17, 19};
  std::vector<std::vector<double>> out;
  for (std::size_t k = 1; k <= count; ++k) {
    std::vector<double> a;
    for (std::size_t j = 0; j < d; ++j) {
      const double x = static_cast<double>(k) * std::sqrt(primes[j % primes.size()]);
      a.push_back(reduce_angle(2.0 * std::numbers::pi * (x - std::floor(x))));
    }
    out.push_back(std::move(a));
  }
  return out;
}

int cmd_symmetry(const RunConfig& cfg, const GraphFile& file) {
  const auto cuts = file.cuts ? file.cuts->glued() : spanning_tree_cuts(file.graph);
  if (cuts.empty()) throw Error(ErrorCode::InvalidGraph, "symmetry needs a graph with at least one cycle");
  const double tol = cfg.tol.value_or(1e-8);
  std::ostringstream os;
  write_symmetry_header(os);
  bool all = true;
  for (const auto& s : symmetry_points(cuts.size())) {
    for (const auto& a : sample_alphas(cuts.size(), 5)) {
      SymmetryRow row{cfg.graph.stem().string(), s, a, cfg.count, 0.0, false};
      row.deviation = symmetry_spectrum_check(file.graph, cuts, s, a, cfg.count);
      row.pass = row.deviation < tol;
      all = all && row.pass;
      write_symmetry_row(os, row);
    }
  }
  write_file(cfg.out / "symmetry.csv", os.str());
  return all ? kOk : kFailingRows;
}

int cmd_verify(const RunConfig& cfg, const GraphFile& file) {
  if (cfg.which == "symmetry") return cmd_symmetry(cfg, file);
  const auto range = parse_range(cfg.n);
  VerifyOptions options;
  options.graph_name = cfg.graph.stem().string();
  options.hessian.h = cfg.h;
  if (cfg.tol) options.gradient_tol = *cfg.tol;

  std::ostringstream os, hessians;
  write_verification_header(os);
  bool all = true;
  for (std::size_t n = range.first; n <= range.last; ++n) {
    VerificationReport r;
    if (cfg.which == "theorem1") r = verify_theorem1(file.graph, n, options);
    else if (cfg.which == "theorem2") r = verify_theorem2(file.graph, n, options);
    else if (cfg.which == "theorem2-few-zeros") r = verify_theorem2_few_zeros(file.graph, n, options);
    else r = verify_partition_criticality(file.graph, n, options);
    write_verification_row(os, r);
    if (!r.skipped()) {
      all = all && r.pass;
      hessians << "[n=" << n << "]\n";
      write_hessian_report(hessians, r.hessian);
      for (const auto& f : r.failures) hessians << "failure: " << f << '\n';
    }
  }
  const std::string stem = "verification_" + cfg.which;
  write_file(cfg.out / (stem + ".csv"), os.str());
  write_file(cfg.out / (stem + "_hessians.txt"), hessians.str());
  return all ? kOk : kFailingRows;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Spectra and Morse-index verification for quantum graphs"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.add_option("--command", cfg.command, "spectrum | flux-scan | verify")
      ->required()
      ->check(CLI::IsMember({"spectrum", "flux-scan", "verify"}));
  app.add_option("--graph", cfg.graph, "Graph description file")->required();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--which", cfg.which, "theorem1 | theorem2 | theorem2-few-zeros | symmetry | partitions")
      ->check(CLI::IsMember({"theorem1", "theorem2", "theorem2-few-zeros", "symmetry", "partitions"}))
      ->capture_default_str();
  app.add_option("--n", cfg.n, "Eigenvalue index k or range a:b")->capture_default_str();
  app.add_option("--count", cfg.count, "Number of eigenvalues")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--grid", cfg.grid, "Intervals per segment (spectrum, default 64) or points per axis (flux-scan, default 9)")
      ->check(CLI::PositiveNumber);
  app.add_option("--h", cfg.h, "Hessian step")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tol", cfg.tol, "Pass threshold: gradient norm (Morse checks) or deviation (symmetry)")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    const auto file = read_graph_file(cfg.graph);
    require_valid(file.graph);
    fs::create_directories(cfg.out);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, file);
    if (cfg.command == "flux-scan") return cmd_flux_scan(cfg, file);
    return cmd_verify(cfg, file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const auto c = e.code();
    const bool input = c == ErrorCode::ParseError || c == ErrorCode::InvalidGraph || c == ErrorCode::InvalidCut;
    return input ? kInputError : kDiagnostics;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
