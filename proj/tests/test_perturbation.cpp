#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracle/fd_oracle.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/perturbation.hpp"
#include "qgraph/spectrum.hpp"

using namespace qgraph;
using fixtures::pi;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidGraph;
}

// Sorted {(m + alpha / 2 pi)^2 : m in Z}, the circle of length 2 pi with flux alpha.
std::vector<double> circle_flux_spectrum(double alpha, std::size_t count) {
  std::vector<double> out;
  for (int m = -20; m <= 20; ++m) out.push_back(std::pow(m + alpha / (2 * pi), 2));
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

}  // namespace

TEST_CASE("fluxes from a one-form") {
  const auto circle = fixtures::circle(2.5);
  const auto cc = spanning_tree_cuts(circle);
  CHECK(flux_from_potential(circle, cc, {0.0})[0] == 0.0);
  CHECK(reduce_angle(flux_from_potential(circle, cc, {1.7})[0]) == doctest::Approx(reduce_angle(1.7 * 2.5)));

  const auto eight = fixtures::figure_eight();
  const auto ce = spanning_tree_cuts(eight);
  // Oracle: integrate a along each loop by a midpoint sum.
  const std::vector<double> a{2.2, 0.0};
  const auto alpha = flux_from_potential(eight, ce, a);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto& e = eight.edge(ce.cuts()[j].edge);
    double sum = 0.0;
    for (int k = 0; k < 1000; ++k) sum += a[ce.cuts()[j].edge] * e.length / 1000.0;
    CHECK(reduce_angle(alpha[j]) == doctest::Approx(reduce_angle(sum)).epsilon(1e-12));
  }
  CHECK(reduce_angle(alpha[1]) == 0.0);

  SUBCASE("gauge invariance on the dumbbell") {
    // Adding a gradient changes no flux: a = d(chi) with chi linear on edges.
    const auto g = fixtures::dumbbell();
    const auto c = spanning_tree_cuts(g);
    const std::vector<double> chi{0.4, -1.3};
    std::vector<double> grad;
    for (const auto& e : g.edges()) grad.push_back((chi[e.to] - chi[e.from]) / e.length);
    for (double x : flux_from_potential(g, c, grad)) CHECK(std::abs(reduce_angle(x)) < 1e-12);
  }
  SUBCASE("uncut edges must form a tree") {
    const CutSet wrong({{1, 0.7, 0}}, CutFamily::Glued);
    CHECK(code_of([&] { flux_from_potential(eight, wrong, {0.0, 0.0}); }) == ErrorCode::PathNotFound);
  }
}

TEST_CASE("lambda_n(alpha)") {
  const auto circle = fixtures::circle();
  const auto cc = spanning_tree_cuts(circle);
  for (double alpha : {0.0, 0.4, pi, -2.0}) {
    const auto expected = circle_flux_spectrum(alpha, 6);
    for (std::size_t n = 1; n <= 6; ++n) {
      CHECK(std::abs(lambda_n_alpha(circle, cc, n, {alpha}) - expected[n - 1]) < 1e-9);
    }
  }
  CHECK(lambda_n_alpha(circle, cc, 1, {pi}) == doctest::Approx(0.25).epsilon(1e-12));

  for (const auto& g : {fixtures::lasso(), fixtures::figure_eight(), fixtures::potential_triangle()}) {
    const auto c = spanning_tree_cuts(g);
    const std::vector<double> zero(c.size(), 0.0);
    const auto h0 = find_eigenvalues(SpectralProblem(g), 5).values();
    std::vector<double> alpha(c.size(), 0.0);
    for (std::size_t j = 0; j < alpha.size(); ++j) alpha[j] = 0.7 + 0.9 * j;
    for (std::size_t n = 1; n <= 5; ++n) {
      CHECK(std::abs(lambda_n_alpha(g, c, n, zero) - h0[n - 1]) < 1e-9);
      // 2 pi periodicity in every coordinate.
      for (std::size_t j = 0; j < alpha.size(); ++j) {
        auto shifted = alpha;
        shifted[j] += 2 * pi;
        CHECK(std::abs(lambda_n_alpha(g, c, n, alpha) - lambda_n_alpha(g, c, n, shifted)) < 1e-8);
      }
    }
  }
}

TEST_CASE("lasso lambda_2(alpha) against the phase-twisted FD oracle") {
  const auto g = fixtures::lasso();
  const auto c = spanning_tree_cuts(g);
  const auto loop = c.cuts()[0].edge;
  double worst = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double alpha = -pi + 2 * pi * (k + 0.5) / 64.0;
    const auto ref = oracle::extrapolated_eigenvalues(g, 2, 600.0, {{loop, alpha}}, -5.0);
    worst = std::max(worst, std::abs(lambda_n_alpha(g, c, 2, {alpha}) - ref[1]));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("lambda_m(gamma)") {
  SUBCASE("Robin limits approach the Dirichlet-at-cut spectrum") {
    const auto g = fixtures::circle();
    const auto c = spanning_tree_cuts(g);
    // Cutting the circle open with Dirichlet sides leaves an interval of
    // length 2 pi; one side is attractive for either sign of gamma and binds
    // a single state near -gamma^2.
    const auto cut_open = open_at(g, {{c.cuts()[0].edge, c.cuts()[0].t}}, VertexCondition::dirichlet()).graph;
    const auto dirichlet = find_eigenvalues(SpectralProblem(cut_open), 5).values();
    for (double gamma : {1e6, -1e6}) {
      CHECK(lambda_m_gamma(g, c, 1, {gamma}) < -1e11);
      for (std::size_t m = 1; m <= 5; ++m) {
        CHECK(std::abs(lambda_m_gamma(g, c, m + 1, {gamma}) - dirichlet[m - 1]) < 1e-3);
      }
    }
  }
  SUBCASE("trees have no parameters") {
    const auto g = fixtures::star();
    const auto a = find_eigenvalues(SpectralProblem(g), 4).values();
    for (std::size_t m = 1; m <= 4; ++m) CHECK(lambda_m_gamma(g, CutSet{}, m, {}) == doctest::Approx(a[m - 1]));
  }
}

TEST_CASE("gamma-tilde") {
  SUBCASE("circle with cos x cut at pi/4") {
    const auto g = fixtures::circle();
    const CutSet cuts({{0, pi / 4, 0}}, CutFamily::Glued);
    auto p = std::make_shared<const SpectralProblem>(g, cuts);
    Eigen::VectorXcd coeffs(p->unknown_count());
    for (std::size_t k = 0; k < p->segments().size(); ++k) {
      const double x = p->segments()[k].offset;
      coeffs.segment(2 * k, 2) << std::cos(x), -std::sin(x);
    }
    const GraphFunction psi{p, 1.0, coeffs};
    const auto gt = gamma_tilde(psi, cuts);
    CHECK(std::abs(gt.gamma[0] - -std::tan(pi / 4)) < 1e-10);
    CHECK(std::abs(gt.gamma[0] - gt.gamma_minus[0]) < 1e-10);
  }
  SUBCASE("cut at a critical point gives zero") {
    // cos x on the circle, cut at its minimum x = pi.
    const auto circle = fixtures::circle();
    const CutSet cuts({{0, pi, 0}}, CutFamily::Glued);
    auto p = std::make_shared<const SpectralProblem>(circle, cuts);
    Eigen::VectorXcd coeffs(p->unknown_count());
    for (std::size_t k = 0; k < p->segments().size(); ++k) {
      const double x = p->segments()[k].offset;
      coeffs.segment(2 * k, 2) << std::cos(x), -std::sin(x);
    }
    CHECK(std::abs(gamma_tilde(GraphFunction{p, 1.0, coeffs}, cuts).gamma[0]) < 1e-14);
  }
  SUBCASE("lasso: H_gamma-tilde reproduces the eigenfunction") {
    const auto g = fixtures::lasso();
    const auto c = spanning_tree_cuts(g);
    auto glued = std::make_shared<const SpectralProblem>(g, c);
    const double xi = nth_eigenvalue(*glued, 2);
    auto psi = eigenfunction(glued, xi);
    const auto gt = gamma_tilde(psi, c);
    auto robin = std::make_shared<const SpectralProblem>(g, c.with(CutFamily::Robin, gt.gamma));
    auto phi = eigenfunction(robin, xi);
    normalize(psi);
    normalize(phi);
    CHECK((psi.coeffs - phi.coeffs).cwiseAbs().maxCoeff() < 1e-7);
  }
  SUBCASE("zero at the cut") {
    const auto g = fixtures::circle();
    const CutSet cuts({{0, pi / 2, 0}}, CutFamily::Glued);
    auto p = std::make_shared<const SpectralProblem>(g, cuts);
    Eigen::VectorXcd coeffs(p->unknown_count());
    for (std::size_t k = 0; k < p->segments().size(); ++k) {
      const double x = p->segments()[k].offset;
      coeffs.segment(2 * k, 2) << std::cos(x), -std::sin(x);
    }
    CHECK(code_of([&] { gamma_tilde(GraphFunction{p, 1.0, coeffs}, cuts); }) == ErrorCode::ZeroAtCut);
  }
}

TEST_CASE("finite-difference Hessians and Morse indices") {
  SUBCASE("saddle") {
    const auto r = hessian_fd([](const std::vector<double>& x) { return x[0] * x[0] - x[1] * x[1]; }, {0.0, 0.0});
    CHECK(std::abs(r.matrix(0, 0) - 2.0) < 1e-6);
    CHECK(std::abs(r.matrix(1, 1) + 2.0) < 1e-6);
    CHECK(std::abs(r.matrix(0, 1)) < 1e-6);
    CHECK(r.morse_index == 1);
    CHECK(r.nondegenerate);
    CHECK(r.gradient_norm < 1e-9);
    CHECK(r.morse_index + r.positive + r.degenerate == 2);
  }
  SUBCASE("mixed partials") {
    const auto r = hessian_fd([](const std::vector<double>& x) { return std::sin(x[0]) * std::exp(x[1]); }, {0.3, -0.2});
    CHECK(r.matrix(0, 1) == doctest::Approx(std::cos(0.3) * std::exp(-0.2)).epsilon(1e-7));
    CHECK(r.matrix(0, 1) == r.matrix(1, 0));
  }
  SUBCASE("constant") {
    const auto r = hessian_fd([](const std::vector<double>&) { return 3.0; }, {0.0, 1.0, 2.0});
    CHECK(r.matrix.cwiseAbs().maxCoeff() == 0.0);
    CHECK_FALSE(r.nondegenerate);
    CHECK(r.degenerate == 3);
  }
  SUBCASE("evaluation failure") {
    const auto f = [](const std::vector<double>& x) {
      if (x[0] > 0.0) throw Error(ErrorCode::BranchLost, "no");
      return x[0];
    };
    CHECK(code_of([&] { hessian_fd(f, {0.0}); }) == ErrorCode::EvaluationFailed);
  }
  SUBCASE("circle lambda_1(alpha)") {
    const auto g = fixtures::circle();
    const auto c = spanning_tree_cuts(g);
    const auto r = hessian_fd([&](const std::vector<double>& a) { return lambda_n_alpha(g, c, 1, a); }, {0.0});
    CHECK(std::abs(r.matrix(0, 0) - 2.0 / std::pow(2 * pi, 2)) < 1e-4);
  }
  SUBCASE("morse_index") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    CHECK(morse_index(id, 1e-8).index == 0);
    CHECK(morse_index(id, 1e-8).nondegenerate);
    CHECK(morse_index(Eigen::MatrixXd(-id), 1e-8).index == 3);
    CHECK(morse_index(Eigen::MatrixXd(-id), 1e-8).nondegenerate);
    const Eigen::MatrixXd d = Eigen::Vector2d(1.0, 1e-12).asDiagonal();
    CHECK(morse_index(d, 1e-8).index == 0);
    CHECK_FALSE(morse_index(d, 1e-8).nondegenerate);
  }
}

TEST_CASE("imaginary flux") {
  SUBCASE("interval with exponential jump: complex eigenvalues") {
    // f(0) = e^alpha f(pi), f'(0) = e^alpha f'(pi) is a loop of length pi
    // with an imaginary-flux cut.
    const auto g = fixtures::circle(pi);
    const auto c = spanning_tree_cuts(g).with(CutFamily::ImaginaryFlux, {0.1});
    const SpectralProblem p(g, c);
    for (int n : {1, 2}) {
      for (double sign : {1.0, -1.0}) {
        const cplx lambda = std::pow(cplx(2.0 * n, sign * 0.1 / pi), 2);
        CHECK(relative_sigma_min(p, lambda) < 1e-8);
      }
    }
    CHECK(relative_sigma_min(p, 4.0) > 1e-4);
  }
  SUBCASE("continuation starts at the unperturbed eigenvalue") {
    const auto g = fixtures::lasso();
    const auto c = spanning_tree_cuts(g);
    CHECK(lambda_n_ialpha_continued(g, c, 2, {0.0}) == doctest::Approx(nth_eigenvalue(SpectralProblem(g), 2)));
    const auto circle = fixtures::circle();
    CHECK(code_of([&] { lambda_n_ialpha_continued(circle, spanning_tree_cuts(circle), 2, {0.01}); }) ==
          ErrorCode::DegenerateAtZero);
  }
  SUBCASE("second differences flip sign") {
    const auto g = fixtures::lasso();
    const auto c = spanning_tree_cuts(g);
    for (std::size_t n : {2, 4, 5}) {
      const double h = 1e-2;
      const double l0 = nth_eigenvalue(SpectralProblem(g), n);
      const double real2 = lambda_n_alpha(g, c, n, {h}) - 2 * l0 + lambda_n_alpha(g, c, n, {-h});
      const double imag2 =
          lambda_n_ialpha_continued(g, c, n, {h}) - 2 * l0 + lambda_n_ialpha_continued(g, c, n, {-h});
      CHECK(std::abs(real2) > 1e-8);
      CHECK(real2 * imag2 < 0.0);
    }
  }
  SUBCASE("Morse indices of the two families add up to the dimension") {
    const auto g = fixtures::figure_eight();
    const auto c = spanning_tree_cuts(g);
    for (std::size_t n : {2, 4}) {
      const auto real = hessian_fd([&](const std::vector<double>& a) { return lambda_n_alpha(g, c, n, a); }, {0.0, 0.0});
      const auto imag =
          hessian_fd([&](const std::vector<double>& a) { return lambda_n_ialpha_continued(g, c, n, a); }, {0.0, 0.0});
      REQUIRE(real.nondegenerate);
      REQUIRE(imag.nondegenerate);
      CHECK(real.morse_index + imag.morse_index == 2);
    }
  }
}

TEST_CASE("the map R") {
  const auto g = fixtures::lasso();
  const auto c = spanning_tree_cuts(g);
  for (std::size_t n : {2, 5}) {
    auto glued = std::make_shared<const SpectralProblem>(g, c);
    const auto psi = eigenfunction(glued, nth_eigenvalue(*glued, n));
    const auto gt = gamma_tilde(psi, c).gamma;
    const std::size_t m = count_zeros(psi) + 1;

    const auto at_tilde = map_R(g, c, m, gt);
    CHECK(std::abs(at_tilde.alpha[0]) < 1e-8);
    CHECK(std::abs(at_tilde.lambda - psi.lambda.real()) < 1e-8);

    std::mt19937 rng(7 + n);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (int k = 0; k < 5; ++k) {
      const std::vector<double> gamma{gt[0] + u(rng)};
      const auto fwd = map_R(g, c, m, gamma);
      const auto back = map_R_inverse(g, c, n, fwd.alpha);
      CHECK(std::abs(back.gamma[0] - gamma[0]) < 1e-6);
      CHECK(std::abs(back.lambda - fwd.lambda) < 1e-8);
    }
  }
}

TEST_CASE("symmetry points") {
  CHECK(symmetry_points(2) == std::vector<std::vector<double>>{{0, 0}, {pi, 0}, {0, pi}, {pi, pi}});
  const auto circle = fixtures::circle();
  const auto cc = spanning_tree_cuts(circle);
  CHECK(symmetry_spectrum_check(circle, cc, {pi}, {0.0}, 6) == 0.0);
  CHECK(symmetry_spectrum_check(circle, cc, {pi}, {0.3}, 6) < 1e-8);
  // Away from the symmetry points the spectrum is not symmetric.
  CHECK(symmetry_spectrum_check(circle, cc, {1.0}, {0.3}, 6) > 1e-3);

  const auto eight = fixtures::figure_eight();
  const auto ce = spanning_tree_cuts(eight);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int k = 0; k < 3; ++k) {
    CHECK(symmetry_spectrum_check(eight, ce, {pi, 0.0}, {u(rng), u(rng)}, 8) < 1e-8);
  }
}
