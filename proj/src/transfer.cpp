#include "qgraph/transfer.hpp"

#include <cmath>
#include <numbers>

namespace qgraph {

Basis<double> basis_at(double lambda, double q, double x) {
  const double z = lambda - q;
  if (std::abs(z) < kLinearSwitch) return {1.0, x, 0.0, 1.0};
  if (z > 0.0) {
    const double w = std::sqrt(z);
    const double cs = std::cos(w * x), sn = std::sin(w * x);
    return {cs, sn / w, -w * sn, cs};
  }
  const double k = std::sqrt(-z);
  const double ch = std::cosh(k * x), sh = std::sinh(k * x);
  return {ch, sh / k, k * sh, ch};
}

Basis<cplx> basis_at(cplx lambda, double q, double x) {
  const cplx z = lambda - q;
  if (std::abs(z) < kLinearSwitch) return {1.0, x, 0.0, 1.0};
  const cplx w = std::sqrt(z);
  const cplx wx = w * x;
  const cplx c = std::cos(wx);
  cplx s;
  if (std::abs(wx) < 1e-4) {
    const cplx u = z * x * x;
    s = x * (1.0 - u / 6.0 + u * u / 120.0);
  } else {
    s = std::sin(wx) / w;
  }
  return {c, s, -z * s, c};
}

Eigen::Matrix2d segment_transfer(double lambda, double q, double len) {
  const auto b = basis_at(lambda, q, len);
  Eigen::Matrix2d t;
  t << b.c, b.s, b.dc, b.ds;
  return t;
}

Eigen::Matrix2cd segment_transfer(cplx lambda, double q, double len) {
  const auto b = basis_at(lambda, q, len);
  Eigen::Matrix2cd t;
  t << b.c, b.s, b.dc, b.ds;
  return t;
}

BasisIntegrals basis_integrals(double lambda, double q, double len) {
  const double z = lambda - q;
  const double w2 = z * len * len;
  const double l2 = len * len, l3 = l2 * len;
  if (std::abs(w2) < 1e-4) {
    return {len * (1.0 - w2 / 3.0 + 2.0 * w2 * w2 / 15.0),
            l3 * (1.0 / 3.0 - w2 / 15.0 + 2.0 * w2 * w2 / 315.0),
            l2 * (0.5 - w2 / 6.0 + w2 * w2 / 45.0)};
  }
  if (z > 0.0) {
    const double u = std::sqrt(w2);
    const double s = std::sin(u);
    return {len * (0.5 + std::sin(2.0 * u) / (4.0 * u)),
            l3 * (2.0 * u - std::sin(2.0 * u)) / (4.0 * u * u * u), l2 * s * s / (2.0 * u * u)};
  }
  const double u = std::sqrt(-w2);
  const double s = std::sinh(u);
  return {len * (0.5 + std::sinh(2.0 * u) / (4.0 * u)),
          l3 * (std::sinh(2.0 * u) - 2.0 * u) / (4.0 * u * u * u), l2 * s * s / (2.0 * u * u)};
}

DtnRatios dtn_ratios(double lambda, double q, double len) {
  const double z = lambda - q;
  if (std::abs(z) * len * len < 1e-8) {
    // c/s and 1/s expanded around z = 0.
    const double u = z * len * len;
    return {(1.0 - u / 3.0) / len, (1.0 + u / 6.0) / len};
  }
  if (z > 0.0) {
    const double w = std::sqrt(z);
    const double sn = std::sin(w * len);
    return {w * std::cos(w * len) / sn, w / sn};
  }
  const double k = std::sqrt(-z);
  const double u = k * len;
  const double e = std::exp(-u);
  // k coth(u) and k / sinh(u) without forming cosh/sinh.
  return {k * (1.0 + e * e) / (1.0 - e * e), 2.0 * k * e / (1.0 - e * e)};
}

long dirichlet_count_below(double lambda, double q, double len) {
  const double z = lambda - q;
  if (z <= 0.0) return 0;
  const double m = len * std::sqrt(z) / std::numbers::pi;
  return static_cast<long>(std::ceil(m)) - 1;
}

}  // namespace qgraph
