#include "fcav/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fcav {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

BallQuadrature make_ball_quadrature(double radius, int degree) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_ball_quadrature: radius <= 0");
  if (degree < 0) degree = 0;

  const int nr = degree / 2 + 2;      // exact to 2nr-1 >= degree+2 in r
  const int nt = degree / 2 + 1;      // exact to 2nt-1 >= degree in t
  const int nphi = degree + 1;        // exact on trig degree <= nphi-1 >= degree

  std::vector<double> gr, wr, gt, wt;
  gauss_legendre(nr, gr, wr);
  gauss_legendre(nt, gt, wt);

  BallQuadrature rule;
  rule.radius = radius;
  rule.exactness_degree = degree;
  rule.points.reserve(static_cast<size_t>(nr) * nt * nphi);
  rule.weights.reserve(rule.points.capacity());

  const double dphi = 2.0 * std::numbers::pi / nphi;
  for (int ir = 0; ir < nr; ++ir) {
    const double r = 0.5 * radius * (gr[ir] + 1.0);
    const double wrad = 0.5 * radius * wr[ir] * r * r;
    for (int it = 0; it < nt; ++it) {
      const double ct = gt[it];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int ip = 0; ip < nphi; ++ip) {
        const double phi = dphi * ip;
        rule.points.emplace_back(r * st * std::cos(phi), r * st * std::sin(phi), r * ct);
        rule.weights.push_back(wrad * wt[it] * dphi);
      }
    }
  }
  return rule;
}

} // namespace fcav
