#pragma once

#include <vector>

#include "fcav/util.hpp"

namespace fcav {

// Product quadrature on the ball of radius R, exact for all Cartesian
// polynomials of total degree <= exactness_degree:
//   Gauss-Legendre in r on [0,R] (including the r^2 Jacobian in the weight),
//   Gauss-Legendre in t = cos(theta) on [-1,1],
//   equispaced trapezoid in phi (exact on trig polynomials of degree < n_phi).
// A monomial x^a y^b z^c of total degree D restricted to spheres is a trig
// polynomial of degree <= D in phi, a polynomial of degree <= D in t whenever
// a+b is even (odd a+b integrates to zero in phi for both the exact integral
// and the rule), and r^(D+2) radially; the node counts below cover all three.
struct BallQuadrature {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int exactness_degree = 0;
  double radius = 1.0;

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (size_t q = 0; q < points.size(); ++q) s += weights[q] * f(points[q]);
    return s;
  }
  size_t size() const { return points.size(); }
};

BallQuadrature make_ball_quadrature(double radius, int degree);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace fcav
