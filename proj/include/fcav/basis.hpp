#pragma once

#include <vector>

#include "fcav/polynomial.hpp"
#include "fcav/quadrature.hpp"
#include "fcav/types.hpp"

namespace fcav {

enum class ModeKind { toroidal, poloidal };

// One divergence-free vector mode on the ball, vanishing on the boundary.
//   toroidal:  b = curl(g(r) Y_lm x)        with g = r^l (R^2-r^2)   q_n(r^2)
//   poloidal:  b = curl(curl(h(r) Y_lm x))  with h = r^l (R^2-r^2)^2 q_n(r^2)
// q_n is the monic shifted Legendre polynomial of degree n in r^2 on [0, R^2].
// All components are exact Cartesian polynomials; div b = 0 identically and
// b = 0 on r = R by the boundary factors (simple zero suffices toroidally,
// double zero poloidally).
struct Mode {
  ModeKind kind;
  int l, m, n;
  double radius;
  Poly3 potential;  // g Y_lm resp. h Y_lm as a Cartesian polynomial
  VPoly3 field;
  int degree;       // max total degree over components

  Vec3 evaluate(const Vec3& p) const { return field.eval(p); }
  Mat3 jacobian(const Vec3& p) const { return field.jacobian_eval(p); }
};

// Enumeration order is fixed: toroidal before poloidal, then l ascending,
// then m = -l..l, then n = 0..n_max. This makes every assembled matrix
// bit-reproducible across runs and platforms with the same FP environment.
struct GalerkinBasis {
  CavitySpec cavity;
  int l_max = 1, n_max = 0;
  std::vector<Mode> modes;
  BallQuadrature rule;  // exact for every trilinear assembly integrand

  int size() const { return static_cast<int>(modes.size()); }
  int max_field_degree() const;
};

GalerkinBasis build_basis(const CavitySpec& cavity, int l_max, int n_max);

// Exact polynomial evaluation; rejects points outside the closed ball.
Vec3 evaluate_mode(const Mode& mode, const Vec3& point);

// Monic shifted Legendre polynomial of degree n in s = r^2 on [0, R^2],
// returned as a Poly3 in (x,y,z) via s = x^2+y^2+z^2.
Poly3 radial_profile_q(int n, double radius);

} // namespace fcav
