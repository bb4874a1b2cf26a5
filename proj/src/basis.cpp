#include "fcav/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "fcav/harmonics.hpp"

namespace fcav {

namespace {

// Coefficients of the shifted Legendre polynomial P_n(2s/R^2 - 1) in s.
std::vector<double> shifted_legendre_in_s(int n, double r2) {
  // Start from P_n(u) coefficients, substitute u = 2s/r2 - 1 by synthetic
  // composition: track powers of (2s/r2 - 1).
  std::vector<double> pu(n + 1, 0.0);
  {
    std::vector<double> pm1 = {1.0};
    std::vector<double> p = {0.0, 1.0};
    if (n == 0) p = pm1;
    for (int k = 1; k < n; ++k) {
      std::vector<double> nxt(k + 2, 0.0);
      for (int j = 0; j <= k; ++j) nxt[j + 1] += (2.0 * k + 1.0) * p[j] / (k + 1.0);
      for (int j = 0; j < static_cast<int>(pm1.size()); ++j)
        nxt[j] -= k * pm1[j] / (k + 1.0);
      pm1 = std::move(p);
      p = std::move(nxt);
    }
    for (int j = 0; j < static_cast<int>(p.size()); ++j) pu[j] = p[j];
  }
  std::vector<double> cs(n + 1, 0.0);
  std::vector<double> upow = {1.0};  // (2s/r2 - 1)^j expanded in s
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k < static_cast<int>(upow.size()); ++k) cs[k] += pu[j] * upow[k];
    // multiply upow by (2s/r2 - 1)
    std::vector<double> nxt(upow.size() + 1, 0.0);
    for (int k = 0; k < static_cast<int>(upow.size()); ++k) {
      nxt[k] -= upow[k];
      nxt[k + 1] += upow[k] * 2.0 / r2;
    }
    upow = std::move(nxt);
  }
  return cs;
}

Poly3 poly_in_r2(const std::vector<double>& cs) {
  const Poly3 r2 = Poly3::monomial(2, 0, 0, 1.0) + Poly3::monomial(0, 2, 0, 1.0) +
                   Poly3::monomial(0, 0, 2, 1.0);
  Poly3 out;
  Poly3 p = Poly3::constant(1.0);
  for (size_t k = 0; k < cs.size(); ++k) {
    if (cs[k] != 0.0) out += p * cs[k];
    if (k + 1 < cs.size()) p = p * r2;
  }
  return out;
}

VPoly3 toroidal_field(const Poly3& psi) {
  // curl(psi x) = grad(psi) x x
  const VPoly3 g = gradient(psi);
  const Poly3 x = Poly3::variable(0), y = Poly3::variable(1), z = Poly3::variable(2);
  return VPoly3{{g.comp[1] * z - g.comp[2] * y,
                 g.comp[2] * x - g.comp[0] * z,
                 g.comp[0] * y - g.comp[1] * x}};
}

VPoly3 poloidal_field(const Poly3& psi) {
  // curl curl(psi x) = grad(3 psi + x.grad psi) - x Lap(psi) - 2 grad(psi)
  const Poly3 phi = psi * 3.0 + x_dot_grad(psi);
  const VPoly3 gphi = gradient(phi);
  const VPoly3 gpsi = gradient(psi);
  const Poly3 lap = laplacian(psi);
  VPoly3 out;
  for (int i = 0; i < 3; ++i)
    out.comp[i] = gphi.comp[i] - Poly3::variable(i) * lap - gpsi.comp[i] * 2.0;
  return out;
}

} // namespace

Poly3 radial_profile_q(int n, double radius) {
  std::vector<double> cs = shifted_legendre_in_s(n, radius * radius);
  const double lead = cs.back();
  for (double& c : cs) c /= lead;  // monic in s
  return poly_in_r2(cs);
}

int GalerkinBasis::max_field_degree() const {
  int d = 0;
  for (const Mode& m : modes) d = std::max(d, m.degree);
  return d;
}

GalerkinBasis build_basis(const CavitySpec& cavity, int l_max, int n_max) {
  cavity.validate();
  if (l_max < 1)
    throw ConfigError("basis.l_max must be >= 1 (the l=1 toroidal modes carry "
                      "all angular-momentum coupling)");
  if (n_max < 0) throw ConfigError("basis.n_max must be >= 0");

  GalerkinBasis basis;
  basis.cavity = cavity;
  basis.l_max = l_max;
  basis.n_max = n_max;

  const double R2 = cavity.radius * cavity.radius;
  const Poly3 r2 = Poly3::monomial(2, 0, 0, 1.0) + Poly3::monomial(0, 2, 0, 1.0) +
                   Poly3::monomial(0, 0, 2, 1.0);
  const Poly3 bnd = Poly3::constant(R2) - r2;  // R^2 - r^2

  for (int kind = 0; kind < 2; ++kind) {
    for (int l = 1; l <= l_max; ++l) {
      for (int m = -l; m <= l; ++m) {
        const Poly3 solid = real_solid_harmonic(l, m);  // r^l Y_lm
        for (int n = 0; n <= n_max; ++n) {
          Mode mode;
          mode.kind = kind == 0 ? ModeKind::toroidal : ModeKind::poloidal;
          mode.l = l;
          mode.m = m;
          mode.n = n;
          mode.radius = cavity.radius;
          const Poly3 q = radial_profile_q(n, cavity.radius);
          if (mode.kind == ModeKind::toroidal) {
            mode.potential = bnd * q * solid;
            mode.field = toroidal_field(mode.potential);
          } else {
            mode.potential = bnd * bnd * q * solid;
            mode.field = poloidal_field(mode.potential);
          }
          mode.degree = mode.field.degree();
          basis.modes.push_back(std::move(mode));
        }
      }
    }
  }

  // The widest integrand is the convection triple product b_i . (b_j . grad) b_k.
  const int dmax = basis.max_field_degree();
  basis.rule = make_ball_quadrature(cavity.radius, 3 * dmax);
  return basis;
}

Vec3 evaluate_mode(const Mode& mode, const Vec3& point) {
  if (point.norm() > mode.radius * (1.0 + 1e-14))
    throw std::domain_error("evaluate_mode: point outside the closed ball");
  return mode.evaluate(point);
}

} // namespace fcav
