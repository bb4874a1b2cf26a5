#pragma once

#include <array>
#include <vector>

#include "fcav/util.hpp"

namespace fcav {

// Trivariate polynomial in Cartesian (x, y, z), sparse monomial form.
// Terms are kept canonical: sorted by exponent triple, coefficients merged,
// exact zeros dropped. Every basis field and every integrand assembled from
// them is a polynomial, so this is the one representation the whole
// discretization runs on.
class Poly3 {
 public:
  struct Term {
    int ex, ey, ez;
    double c;
  };

  Poly3() = default;
  static Poly3 constant(double c);
  static Poly3 monomial(int ex, int ey, int ez, double c);
  static Poly3 variable(int axis);  // 0:x 1:y 2:z

  Poly3 operator+(const Poly3& o) const;
  Poly3 operator-(const Poly3& o) const;
  Poly3 operator*(const Poly3& o) const;
  Poly3 operator*(double s) const;
  Poly3 operator-() const { return *this * -1.0; }
  Poly3& operator+=(const Poly3& o) { return *this = *this + o; }
  Poly3& operator-=(const Poly3& o) { return *this = *this - o; }

  Poly3 diff(int axis) const;

  double eval(const Vec3& p) const;
  Vec3 grad_eval(const Vec3& p) const;

  int degree() const;  // max total degree, -1 for the zero polynomial
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  static Poly3 from_terms(std::vector<Term> terms);

 private:
  std::vector<Term> terms_;
  void normalize();
};

inline Poly3 operator*(double s, const Poly3& p) { return p * s; }

// Polynomial vector field.
struct VPoly3 {
  std::array<Poly3, 3> comp;

  Vec3 eval(const Vec3& p) const {
    return Vec3(comp[0].eval(p), comp[1].eval(p), comp[2].eval(p));
  }
  // J(i,j) = d comp_i / d x_j
  Mat3 jacobian_eval(const Vec3& p) const {
    Mat3 j;
    for (int i = 0; i < 3; ++i) j.row(i) = comp[i].grad_eval(p).transpose();
    return j;
  }
  Poly3 divergence() const {
    return comp[0].diff(0) + comp[1].diff(1) + comp[2].diff(2);
  }
  int degree() const {
    int d = -1;
    for (const auto& c : comp) d = std::max(d, c.degree());
    return d;
  }
};

// grad(p) as a polynomial field.
VPoly3 gradient(const Poly3& p);
// curl of a polynomial field.
VPoly3 curl(const VPoly3& v);
// x . grad(p)  (the radial Euler operator r d/dr on homogeneous pieces).
Poly3 x_dot_grad(const Poly3& p);
Poly3 laplacian(const Poly3& p);

} // namespace fcav
