#pragma once

#include <cmath>
#include <numbers>

#include "fcav/util.hpp"

namespace fcav {

// Spherical cavity filled with a unit-density fluid. The density is a fixed
// normalization, not a parameter.
struct CavitySpec {
  double radius = 1.0;
  double viscosity = 1.0;

  void validate() const {
    if (!(radius > 0.0)) throw ConfigError("cavity.radius must be > 0");
    if (!(viscosity > 0.0)) throw ConfigError("cavity.viscosity must be > 0");
  }

  // Inertia tensor of the fluid alone about the center: (8 pi R^5 / 15) Id.
  double fluid_inertia_scalar() const {
    return 8.0 * std::numbers::pi * std::pow(radius, 5) / 15.0;
  }
};

// Inertia tensor of the whole system (shell + fluid) about the center of
// mass, stored diagonalized with moments sorted ascending. `rotation` maps
// user coordinates to the computational (sorted principal-axis) frame:
//   x_comp = rotation * x_user,   I_user = rotation^T * diag(lambda) * rotation.
// The rotation is proper (det +1), so vectors and angular velocities
// transform identically and no orientation bookkeeping is needed.
struct InertiaSpec {
  Vec3 lambda = Vec3::Ones();   // sorted: lambda[0] <= lambda[1] <= lambda[2]
  Mat3 rotation = Mat3::Identity();

  static InertiaSpec from_diagonal(const Vec3& user_diag);
  static InertiaSpec from_matrix(const Mat3& user_matrix);

  Mat3 matrix() const { return lambda.asDiagonal(); }
  Vec3 apply(const Vec3& a) const { return lambda.cwiseProduct(a); }
  Vec3 apply_inverse(const Vec3& a) const { return a.cwiseQuotient(lambda); }
  Vec3 to_user(const Vec3& v_comp) const { return rotation.transpose() * v_comp; }
  Vec3 to_comp(const Vec3& v_user) const { return rotation * v_user; }

  // Two moments are treated as coincident below this separation; drives the
  // equilibrium case tag and eigenspace grouping.
  double coincidence_tol() const { return 1e-10 * lambda.maxCoeff(); }

  // The shell's own inertia I - J_fluid must be physical (PSD). This is what
  // makes the discrete positivity bound c0 in (0,1] hold.
  bool admissible(const CavitySpec& cavity) const {
    const double jf = cavity.fluid_inertia_scalar();
    return lambda.minCoeff() >= jf - 1e-12 * std::max(1.0, lambda.maxCoeff());
  }
  void require_admissible(const CavitySpec& cavity) const {
    if (!(lambda.minCoeff() > 0.0))
      throw ConfigError("inertia moments must be positive");
    if (!admissible(cavity))
      throw ConfigError("inertia inconsistent with cavity: I - J_fluid not PSD "
                        "(every moment must be >= 8*pi*R^5/15 = " +
                        fmt_double(cavity.fluid_inertia_scalar()) + ")");
  }
};

} // namespace fcav
