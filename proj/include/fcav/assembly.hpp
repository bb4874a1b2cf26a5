#pragma once

#include <array>
#include <vector>

#include <Eigen/LU>

#include "fcav/basis.hpp"
#include "fcav/types.hpp"

namespace fcav {

// Galerkin operators on the ball. Testing the momentum equation against the
// divergence-free Dirichlet fields b_i realizes the Helmholtz projection
// implicitly: (b_i | P w) = (P b_i | w) = (b_i | w), so P never appears as a
// matrix. The Stokes term is assembled in integrated-by-parts form
// S_ij = int grad b_i : grad b_j (no boundary terms, Dirichlet data).
//
// Everything here depends only on (cavity, basis); the inertia tensor enters
// through build_E and the dynamics. assemble_all takes it solely to check the
// shell-consistency invariant up front.
struct AssembledOperators {
  int N = 0;
  double radius = 1.0;
  int l_max = 0, n_max = 0;

  MatX M;                    // N x N   mass          int b_i . b_j
  MatX S;                    // N x N   stiffness     int grad b_i : grad b_j
  MatX Rmom;                 // 3 x N   momentum      column j = int x x b_j
  std::array<MatX, 3> C;     // N x N   Coriolis      int b_i . (e_k x b_j)
  std::vector<double> T;     // N^3     convection    int b_i . ((b_j.grad) b_k)
  Mat3 J_fluid;              // int (|x|^2 Id - x (x) x)

  // Layout: fixed-k slabs, each a column-major (i, j) matrix.
  double Tijk(int i, int j, int k) const {
    return T[(static_cast<size_t>(k) * N + j) * N + i];
  }
  // Fluid-fluid block of E: M - R^T I^-1 R (symmetric, positive definite for
  // admissible inertia; this is the discrete form of the energy positivity
  // bound).
  MatX fluid_metric(const InertiaSpec& inertia) const;
};

AssembledOperators assemble_all(const GalerkinBasis& basis, const CavitySpec& cavity,
                                const InertiaSpec& inertia);

// Throws NumericalError naming the offending operator if a structural
// invariant fails (symmetry, skewness, definiteness, T antisymmetry, R rank).
void verify_operator_invariants(const AssembledOperators& ops, const InertiaSpec& inertia);

// Discretization of E(v,a) = (v + P(x x I^-1 int(x x v)) - P(x x a), I a).
// Sign derivation, fixed once: for a constant vector w,
//   b . (x x w) = w . (b x x) = -w . (x x b)
// so testing against b_i gives  int b_i . (x x w) dx = -(R^T w)_i  with
// R's column j = int x x b_j. Applied to w = I^-1 R c and w = a:
//   fluid row:  M c - R^T I^-1 (R c) + R^T a
//   body  row:  I a
// The block matrix is lower-left zero, hence invertible whenever the fluid
// metric M - R^T I^-1 R and I are (they are SPD for admissible inertia).
struct EBlocks {
  int N = 0;
  MatX E;                          // (N+3) x (N+3)
  Eigen::PartialPivLU<MatX> lu;
  InertiaSpec inertia;

  VecX apply(const VecX& z) const { return E * z; }
  VecX solve(const VecX& rhs) const { return lu.solve(rhs); }
};

EBlocks build_E(const AssembledOperators& ops, const InertiaSpec& inertia);

// (T .. (c, c'))_i = sum_jk T_ijk c_j c'_k
VecX convective_apply(const AssembledOperators& ops, const VecX& c, const VecX& cp);
// (sum_k w_k C_k) c
VecX coriolis_apply(const AssembledOperators& ops, const Vec3& w, const VecX& c);

// c0 = lambda_min( M^{-1/2} (M - R^T I^-1 R) M^{-1/2} ), the discrete
// constant of the positivity bound; lies in (0, 1] for admissible inertia.
double positivity_constant(const AssembledOperators& ops, const InertiaSpec& inertia);

// nu * lambda_max(M^{-1} S): stiffness scale used for step-size and
// zero-cluster thresholds.
double stiffness_scale(const AssembledOperators& ops, double viscosity);

} // namespace fcav
