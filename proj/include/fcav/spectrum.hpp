#pragma once

#include <complex>
#include <vector>

#include "fcav/equilibria.hpp"

namespace fcav {

// Discretized linearization at a permanent rotation (0, a*):
//   A*_h = [ nu S + 2 sum_k (a*)_k C_k          0                      ]
//          [ lambda* [a*]_x I^-1 R              [a*]_x (I - lambda*)   ]
//   L*_h = E_h^-1 A*_h.
// The evolution convention is du/dt + L* u = 0, so the semigroup generator is
// -L*_h and it equals the Jacobian of dynamics::rhs at the equilibrium; all
// spectra below are reported for -L*_h.
struct LinearizedOperator {
  MatX L;               // L*_h, (N+3) x (N+3)
  int N = 0;
  Vec3 a_star = Vec3::Zero();
  double lambda_star = 0.0;
  int manifold_dim = 0; // dim N(lambda* - I), the local equilibrium-manifold dim
  double eps0 = 0.0;    // zero-cluster threshold 1e-9 (nu lmax(M^-1 S) + |a*|)
};

LinearizedOperator assemble_linearization(const AssembledOperators& ops,
                                          const EBlocks& eb, const InertiaSpec& inertia,
                                          double nu, const Vec3& a_star);

enum class Classification { normally_stable, normally_hyperbolic, indeterminate };
const char* to_string(Classification c);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;  // of -L*_h, conjugation-closed
  int kernel_dim = 0;        // numerical rank deficiency of L*_h
  int manifold_dim = 0;
  bool semisimple = false;   // rank(L*_h^2) == rank(L*_h)
  int unstable_count = 0;    // # eigenvalues with Re z > eps0
  double spectral_gap = 0.0; // -max{Re z : Re z < -eps0}
  double eps0 = 0.0;
  bool axis_clean = true;    // no nonzero eigenvalue with |Re z| <= eps0
  Classification classification = Classification::indeterminate;
};

// Dense nonsymmetric eigensolve of -L*_h plus the structural checks of the
// kernel: dimension via SVD rank with threshold eps0, semi-simplicity via the
// rank test (a numerical surrogate for N(L^2) = N(L)). Classification is
// normally-stable / normally-hyperbolic only when the kernel matches the
// manifold dimension, the rank test passes and no nonzero eigenvalue sits in
// the eps0 band around the imaginary axis; otherwise indeterminate.
SpectrumReport compute_spectrum(const LinearizedOperator& lin);

// True iff every eigenvalue either lies in the zero cluster (|z| <= eps0) or
// keeps |Re z| > eps0.
bool imaginary_axis_audit(const SpectrumReport& report);

struct SweepRow {
  double mu;
  int unstable_count;
  std::complex<double> tracked;  // branch eigenvalue of -L*_h nearest zero
  int kernel_dim;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool crossed = false;      // tracked branch changes sign across mu3
  double slope = 0.0;        // finite-difference z'(mu3)
  double mu_crossing = 0.0;
};

// Inertia family I(mu) = diag[mu1, mu, mu3] (user order; internally sorted),
// equilibrium a* on the axis carrying mu3 with |I a*| = momentum. Tracks the
// real eigenvalue branch that crosses zero at mu = mu3. Throws NumericalError
// if the tracked branch turns complex (eigenvalue collision), reporting mu.
SweepResult unstable_count_sweep(const AssembledOperators& ops, const CavitySpec& cavity,
                                 double nu, double mu1, double mu3,
                                 const std::vector<double>& mu_values, double momentum);

} // namespace fcav
