#pragma once

#include <vector>

#include "fcav/dynamics.hpp"

namespace fcav {

// Which degeneracy pattern the moments show: (i) all equal, (ii) exactly two
// equal, (iii) all distinct.
enum class InertiaCase { i, ii, iii };

InertiaCase classify_inertia_case(const InertiaSpec& inertia);
const char* to_string(InertiaCase c);

// One connected family of permanent rotations: a* spans the lambda*-eigenspace
// intersected with the momentum sphere |I a| = p. The trivial family a* = 0
// appears only for p = 0.
struct EquilibriumFamily {
  double lambda_star = 0.0;
  std::vector<int> axes;        // computational-frame axes with this moment
  int eigenspace_dim = 0;
  int manifold_dim = 0;         // local dimension of the equilibrium set at a*
  Vec3 representative = Vec3::Zero();
  bool trivial = false;
  bool is_max = false;          // lambda* == max moment
};

std::vector<EquilibriumFamily> enumerate_equilibria(const InertiaSpec& inertia,
                                                    double momentum_magnitude);

struct ResidualReport {
  double residual;        // energy-norm of rhs: sqrt(cdot'(M-R'I^-1R)cdot + adot'I adot)
  double euler_residual;  // |a x I a|, the raw rigid-body defect
  double tol;
  bool pass;
};

ResidualReport verify_equilibrium(const State& state, const AssembledOperators& ops,
                                  const EBlocks& eb, const InertiaSpec& inertia,
                                  double nu, double tol);

enum class HessianVerdict { local_min_candidate, saddle };
const char* to_string(HessianVerdict v);

// Second-variation test of the constrained energy at (0, a*): evaluates
// phi(b) = ((lambda* - I) b | I b) on the orthogonal complement of
// N(lambda* - I). Positive definite there iff lambda* is the largest moment.
// Throws std::invalid_argument for a* = 0 or a* not an inertia eigenvector.
HessianVerdict reduced_hessian_test(const InertiaSpec& inertia, const Vec3& a_star);

// min over families of |a - nearest point of the family| with the momentum
// magnitude fixed at p.
double distance_to_equilibria(const InertiaSpec& inertia, const Vec3& a,
                              double momentum_magnitude);

} // namespace fcav
