#include "fcav/assembly.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace fcav {

MatX AssembledOperators::fluid_metric(const InertiaSpec& inertia) const {
  Vec3 inv = inertia.apply_inverse(Vec3::Ones());
  return M - Rmom.transpose() * inv.asDiagonal() * Rmom;
}

AssembledOperators assemble_all(const GalerkinBasis& basis, const CavitySpec& cavity,
                                const InertiaSpec& inertia) {
  inertia.require_admissible(cavity);
  const int N = basis.size();
  const auto& rule = basis.rule;
  const int Q = static_cast<int>(rule.size());

  const int needed = 3 * basis.max_field_degree() - 1;
  if (rule.exactness_degree < needed)
    throw NumericalError("assembly: quadrature exactness degree " +
                         std::to_string(rule.exactness_degree) + " < required " +
                         std::to_string(needed));

  AssembledOperators ops;
  ops.N = N;
  ops.radius = cavity.radius;
  ops.l_max = basis.l_max;
  ops.n_max = basis.n_max;

  // Cache mode values and Jacobians at all quadrature nodes.
  std::vector<MatX> val(Q);                 // val[q]: 3 x N, column j = b_j(x_q)
  std::vector<std::vector<Mat3>> jac(Q);    // jac[q][k]: (d b_k_i / d x_j)(x_q)
  for (int q = 0; q < Q; ++q) {
    val[q].resize(3, N);
    jac[q].resize(N);
    for (int k = 0; k < N; ++k) {
      val[q].col(k) = basis.modes[k].evaluate(rule.points[q]);
      jac[q][k] = basis.modes[k].jacobian(rule.points[q]);
    }
  }

  ops.M.setZero(N, N);
  ops.S.setZero(N, N);
  ops.Rmom.setZero(3, N);
  for (auto& c : ops.C) c.setZero(N, N);
  ops.J_fluid.setZero();
  ops.T.assign(static_cast<size_t>(N) * N * N, 0.0);

  MatX g(3, N), blockq(N, N);
  for (int q = 0; q < Q; ++q) {
    const double w = rule.weights[q];
    const Vec3& x = rule.points[q];

    ops.J_fluid += w * (x.squaredNorm() * Mat3::Identity() - x * x.transpose());
    ops.M.noalias() += w * (val[q].transpose() * val[q]);
    for (int j = 0; j < N; ++j)
      ops.Rmom.col(j) += w * x.cross(Vec3(val[q].col(j)));

    // Stiffness: grad b_i : grad b_j summed over rows of the Jacobians.
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j)
        ops.S(i, j) += w * jac[q][i].cwiseProduct(jac[q][j]).sum();

    // Coriolis: b_i . (e_k x b_j) = e_k . (b_j x b_i).
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const Vec3 cr = w * Vec3(val[q].col(j)).cross(Vec3(val[q].col(i)));
        for (int k = 0; k < 3; ++k) ops.C[k](i, j) += cr[k];
      }

    // Convection: T_ijk += w * b_i . (jac_k b_j). Layout is k-major with i
    // contiguous, so each fixed-k slab is a plain column-major (i, j) matrix.
    for (int k = 0; k < N; ++k) {
      g.noalias() = jac[q][k] * val[q];
      Eigen::Map<MatX> slab(ops.T.data() + static_cast<size_t>(k) * N * N, N, N);
      slab.noalias() += w * (val[q].transpose() * g);
    }
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < i; ++j) ops.S(i, j) = ops.S(j, i);

  verify_operator_invariants(ops, inertia);
  return ops;
}

namespace {
double max_abs(const MatX& m) { return m.cwiseAbs().maxCoeff(); }
} // namespace

void verify_operator_invariants(const AssembledOperators& ops, const InertiaSpec& inertia) {
  const int N = ops.N;
  const double tol = 1e-12;

  if (max_abs(ops.M - ops.M.transpose()) > tol * max_abs(ops.M))
    throw NumericalError("assembly invariant violated: M not symmetric");
  if (max_abs(ops.S - ops.S.transpose()) > tol * max_abs(ops.S))
    throw NumericalError("assembly invariant violated: S not symmetric");

  Eigen::SelfAdjointEigenSolver<MatX> esm(ops.M);
  if (esm.eigenvalues().minCoeff() <= 0.0)
    throw NumericalError("assembly invariant violated: M not positive definite");
  Eigen::SelfAdjointEigenSolver<MatX> ess(ops.S);
  if (ess.eigenvalues().minCoeff() <= 0.0)
    throw NumericalError("assembly invariant violated: S not positive definite");

  for (int k = 0; k < 3; ++k) {
    const char* names[] = {"C1", "C2", "C3"};
    if (max_abs(ops.C[k] + ops.C[k].transpose()) >
        tol * std::max(1.0, max_abs(ops.C[k])))
      throw NumericalError(std::string("assembly invariant violated: ") + names[k] +
                           " not skew-symmetric");
  }

  double tmax = 0.0, terr = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k <= i; ++k) {
        const double a = ops.Tijk(i, j, k), b = ops.Tijk(k, j, i);
        tmax = std::max(tmax, std::abs(a));
        terr = std::max(terr, std::abs(a + b));
      }
  if (terr > tol * std::max(1.0, tmax))
    throw NumericalError("assembly invariant violated: T_ijk != -T_kji");

  Eigen::JacobiSVD<MatX> svd(ops.Rmom);
  if (svd.singularValues()(2) <= tol * std::max(1.0, svd.singularValues()(0)))
    throw NumericalError("assembly invariant violated: R rank-deficient "
                         "(l=1 toroidal modes missing?)");

  Eigen::SelfAdjointEigenSolver<MatX> esf(ops.fluid_metric(inertia));
  if (esf.eigenvalues().minCoeff() <= 0.0)
    throw NumericalError("assembly invariant violated: M - R^T I^-1 R not "
                         "positive definite (inertia inconsistent with cavity)");
}

EBlocks build_E(const AssembledOperators& ops, const InertiaSpec& inertia) {
  EBlocks eb;
  eb.N = ops.N;
  eb.inertia = inertia;
  const int N = ops.N;
  eb.E.setZero(N + 3, N + 3);
  eb.E.topLeftCorner(N, N) = ops.fluid_metric(inertia);
  eb.E.topRightCorner(N, 3) = ops.Rmom.transpose();
  eb.E.bottomRightCorner(3, 3) = inertia.matrix();
  eb.lu.compute(eb.E);
  // Lower-left block is zero, so singularity can only come from the diagonal
  // blocks; both are SPD for admissible inertia, but a stripped basis (R = 0
  // forced by hand) with inconsistent inertia could still get here.
  const VecX probe = VecX::Ones(N + 3);
  if (!((eb.E * eb.lu.solve(probe) - probe).norm() < 1e-8 * std::sqrt(double(N + 3))))
    throw NumericalError("build_E: E-blocks singular (basis missing l=1 toroidal modes?)");
  return eb;
}

VecX convective_apply(const AssembledOperators& ops, const VecX& c, const VecX& cp) {
  const int N = ops.N;
  VecX out = VecX::Zero(N);
  for (int k = 0; k < N; ++k) {
    if (cp[k] == 0.0) continue;
    Eigen::Map<const MatX> slab(ops.T.data() + static_cast<size_t>(k) * N * N, N, N);
    out.noalias() += cp[k] * (slab * c);
  }
  return out;
}

VecX coriolis_apply(const AssembledOperators& ops, const Vec3& w, const VecX& c) {
  VecX out = VecX::Zero(ops.N);
  for (int k = 0; k < 3; ++k)
    if (w[k] != 0.0) out.noalias() += w[k] * (ops.C[k] * c);
  return out;
}

double positivity_constant(const AssembledOperators& ops, const InertiaSpec& inertia) {
  Eigen::GeneralizedSelfAdjointEigenSolver<MatX> es(ops.fluid_metric(inertia), ops.M);
  if (es.info() != Eigen::Success)
    throw NumericalError("positivity_constant: generalized eigensolve failed");
  return es.eigenvalues().minCoeff();
}

double stiffness_scale(const AssembledOperators& ops, double viscosity) {
  Eigen::GeneralizedSelfAdjointEigenSolver<MatX> es(ops.S, ops.M);
  if (es.info() != Eigen::Success)
    throw NumericalError("stiffness_scale: generalized eigensolve failed");
  return viscosity * es.eigenvalues().maxCoeff();
}

} // namespace fcav
