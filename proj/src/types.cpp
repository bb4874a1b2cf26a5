#include "fcav/types.hpp"

#include <algorithm>
#include <array>

#include <Eigen/Eigenvalues>

namespace fcav {

namespace {

// Proper (det +1) signed-permutation rotation sending user axis order to the
// ascending-moment order. Sign flips leave a diagonal tensor diagonal, so
// flipping one axis to restore orientation is free.
InertiaSpec sorted_spec(const Vec3& lambda_user, const Mat3& user_to_principal) {
  std::array<int, 3> perm = {0, 1, 2};
  std::sort(perm.begin(), perm.end(),
            [&](int a, int b) { return lambda_user[a] < lambda_user[b]; });

  Mat3 p = Mat3::Zero();
  for (int i = 0; i < 3; ++i) p(i, perm[i]) = 1.0;
  if (p.determinant() < 0.0) p.row(2) *= -1.0;

  InertiaSpec spec;
  for (int i = 0; i < 3; ++i) spec.lambda[i] = lambda_user[perm[i]];
  spec.rotation = p * user_to_principal;
  return spec;
}

} // namespace

InertiaSpec InertiaSpec::from_diagonal(const Vec3& user_diag) {
  for (int i = 0; i < 3; ++i)
    if (!(user_diag[i] > 0.0)) throw ConfigError("inertia moments must be positive");
  return sorted_spec(user_diag, Mat3::Identity());
}

InertiaSpec InertiaSpec::from_matrix(const Mat3& user_matrix) {
  if ((user_matrix - user_matrix.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, user_matrix.cwiseAbs().maxCoeff()))
    throw ConfigError("inertia.matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> es(user_matrix);
  if (es.info() != Eigen::Success)
    throw NumericalError("inertia.matrix eigendecomposition failed");
  Mat3 v = es.eigenvectors();  // columns; eigenvalues already ascending
  if (v.determinant() < 0.0) v.col(2) *= -1.0;
  // x_principal = V^T x_user, and eigenvalues are already sorted.
  return sorted_spec(es.eigenvalues(), v.transpose());
}

} // namespace fcav
