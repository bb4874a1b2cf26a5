#include "fcav/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace fcav {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::normally_stable: return "normally-stable";
    case Classification::normally_hyperbolic: return "normally-hyperbolic";
    default: return "indeterminate";
  }
}

LinearizedOperator assemble_linearization(const AssembledOperators& ops,
                                          const EBlocks& eb, const InertiaSpec& inertia,
                                          double nu, const Vec3& a_star) {
  const int N = ops.N;
  const double an = a_star.norm();
  if (!(an > 0.0))
    throw std::invalid_argument("assemble_linearization: a* must be nontrivial");

  State eq{VecX::Zero(N), a_star, 0.0};
  const double scale = stiffness_scale(ops, nu) + an;
  const auto rep = verify_equilibrium(eq, ops, eb, inertia, nu, 1e-9 * scale);
  if (!rep.pass)
    throw std::invalid_argument("assemble_linearization: a* fails the equilibrium "
                                "residual test (residual " + fmt_double(rep.residual) + ")");

  const double lambda_star = inertia.apply(a_star).dot(a_star) / (an * an);

  MatX A = MatX::Zero(N + 3, N + 3);
  A.topLeftCorner(N, N) = nu * ops.S;
  for (int k = 0; k < 3; ++k)
    if (a_star[k] != 0.0) A.topLeftCorner(N, N).noalias() += 2.0 * a_star[k] * ops.C[k];
  const Mat3 ax = skew(a_star);
  A.bottomLeftCorner(3, N) =
      lambda_star * ax * inertia.apply_inverse(Vec3::Ones()).asDiagonal() * ops.Rmom;
  A.bottomRightCorner(3, 3) = ax * (inertia.matrix() - lambda_star * Mat3::Identity());

  LinearizedOperator lin;
  lin.N = N;
  lin.a_star = a_star;
  lin.lambda_star = lambda_star;
  lin.L = eb.lu.solve(A);
  lin.eps0 = 1e-9 * scale;

  const double tol = inertia.coincidence_tol();
  lin.manifold_dim = 0;
  for (int j = 0; j < 3; ++j)
    if (std::abs(inertia.lambda[j] - lambda_star) <= tol) ++lin.manifold_dim;
  return lin;
}

namespace {

int svd_rank(const MatX& m, double threshold) {
  Eigen::JacobiSVD<MatX> svd(m);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > threshold) ++r;
  return r;
}

} // namespace

SpectrumReport compute_spectrum(const LinearizedOperator& lin) {
  SpectrumReport rep;
  rep.eps0 = lin.eps0;
  rep.manifold_dim = lin.manifold_dim;

  Eigen::EigenSolver<MatX> es(-lin.L, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalError("compute_spectrum: dense eigensolver failed to converge");
  rep.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });

  const int n = lin.N + 3;
  const int rank1 = svd_rank(lin.L, lin.eps0);
  rep.kernel_dim = n - rank1;
  // Same eps0 heuristic for L^2, rescaled by ||L|| to keep the threshold in
  // the units of the squared operator.
  const double lnorm = lin.L.cwiseAbs().maxCoeff();
  const int rank2 = svd_rank(lin.L * lin.L, lin.eps0 * std::max(lnorm, lin.eps0));
  rep.semisimple = rank1 == rank2;

  rep.unstable_count = 0;
  double gap_re = -std::numeric_limits<double>::infinity();
  rep.axis_clean = true;
  for (const auto& z : rep.eigenvalues) {
    if (z.real() > rep.eps0) ++rep.unstable_count;
    if (z.real() < -rep.eps0) gap_re = std::max(gap_re, z.real());
    if (std::abs(z.real()) <= rep.eps0 && std::abs(z) > rep.eps0) rep.axis_clean = false;
  }
  rep.spectral_gap = std::isfinite(gap_re) ? -gap_re : 0.0;

  const bool structure_ok =
      rep.axis_clean && rep.semisimple && rep.kernel_dim == rep.manifold_dim;
  if (!structure_ok)
    rep.classification = Classification::indeterminate;
  else if (rep.unstable_count == 0)
    rep.classification = Classification::normally_stable;
  else
    rep.classification = Classification::normally_hyperbolic;
  return rep;
}

bool imaginary_axis_audit(const SpectrumReport& report) {
  for (const auto& z : report.eigenvalues) {
    if (std::abs(z) <= report.eps0) continue;  // zero cluster
    if (std::abs(z.real()) <= report.eps0) return false;
  }
  return true;
}

SweepResult unstable_count_sweep(const AssembledOperators& ops, const CavitySpec& cavity,
                                 double nu, double mu1, double mu3,
                                 const std::vector<double>& mu_values, double momentum) {
  if (!(momentum > 0.0))
    throw std::invalid_argument("unstable_count_sweep: momentum must be > 0");

  // spectrum + tracked branch at one family member I(mu) = diag[mu1, mu, mu3].
  // The branch is real in a neighborhood of the crossing: among real
  // eigenvalues sorted by |Re| the first is the persistent kernel direction
  // along a*, the branch is the next one. Away from mu3 the branch merges
  // into a complex pair; reported as nearest-to-zero real there.
  auto probe = [&](double mu, SpectrumReport* rep_out) -> std::complex<double> {
    const InertiaSpec inertia = InertiaSpec::from_diagonal(Vec3(mu1, mu, mu3));
    inertia.require_admissible(cavity);
    // Axis that carries the moment mu3 after sorting; at mu == mu3 the
    // eigenspace is two-dimensional and either representative works.
    int axis = 0;
    for (int j = 0; j < 3; ++j)
      if (std::abs(inertia.lambda[j] - mu3) <= inertia.coincidence_tol()) axis = j;
    Vec3 a_star = Vec3::Zero();
    a_star[axis] = momentum / mu3;

    const EBlocks eb = build_E(ops, inertia);
    const LinearizedOperator lin = assemble_linearization(ops, eb, inertia, nu, a_star);
    const SpectrumReport rep = compute_spectrum(lin);

    std::vector<double> reals;
    for (const auto& z : rep.eigenvalues)
      if (std::abs(z.imag()) <= rep.eps0) reals.push_back(z.real());
    std::sort(reals.begin(), reals.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (reals.size() < 2)
      throw NumericalError("unstable_count_sweep: branch tracking lost at mu = " +
                           fmt_double(mu) +
                           " (real branch merged into a complex pair)");
    if (rep_out) *rep_out = rep;
    return {reals[1], 0.0};
  };

  SweepResult result;
  result.mu_crossing = mu3;
  for (double mu : mu_values) {
    SpectrumReport rep;
    const std::complex<double> tracked = probe(mu, &rep);
    result.rows.push_back({mu, rep.unstable_count, tracked, rep.kernel_dim});
  }

  // z'(mu3) by central differences with a step small enough to stay inside
  // the neighborhood where the branch is real on both sides; shrink on a
  // collision. The display grid above is typically far too coarse for this.
  double h = 1e-4 * std::max(1.0, mu3);
  for (int attempt = 0; attempt < 4; ++attempt, h *= 0.1) {
    try {
      const double zlo = probe(mu3 - h, nullptr).real();
      const double zhi = probe(mu3 + h, nullptr).real();
      // Reject if the left probe still sits on a merged far-away real.
      if (std::abs(zlo) > 1e3 * std::abs(zhi) && attempt + 1 < 4) continue;
      result.slope = (zhi - zlo) / (2.0 * h);
      result.crossed = zlo < 0.0 && zhi > 0.0;
      break;
    } catch (const NumericalError&) {
      if (attempt + 1 == 4) throw;
    }
  }
  return result;
}

} // namespace fcav
