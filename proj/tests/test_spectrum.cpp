#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "test_shared.hpp"

using namespace fcav;
using testutil::inertia_shell;
using testutil::shared_ops;

TEST_SUITE_BEGIN("spectrum");

TEST_CASE("assembled linearization equals the finite-difference Jacobian") {
  const auto& ops = shared_ops(1, 1);
  const double nu = 0.6;
  const std::array<InertiaSpec, 3> tensors = {
      inertia_shell(0.5, 1.0, 1.5), inertia_shell(0.2, 0.3, 0.4),
      inertia_shell(0.1, 0.9, 2.5)};
  for (const auto& inertia : tensors) {
    const EBlocks eb = build_E(ops, inertia);
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 a_star = Vec3::Zero();
      a_star[axis] = 1.3 / inertia.lambda[axis];
      const auto lin = assemble_linearization(ops, eb, inertia, nu, a_star);
      const State eq{VecX::Zero(ops.N), a_star, 0.0};
      const MatX jac = oracle::fd_jacobian(eq, ops, eb, inertia, nu);
      // The Jacobian of rhs at an equilibrium is the generator -L*.
      const double err = (lin.L + jac).cwiseAbs().maxCoeff();
      CHECK(err <= 1e-6 * lin.L.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("kernel contains exactly the tangent directions of the manifold") {
  const auto& ops = shared_ops(1, 1);
  const InertiaSpec inertia = inertia_shell(0.5, 1.0, 1.0);  // lambda2 == lambda3
  const EBlocks eb = build_E(ops, inertia);
  Vec3 a_star = Vec3::Zero();
  a_star[2] = 0.7;
  const auto lin = assemble_linearization(ops, eb, inertia, 1.0, a_star);

  // (0, a) with a in N(lambda* - I) is annihilated
  for (int axis : {1, 2}) {
    VecX u = VecX::Zero(ops.N + 3);
    u[ops.N + axis] = 1.0;
    CHECK((lin.L * u).norm() < 1e-12);
  }
  // the transverse direction is not
  VecX u = VecX::Zero(ops.N + 3);
  u[ops.N] = 1.0;
  CHECK((lin.L * u).norm() > 1e-3);

  const auto rep = compute_spectrum(lin);
  CHECK(rep.kernel_dim == 2);
  CHECK(rep.manifold_dim == 2);
  CHECK(rep.semisimple);
}

TEST_CASE("viscosity enters linearly through the fluid block") {
  const auto& ops = shared_ops(1, 1);
  const InertiaSpec inertia = inertia_shell(0.5, 1.0, 1.5);
  const EBlocks eb = build_E(ops, inertia);
  Vec3 a_star = Vec3::Zero();
  a_star[2] = 0.8;
  const double nu = 0.4;
  const auto lin1 = assemble_linearization(ops, eb, inertia, nu, a_star);
  const auto lin2 = assemble_linearization(ops, eb, inertia, 2.0 * nu, a_star);
  // E (L(2nu) - L(nu)) = [[nu S, 0], [0, 0]]
  const MatX diff = eb.E * (lin2.L - lin1.L);
  const int N = ops.N;
  CHECK((diff.topLeftCorner(N, N) - nu * ops.S).cwiseAbs().maxCoeff() <
        1e-10 * nu * ops.S.cwiseAbs().maxCoeff());
  CHECK(diff.topRightCorner(N, 3).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(diff.bottomRows(3).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rejects states that are not equilibria") {
  const auto& ops = shared_ops(1, 1);
  const InertiaSpec inertia = inertia_shell(0.5, 1.0, 1.5);
  const EBlocks eb = build_E(ops, inertia);
  CHECK_THROWS_AS(assemble_linearization(ops, eb, inertia, 1.0, Vec3(1, 0, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(assemble_linearization(ops, eb, inertia, 1.0, Vec3::Zero()),
                  std::invalid_argument);
}

TEST_CASE("unstable counts 0/1/2 at the max/mid/min axes") {
  const auto& ops = shared_ops(1, 1);
  const InertiaSpec inertia = inertia_shell(0.5, 1.0, 1.5);
  const EBlocks eb = build_E(ops, inertia);
  const double nu = 0.3, p = 2.0;
  const int expected[3] = {2, 1, 0};
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 a_star = Vec3::Zero();
    a_star[axis] = p / inertia.lambda[axis];
    const auto rep = compute_spectrum(assemble_linearization(ops, eb, inertia, nu, a_star));
    CHECK(rep.unstable_count == expected[axis]);
    CHECK(rep.kernel_dim == 1);
    CHECK(rep.semisimple);
    CHECK(imaginary_axis_audit(rep));
    CHECK(rep.classification == (axis == 2 ? Classification::normally_stable
                                           : Classification::normally_hyperbolic));
    if (axis == 2) CHECK(rep.spectral_gap > 0.0);
  }
}

TEST_CASE("eigenvalue list is closed under conjugation") {
  const auto& ops = shared_ops(1, 1);
  const InertiaSpec inertia = inertia_shell(0.3, 0.8, 1.9);
  const EBlocks eb = build_E(ops, inertia);
  Vec3 a_star = Vec3::Zero();
  a_star[1] = 1.1;
  const auto rep = compute_spectrum(assemble_linearization(ops, eb, inertia, 0.5, a_star));
  for (const auto& z : rep.eigenvalues) {
    if (std::abs(z.imag()) < 1e-14) continue;
    bool found = false;
    for (const auto& w : rep.eigenvalues)
      if (std::abs(w - std::conj(z)) < 1e-9 * std::max(1.0, std::abs(z))) found = true;
    CHECK(found);
  }
}

TEST_CASE("kernel multiplicity in the degenerate cases") {
  const auto& ops = shared_ops(1, 1);
  const double nu = 0.5;

  SUBCASE("spherical: kernel dimension 3") {
    const InertiaSpec inertia = inertia_shell(0.4, 0.4, 0.4);
    const EBlocks eb = build_E(ops, inertia);
    const auto rep =
        compute_spectrum(assemble_linearization(ops, eb, inertia, nu, Vec3(0.3, -0.2, 0.5)));
    CHECK(rep.kernel_dim == 3);
    CHECK(rep.manifold_dim == 3);
    CHECK(rep.semisimple);
    CHECK(rep.classification == Classification::normally_stable);
  }

  SUBCASE("twofold max: kernel dimension 2 at the circle, 1 at the simple axis") {
    const InertiaSpec inertia = inertia_shell(0.5, 1.0, 1.0);
    const EBlocks eb = build_E(ops, inertia);
    Vec3 on_circle = Vec3::Zero();
    on_circle[1] = 0.6;
    auto rep = compute_spectrum(assemble_linearization(ops, eb, inertia, nu, on_circle));
    CHECK(rep.kernel_dim == 2);
    CHECK(rep.semisimple);
    CHECK(rep.classification == Classification::normally_stable);

    Vec3 simple = Vec3::Zero();
    simple[0] = 0.6;
    rep = compute_spectrum(assemble_linearization(ops, eb, inertia, nu, simple));
    CHECK(rep.kernel_dim == 1);
    CHECK(rep.unstable_count > 0);
    CHECK(rep.classification == Classification::normally_hyperbolic);
  }
}

TEST_CASE("imaginary axis audit on synthetic reports") {
  SpectrumReport rep;
  rep.eps0 = 1e-9;
  rep.eigenvalues = {{0.0, 0.0}, {1e-12, 5.0}};
  CHECK_FALSE(imaginary_axis_audit(rep));
  rep.eigenvalues = {{0.0, 0.0}, {1e-12, 0.0}, {-3.0, 1.0}};
  CHECK(imaginary_axis_audit(rep));
}

TEST_CASE("mu sweep: count steps 0 to 1 with a positive crossing speed") {
  const auto& ops = shared_ops(1, 1);
  const CavitySpec cavity{1.0, 1.0};
  const double jf = cavity.fluid_inertia_scalar();
  const double mu1 = jf + 0.2, mu3 = jf + 0.8;
  std::vector<double> mus;
  for (int i = 0; i <= 12; ++i) mus.push_back(mu3 - 0.24 + 0.04 * i);
  const auto res = unstable_count_sweep(ops, cavity, 0.3, mu1, mu3, mus, 1.5);

  CHECK(res.crossed);
  CHECK(res.slope > 0.0);
  for (const auto& row : res.rows) {
    if (row.mu < mu3 - 1e-9) CHECK(row.unstable_count == 0);
    if (row.mu > mu3 + 1e-9) CHECK(row.unstable_count == 1);
    if (std::abs(row.mu - mu3) < 1e-9) {
      CHECK(std::abs(row.tracked.real()) < 1e-8);
      CHECK(row.kernel_dim == 2);
    }
  }
}

TEST_CASE("refinement stability: counts agree between coarse and default bases") {
  const auto& coarse = shared_ops(1, 1);
  const auto& fine = shared_ops(2, 2);
  const double nu = 0.4, p = 1.5;
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> uni(0.1, 2.0);
  for (int trial = 0; trial < 3; ++trial) {
    Vec3 shell(uni(rng), uni(rng), uni(rng));
    std::sort(shell.data(), shell.data() + 3);
    shell[1] = shell[0] + std::max(0.07, shell[1] - shell[0]);
    shell[2] = shell[1] + std::max(0.07, shell[2] - shell[1]);
    const InertiaSpec inertia = inertia_shell(shell[0], shell[1], shell[2]);
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 a_star = Vec3::Zero();
      a_star[axis] = p / inertia.lambda[axis];
      int counts[2];
      int k = 0;
      for (const AssembledOperators* ops : {&coarse, &fine}) {
        const EBlocks eb = build_E(*ops, inertia);
        counts[k++] =
            compute_spectrum(assemble_linearization(*ops, eb, inertia, nu, a_star))
                .unstable_count;
      }
      CHECK(counts[0] == counts[1]);
    }
  }
}

TEST_SUITE_END();
