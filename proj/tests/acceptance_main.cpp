// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Each criterion pins its tolerance in code; the scenarios are fixed-seed and
// deterministic, so a failure here is a regression, not noise.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "fcav/opcache.hpp"
#include "fcav/scenario.hpp"
#include "fcav/spectrum.hpp"

using namespace fcav;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

const CavitySpec kCavity{1.0, 0.3};
const double kJf = kCavity.fluid_inertia_scalar();

struct Shared {
  GalerkinBasis basis_fine = build_basis(kCavity, 2, 2);
  GalerkinBasis basis_coarse = build_basis(kCavity, 1, 1);
  AssembledOperators ops_fine =
      assemble_all(basis_fine, kCavity, InertiaSpec::from_diagonal(
                                            Vec3(kJf + 1, kJf + 2, kJf + 3)));
  AssembledOperators ops_coarse =
      assemble_all(basis_coarse, kCavity, InertiaSpec::from_diagonal(
                                              Vec3(kJf + 1, kJf + 2, kJf + 3)));
};

InertiaSpec random_distinct_inertia(std::mt19937_64& rng, double min_gap = 0.05) {
  std::uniform_real_distribution<double> uni(0.05, 2.0);
  Vec3 shell(uni(rng), uni(rng), uni(rng));
  std::sort(shell.data(), shell.data() + 3);
  shell[1] = std::max(shell[1], shell[0] + min_gap);
  shell[2] = std::max(shell[2], shell[1] + min_gap);
  return InertiaSpec::from_diagonal(Vec3(kJf, kJf, kJf) + shell);
}

// 1. Momentum conservation over 10 random scenarios, horizon 50, defaults.
Outcome criterion_momentum(const Shared& sh) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst_drift = 0.0, worst_time = 0.0;
  for (int run = 0; run < 10; ++run) {
    const InertiaSpec inertia = random_distinct_inertia(rng);
    const EBlocks eb = build_E(sh.ops_fine, inertia);
    const int axis = static_cast<int>(uni(rng) * 3) % 3;
    const double p = 0.5 + 1.5 * uni(rng);
    Vec3 a0 = Vec3::Zero();
    a0[axis] = p / inertia.lambda[axis];
    const VecX c0 =
        sample_perturbation(sh.ops_fine, 0.1 + 0.9 * uni(rng), 1000 + run);
    const double t0 = now_seconds();
    const Trajectory traj = integrate(State{c0, a0, 0.0}, sh.ops_fine, eb, inertia,
                                      kCavity.viscosity, 50.0);
    worst_time = std::max(worst_time, now_seconds() - t0);
    if (traj.status != RunStatus::completed) return {false, "run did not complete"};
    const double m0 = traj.samples.front().momentum_norm;
    for (const auto& s : traj.samples)
      worst_drift = std::max(worst_drift, std::abs(s.momentum_norm - m0) / m0);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max relative drift %.3g (tol 1e-8), slowest run %.1fs",
                worst_drift, worst_time);
  return {worst_drift <= 1e-8 && worst_time <= 60.0, buf};
}

// 2. Energy balance: residual order within 0.3 of 2; E non-increasing.
Outcome criterion_energy_balance(const Shared& sh) {
  std::mt19937_64 rng(202);
  const InertiaSpec inertia = random_distinct_inertia(rng);
  const EBlocks eb = build_E(sh.ops_fine, inertia);
  VecX c0 = sample_perturbation(sh.ops_fine, 1.0, 2020);
  const State s0{c0, Vec3(0.2, 0.3, 0.9), 0.0};
  const double nu = kCavity.viscosity;

  bool monotone = true;
  auto residual = [&](double dt) {
    IntegrateOptions opts;
    opts.dt = dt;
    opts.project_momentum = false;  // bare scheme, as the study measures it
    opts.max_samples = 1 << 22;
    const Trajectory traj = integrate(s0, sh.ops_fine, eb, inertia, nu, 2.0, opts);
    const double etol = 10.0 * opts.rtol * std::max(1.0, traj.samples.front().energy);
    for (size_t i = 0; i + 1 < traj.samples.size(); ++i)
      if (traj.samples[i + 1].energy > traj.samples[i].energy + etol) monotone = false;
    double diss = 0.0;
    for (size_t i = 0; i + 1 < traj.samples.size(); ++i)
      diss += 0.5 * (traj.samples[i].dissipation + traj.samples[i + 1].dissipation) *
              (traj.samples[i + 1].t - traj.samples[i].t);
    return std::abs(traj.samples.back().energy - traj.samples.front().energy + diss);
  };
  const double r1 = residual(0.02), r2 = residual(0.01), r4 = residual(0.005);
  const double p12 = std::log2(r1 / r2), p24 = std::log2(r2 / r4);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "observed orders %.2f, %.2f (nominal 2 +- 0.3); monotone %s", p12, p24,
                monotone ? "yes" : "no");
  return {std::abs(p12 - 2.0) < 0.3 && std::abs(p24 - 2.0) < 0.3 && monotone, buf};
}

// 3. Discrete positivity constant in (0, 1] over 100 random tensors.
Outcome criterion_positivity_constant(const Shared& sh) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> uni(0.0, 3.0);
  double cmin = 1e9, cmax = -1e9;
  for (int trial = 0; trial < 100; ++trial) {
    const InertiaSpec inertia = InertiaSpec::from_diagonal(
        Vec3(kJf + uni(rng), kJf + uni(rng), kJf + uni(rng)));
    const double c0 = positivity_constant(sh.ops_fine, inertia);
    cmin = std::min(cmin, c0);
    cmax = std::max(cmax, c0);
    if (!(c0 > 0.0 && c0 <= 1.0 + 1e-12)) {
      char buf[120];
      std::snprintf(buf, sizeof buf, "c0 = %.6g out of (0,1]", c0);
      return {false, buf};
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "c0 in [%.4g, %.4g] over 100 tensors", cmin, cmax);
  return {true, buf};
}

// 4. Spectral counts (0,1,2) at max/mid/min, kernel 1, clean axis, both bases.
Outcome criterion_spectral_counts(const Shared& sh) {
  std::mt19937_64 rng(404);
  const int expected[3] = {0, 1, 2};          // axis order: max, mid, min
  const int axis_of[3] = {2, 1, 0};
  for (int trial = 0; trial < 25; ++trial) {
    const InertiaSpec inertia = random_distinct_inertia(rng);
    for (int pos = 0; pos < 3; ++pos) {
      Vec3 a_star = Vec3::Zero();
      a_star[axis_of[pos]] = 1.5 / inertia.lambda[axis_of[pos]];
      int counts[2];
      int k = 0;
      for (const AssembledOperators* ops : {&sh.ops_coarse, &sh.ops_fine}) {
        const EBlocks eb = build_E(*ops, inertia);
        const auto rep = compute_spectrum(
            assemble_linearization(*ops, eb, inertia, kCavity.viscosity, a_star));
        if (rep.kernel_dim != 1) return {false, "kernel dimension != 1"};
        if (!imaginary_axis_audit(rep)) return {false, "eigenvalue near the imaginary axis"};
        counts[k++] = rep.unstable_count;
      }
      if (counts[0] != counts[1]) return {false, "counts differ across resolutions"};
      if (counts[1] != expected[pos]) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "axis %d: count %d, expected %d", pos, counts[1],
                      expected[pos]);
        return {false, buf};
      }
    }
  }
  return {true, "counts (0,1,2) at 25 tensors x 3 axes x 2 resolutions"};
}

// 5. Kernel multiplicity in the degenerate cases, with the rank test.
Outcome criterion_kernel_multiplicity(const Shared& sh) {
  const double nu = kCavity.viscosity;
  auto spectrum_at = [&](const InertiaSpec& inertia, const Vec3& a_star) {
    const EBlocks eb = build_E(sh.ops_fine, inertia);
    return compute_spectrum(assemble_linearization(sh.ops_fine, eb, inertia, nu, a_star));
  };
  const InertiaSpec sphere =
      InertiaSpec::from_diagonal(Vec3(kJf + 0.4, kJf + 0.4, kJf + 0.4));
  const auto rs = spectrum_at(sphere, Vec3(0.2, -0.3, 0.4));
  if (rs.kernel_dim != 3 || !rs.semisimple) return {false, "spherical case failed"};

  const InertiaSpec twofold =
      InertiaSpec::from_diagonal(Vec3(kJf + 0.3, kJf + 0.9, kJf + 0.9));
  Vec3 on_circle = Vec3::Zero();
  on_circle[2] = 0.7;
  const auto rc = spectrum_at(twofold, on_circle);
  if (rc.kernel_dim != 2 || !rc.semisimple) return {false, "twofold circle case failed"};
  Vec3 simple = Vec3::Zero();
  simple[0] = 0.7;
  const auto rp = spectrum_at(twofold, simple);
  if (rp.kernel_dim != 1 || !rp.semisimple) return {false, "twofold simple-axis case failed"};

  return {true, "kernel dims 3 / 2 / 1 with the semi-simplicity rank test passing"};
}

// 6. Linearization vs finite-difference Jacobian at 9 equilibria.
Outcome criterion_linearization_oracle(const Shared& sh) {
  const double nu = kCavity.viscosity;
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const InertiaSpec inertia = random_distinct_inertia(rng);
    const EBlocks eb = build_E(sh.ops_fine, inertia);
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 a_star = Vec3::Zero();
      a_star[axis] = 1.2 / inertia.lambda[axis];
      const auto lin = assemble_linearization(sh.ops_fine, eb, inertia, nu, a_star);
      const int N = sh.ops_fine.N;
      const int dim = N + 3;
      // central differences; rhs is quadratic so they are exact to rounding
      const double h = 1e-4;
      MatX jac(dim, dim);
      VecX y0 = VecX::Zero(dim);
      y0.tail(3) = a_star;
      auto eval = [&](const VecX& y) {
        auto [cd, ad] = rhs(State{y.head(N), Vec3(y.tail(3)), 0.0}, sh.ops_fine, eb,
                            inertia, nu);
        VecX out(dim);
        out.head(N) = cd;
        out.tail(3) = ad;
        return out;
      };
      for (int j = 0; j < dim; ++j) {
        VecX yp = y0, ym = y0;
        yp[j] += h;
        ym[j] -= h;
        jac.col(j) = (eval(yp) - eval(ym)) / (2.0 * h);
      }
      worst = std::max(worst, (lin.L + jac).cwiseAbs().maxCoeff() /
                                  lin.L.cwiseAbs().maxCoeff());
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max relative entrywise error %.3g (tol 1e-6)", worst);
  return {worst <= 1e-6, buf};
}

// 7. Nonlinear stability: fitted decay of ||c||_M within 15% of the gap.
Outcome criterion_stable_decay(const Shared& sh) {
  const double t0 = now_seconds();
  const InertiaSpec inertia =
      InertiaSpec::from_diagonal(Vec3(kJf + 0.3, kJf + 0.6, kJf + 0.9));
  const EBlocks eb = build_E(sh.ops_fine, inertia);
  const double nu = kCavity.viscosity, p = 2.0;
  Vec3 a_star = Vec3::Zero();
  a_star[2] = p / inertia.lambda[2];

  const auto rep =
      compute_spectrum(assemble_linearization(sh.ops_fine, eb, inertia, nu, a_star));
  if (rep.classification != Classification::normally_stable)
    return {false, "max axis not classified normally stable"};

  const VecX c0 = sample_perturbation(sh.ops_fine, 1e-2, 7777);
  const Trajectory traj =
      integrate(State{c0, a_star, 0.0}, sh.ops_fine, eb, inertia, nu, 400.0);
  std::vector<std::pair<double, double>> series;
  for (const auto& s : traj.samples) series.emplace_back(s.t, s.cnorm_M);
  const auto fit = fit_trailing_decay(series);
  if (!fit.ok) return {false, "decay fit failed: " + fit.error};
  if (traj.samples.back().cnorm_M >= 1e-2)
    return {false, "perturbation did not decay"};

  const double rel = std::abs(-fit.fit.rate - rep.spectral_gap) / rep.spectral_gap;
  char buf[160];
  std::snprintf(buf, sizeof buf, "rate %.5g vs gap %.5g (rel err %.2f%%, tol 15%%), %.1fs",
                -fit.fit.rate, rep.spectral_gap, 100.0 * rel, now_seconds() - t0);
  return {rel <= 0.15 && (now_seconds() - t0) <= 120.0, buf};
}

// 8. Instability and capture: escape from the middle axis, momentum-preserving
//    convergence to a lambda-max rotation, exponential terminal decay.
Outcome criterion_instability_capture(const Shared& sh) {
  const InertiaSpec inertia =
      InertiaSpec::from_diagonal(Vec3(kJf + 0.3, kJf + 0.6, kJf + 0.9));
  const EBlocks eb = build_E(sh.ops_fine, inertia);
  const double nu = kCavity.viscosity, p = 2.0, amplitude = 1e-2;
  Vec3 a_star = Vec3::Zero();
  a_star[1] = p / inertia.lambda[1];

  const VecX c0 = sample_perturbation(sh.ops_fine, amplitude, 8888);
  const Trajectory traj =
      integrate(State{c0, a_star, 0.0}, sh.ops_fine, eb, inertia, nu, 2500.0);
  if (traj.status != RunStatus::completed) return {false, "run did not complete"};

  double dmax = 0.0;
  for (const auto& s : traj.samples)
    dmax = std::max(dmax,
                    std::sqrt(s.cnorm_M * s.cnorm_M + (s.a - a_star).squaredNorm()));
  const bool escaped = dmax > 10.0 * amplitude;

  const Sample& last = traj.samples.back();
  const double m0 = traj.samples.front().momentum_norm;
  Vec3 target = Vec3::Zero();
  target[2] = last.a[2] > 0 ? p / inertia.lambda[2] : -p / inertia.lambda[2];
  const double dist_final = (last.a - target).norm() + last.cnorm_M;
  const double mom_err = std::abs(last.momentum_norm - m0);

  std::vector<std::pair<double, double>> series;
  for (const auto& s : traj.samples)
    series.emplace_back(s.t, distance_to_equilibria(inertia, s.a, m0) + s.cnorm_M);
  const auto fit = fit_trailing_decay(series);

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "escape max dist %.3g; final dist to lambda-max rotation %.2g; "
                "|I a| mismatch %.2g (tol 1e-6); terminal rate %.4g",
                dmax, dist_final, mom_err, fit.ok ? fit.fit.rate : 0.0);
  const bool pass = escaped && dist_final < 1e-6 && mom_err <= 1e-6 && fit.ok &&
                    fit.fit.rate < 0.0;
  return {pass, buf};
}

// 9. Variational characterization over a 100-sample panel.
Outcome criterion_variational(const Shared&) {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> uni(0.02, 3.0);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const InertiaSpec inertia = InertiaSpec::from_diagonal(
        Vec3(kJf + uni(rng), kJf + uni(rng), kJf + uni(rng)));
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 a = Vec3::Zero();
      a[axis] = 1.0;
      const bool verdict_min =
          reduced_hessian_test(inertia, a) == HessianVerdict::local_min_candidate;
      const bool is_max = std::abs(inertia.lambda[axis] - inertia.lambda[2]) <=
                          inertia.coincidence_tol();
      if (verdict_min != is_max) ++mismatches;
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%d mismatches over 100 tensors x 3 axes", mismatches);
  return {mismatches == 0, buf};
}

// 10. Eigenvalue crossing: sign change at mu3 with positive FD slope.
Outcome criterion_crossing(const Shared& sh) {
  const double mu1 = kJf + 0.2, mu3 = kJf + 0.8;
  std::vector<double> mus;
  for (int i = 0; i <= 12; ++i) mus.push_back(mu3 - 0.24 + 0.04 * i);
  const auto res =
      unstable_count_sweep(sh.ops_coarse, kCavity, kCavity.viscosity, mu1, mu3, mus, 1.5);
  bool steps_ok = true;
  double z_at_mu3 = 0.0;
  for (const auto& row : res.rows) {
    if (row.mu < mu3 - 1e-9 && row.unstable_count != 0) steps_ok = false;
    if (row.mu > mu3 + 1e-9 && row.unstable_count != 1) steps_ok = false;
    if (std::abs(row.mu - mu3) < 1e-9) z_at_mu3 = row.tracked.real();
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "count 0->1 %s; z(mu3) = %.2g; slope %.4g (> 0)",
                steps_ok ? "yes" : "no", z_at_mu3, res.slope);
  return {steps_ok && std::abs(z_at_mu3) < 1e-8 && res.crossed && res.slope > 0.0, buf};
}

} // namespace

int main() {
  Shared sh;
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome(const Shared&)> run;
  };
  const std::vector<Entry> entries = {
      {1, "momentum conservation", criterion_momentum},
      {2, "energy balance order", criterion_energy_balance},
      {3, "discrete positivity constant", criterion_positivity_constant},
      {4, "spectral counts", criterion_spectral_counts},
      {5, "kernel multiplicity", criterion_kernel_multiplicity},
      {6, "linearization oracle", criterion_linearization_oracle},
      {7, "nonlinear stability rate", criterion_stable_decay},
      {8, "instability and capture", criterion_instability_capture},
      {9, "variational characterization", criterion_variational},
      {10, "eigenvalue crossing", criterion_crossing},
  };
  int failures = 0;
  for (const auto& e : entries) {
    Outcome out;
    try {
      out = e.run(sh);
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("[%s] criterion %2d: %s - %s\n", out.pass ? "PASS" : "FAIL", e.id,
                e.name, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
