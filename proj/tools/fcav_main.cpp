// fcav: Galerkin simulator and spectral analyzer for the inertial motion of a
// rigid body with a fluid-filled spherical cavity.
//
// Subcommands: equilibria | spectrum | simulate | sweep | cache.
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 blow-up guard.

#include <atomic>
#include <filesystem>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcav/io.hpp"
#include "fcav/opcache.hpp"
#include "fcav/scenario.hpp"
#include "fcav/spectrum.hpp"
#include "fcav/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace fcav;

namespace {

struct Cli {
  std::string config_path;
  std::string out_dir = "out";
  std::string cache_dir;
  unsigned long long seed_override = 0;
  bool has_seed_override = false;
  int threads = 1;
  std::string format = "csv";
};

json meta_block(const Scenario& sc) {
  json m;
  m["tool"] = std::string("fcav ") + kVersion;
  m["scenario_hash"] = hex64(sc.hash());
  m["conventions"] =
      "spectra are of the semigroup generator -L*; E = 0.5*(c'(M - R'I^-1R)c + a'Ia); "
      "||c||_M = sqrt(c'Mc); axes sorted so lambda1 <= lambda2 <= lambda3";
  return m;
}

json vec3_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

struct Assembled {
  GalerkinBasis basis;
  AssembledOperators ops;
  InertiaSpec inertia;
  EBlocks eb;
};

Assembled prepare(const Scenario& sc, const std::string& cache_dir) {
  Assembled a;
  a.basis = build_basis(sc.cavity, sc.l_max, sc.n_max);
  a.inertia = sc.inertia();
  a.ops = cache_dir.empty() ? assemble_all(a.basis, sc.cavity, a.inertia)
                            : assemble_cached(cache_dir, a.basis, sc.cavity, a.inertia);
  a.eb = build_E(a.ops, a.inertia);
  return a;
}


// ---------------------------------------------------------------- equilibria

int cmd_equilibria(const Cli& cli) {
  const Scenario sc = parse_scenario_file(cli.config_path);
  const Assembled a = prepare(sc, cli.cache_dir);
  const double nu = sc.cavity.viscosity;

  json rep;
  rep["meta"] = meta_block(sc);
  rep["inertia"] = {{"lambda", vec3_json(a.inertia.lambda)},
                    {"case", to_string(classify_inertia_case(a.inertia))}};
  rep["momentum_magnitude"] = sc.ic_momentum;

  const double scale = stiffness_scale(a.ops, nu) + sc.ic_momentum;
  json fams = json::array();
  for (const auto& fam : enumerate_equilibria(a.inertia, sc.ic_momentum)) {
    json f;
    f["trivial"] = fam.trivial;
    f["lambda_star"] = fam.lambda_star;
    f["eigenspace_dim"] = fam.eigenspace_dim;
    f["manifold_dim"] = fam.manifold_dim;
    f["representative"] = vec3_json(fam.representative);
    f["representative_user"] = vec3_json(a.inertia.to_user(fam.representative));
    if (!fam.trivial) {
      State st{VecX::Zero(a.ops.N), fam.representative, 0.0};
      const auto vr = verify_equilibrium(st, a.ops, a.eb, a.inertia, nu, 1e-9 * scale);
      f["residual"] = vr.residual;
      f["verified"] = vr.pass;
      f["hessian"] = to_string(reduced_hessian_test(a.inertia, fam.representative));
      f["is_max_moment"] = fam.is_max;
    }
    fams.push_back(std::move(f));
  }
  rep["families"] = std::move(fams);

  atomic_write((fs::path(cli.out_dir) / "equilibria.json").string(), rep.dump(2) + "\n");
  std::cout << rep.dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------------ spectrum

json spectrum_to_json(const SpectrumReport& rep) {
  json j;
  j["generator"] = "-L*";
  json eigs = json::array();
  for (const auto& z : rep.eigenvalues) eigs.push_back(json::array({z.real(), z.imag()}));
  j["eigenvalues"] = std::move(eigs);
  j["kernel_dim"] = rep.kernel_dim;
  j["manifold_dim"] = rep.manifold_dim;
  j["semisimple"] = rep.semisimple;
  j["unstable_count"] = rep.unstable_count;
  j["spectral_gap"] = rep.spectral_gap;
  j["eps0"] = rep.eps0;
  j["imaginary_axis_clean"] = rep.axis_clean;
  j["classification"] = to_string(rep.classification);
  return j;
}

std::string eigenvalue_csv(const Scenario& sc, const SpectrumReport& rep) {
  std::string csv = file_header(sc.hash(), "columns: re, im, abs, cluster");
  csv += "re,im,abs,cluster\n";
  for (const auto& z : rep.eigenvalues) {
    const char* tag = std::abs(z) <= rep.eps0 ? "kernel"
                      : z.real() > rep.eps0 ? "unstable"
                      : z.real() < -rep.eps0 ? "stable"
                                             : "axis";
    csv += fmt_double(z.real()) + "," + fmt_double(z.imag()) + "," +
           fmt_double(std::abs(z)) + "," + tag + "\n";
  }
  return csv;
}

int cmd_spectrum(const Cli& cli) {
  const Scenario sc = parse_scenario_file(cli.config_path);
  const bool emit_csv = cli.format != "json";
  const Assembled a = prepare(sc, cli.cache_dir);
  const double nu = sc.cavity.viscosity;

  const Vec3 a_star = equilibrium_for_axis(a.inertia, sc.spectrum_axis, sc.ic_momentum);
  if (!(a_star.norm() > 0.0))
    throw ConfigError("spectrum: ic.momentum must be > 0 "
                      "(classification needs a nontrivial rotation)");
  const auto lin = assemble_linearization(a.ops, a.eb, a.inertia, nu, a_star);
  const auto rep = compute_spectrum(lin);

  json out;
  out["meta"] = meta_block(sc);
  out["a_star"] = vec3_json(a_star);
  out["lambda_star"] = lin.lambda_star;
  out["spectrum"] = spectrum_to_json(rep);
  atomic_write((fs::path(cli.out_dir) / "spectrum.json").string(), out.dump(2) + "\n");
  if (sc.out_eigen_csv && emit_csv)
    atomic_write((fs::path(cli.out_dir) / "eigenvalues.csv").string(),
                 eigenvalue_csv(sc, rep));
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------------ simulate

std::string trajectory_csv(const Scenario& sc, const Trajectory& traj) {
  std::string csv =
      file_header(sc.hash(), "columns: t, a1, a2, a3, momentum, energy, dissipation, "
                             "cnorm_M (computational frame)");
  csv += "t,a1,a2,a3,momentum,energy,dissipation,cnorm_M\n";
  for (const auto& s : traj.samples) {
    csv += fmt_double(s.t) + "," + fmt_double(s.a[0]) + "," + fmt_double(s.a[1]) + "," +
           fmt_double(s.a[2]) + "," + fmt_double(s.momentum_norm) + "," +
           fmt_double(s.energy) + "," + fmt_double(s.dissipation) + "," +
           fmt_double(s.cnorm_M) + "\n";
  }
  return csv;
}

void write_modal_dump(const std::string& path, const Trajectory& traj, int N,
                      std::uint64_t scenario_hash) {
  // Same container as the operator cache: magic, JSON header, raw LE f64.
  json hdr;
  hdr["format"] = "fcav-modal";
  hdr["version"] = kVersion;
  hdr["scenario_hash"] = hex64(scenario_hash);
  hdr["N"] = N;
  hdr["samples"] = traj.samples.size();
  hdr["arrays"] = json::array(
      {json{{"name", "t"}, {"rows", traj.samples.size()}, {"cols", 1}},
       json{{"name", "c"}, {"rows", traj.samples.size()}, {"cols", N}}});
  const std::string header = hdr.dump();
  std::string blob;
  blob.append("FCMDL001", 8);
  const std::uint64_t hlen = header.size();
  blob.append(reinterpret_cast<const char*>(&hlen), 8);
  blob.append(header);
  for (const auto& s : traj.samples)
    blob.append(reinterpret_cast<const char*>(&s.t), 8);
  for (const auto& s : traj.samples)
    blob.append(reinterpret_cast<const char*>(s.c.data()), static_cast<size_t>(N) * 8);
  atomic_write(path, blob);
}

json fit_to_json(const DecayFitResult& r) {
  json j;
  j["ok"] = r.ok;
  if (r.ok) {
    j["rate"] = r.fit.rate;
    j["stderr"] = r.fit.stderr_rate;
    j["residual_rms"] = r.fit.residual_rms;
    j["samples"] = r.fit.n;
    j["window"] = r.window;
  } else {
    j["error"] = r.error;
  }
  return j;
}

int cmd_simulate(const Cli& cli) {
  Scenario sc = parse_scenario_file(cli.config_path);
  const bool emit_csv = cli.format != "json";
  if (cli.has_seed_override) sc.ic_seed = cli.seed_override;
  const Assembled a = prepare(sc, cli.cache_dir);
  const double nu = sc.cavity.viscosity;

  const State s0 = make_initial_state(sc, a.ops, a.inertia);
  const Trajectory traj =
      integrate(s0, a.ops, a.eb, a.inertia, nu, sc.horizon, sc.integrate_options());

  json out;
  out["meta"] = meta_block(sc);
  out["status"] = traj.status == RunStatus::completed ? "completed"
                  : traj.status == RunStatus::diverged ? "diverged"
                                                       : "step_underflow";
  out["steps"] = traj.steps;
  out["rejected"] = traj.rejected;
  out["dt"] = traj.dt_used;

  const Sample& last = traj.samples.back();
  const Sample& first = traj.samples.front();
  out["final"] = {{"t", last.t},
                  {"a", vec3_json(last.a)},
                  {"a_user", vec3_json(a.inertia.to_user(last.a))},
                  {"momentum", last.momentum_norm},
                  {"energy", last.energy},
                  {"cnorm_M", last.cnorm_M}};
  const double m0 = first.momentum_norm;
  double drift = 0.0;
  for (const auto& s : traj.samples)
    drift = std::max(drift, std::abs(s.momentum_norm - m0));
  out["momentum_drift_rel"] = m0 > 0.0 ? drift / m0 : drift;

  bool monotone = true;
  const double etol = 10.0 * sc.rtol * std::max(1.0, first.energy);
  for (size_t i = 0; i + 1 < traj.samples.size(); ++i)
    if (traj.samples[i + 1].energy > traj.samples[i].energy + etol) monotone = false;
  out["energy_monotone"] = monotone;

  // Escape diagnostics relative to the unperturbed equilibrium.
  if (sc.ic_kind == Scenario::IcKind::equilibrium) {
    const Vec3 a_star = equilibrium_for_axis(a.inertia, sc.ic_axis, sc.ic_momentum);
    double dmax = 0.0, t_escape = -1.0;
    for (const auto& s : traj.samples) {
      const double d = std::sqrt(s.cnorm_M * s.cnorm_M + (s.a - a_star).squaredNorm());
      dmax = std::max(dmax, d);
      if (t_escape < 0.0 && d > 2.0 * sc.ic_amplitude) t_escape = s.t;
    }
    out["escape"] = {{"d_max", dmax},
                     {"left_neighborhood", dmax > 10.0 * sc.ic_amplitude},
                     {"t_first_doubled", t_escape}};
  }

  std::vector<std::pair<double, double>> cnorm_series, dist_series;
  for (const auto& s : traj.samples) {
    cnorm_series.emplace_back(s.t, s.cnorm_M);
    dist_series.emplace_back(s.t, distance_to_equilibria(a.inertia, s.a, m0));
  }
  out["cnorm_fit"] = fit_to_json(fit_trailing_decay(cnorm_series));
  out["dist_fit"] = fit_to_json(fit_trailing_decay(dist_series));

  // Capture: nearest lambda-max permanent rotation at the end of the run.
  {
    const double lmax = a.inertia.lambda[2];
    Vec3 proj = Vec3::Zero();
    for (int j = 0; j < 3; ++j)
      if (std::abs(a.inertia.lambda[j] - lmax) <= a.inertia.coincidence_tol())
        proj[j] = last.a[j];
    json cap;
    cap["dist_to_lambda_max_family"] =
        proj.norm() > 0.0 && m0 > 0.0
            ? (last.a - proj * (m0 / lmax / proj.norm())).norm()
            : last.a.norm();
    cap["momentum_mismatch"] = std::abs(last.momentum_norm - m0);
    out["capture"] = std::move(cap);
  }

  if (sc.out_spectrum && sc.ic_momentum > 0.0) {
    const Vec3 a_t = equilibrium_for_axis(a.inertia, sc.spectrum_axis, sc.ic_momentum);
    const auto lin = assemble_linearization(a.ops, a.eb, a.inertia, nu, a_t);
    const auto rep = compute_spectrum(lin);
    json cmp;
    cmp["axis"] = to_string(sc.spectrum_axis);
    cmp["spectral_gap"] = rep.spectral_gap;
    cmp["classification"] = to_string(rep.classification);
    cmp["unstable_count"] = rep.unstable_count;
    const auto& cf = out["cnorm_fit"];
    if (cf.value("ok", false)) {
      const double fitted = -cf["rate"].get<double>();
      cmp["fitted_decay_rate"] = fitted;
      cmp["rel_gap_error"] = std::abs(fitted - rep.spectral_gap) / rep.spectral_gap;
    }
    out["gap_comparison"] = std::move(cmp);
  }

  if (sc.out_trajectory && emit_csv)
    atomic_write((fs::path(cli.out_dir) / "trajectory.csv").string(),
                 trajectory_csv(sc, traj));
  if (sc.out_modal)
    write_modal_dump((fs::path(cli.out_dir) / "modal.bin").string(), traj, a.ops.N,
                     sc.hash());
  if (sc.out_summary)
    atomic_write((fs::path(cli.out_dir) / "summary.json").string(), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return traj.status == RunStatus::completed ? 0
         : traj.status == RunStatus::diverged ? 4
                                              : 3;
}

// --------------------------------------------------------------------- sweep

int cmd_sweep(const Cli& cli) {
  Scenario sc = parse_scenario_file(cli.config_path);
  const bool emit_csv = cli.format != "json";
  const double nu = sc.cavity.viscosity;

  if (sc.sweep_kind == Scenario::SweepKind::mu) {
    const Assembled a = prepare(sc, cli.cache_dir);
    const double jf = sc.cavity.fluid_inertia_scalar();
    double mu1 = sc.sweep_mu1 > 0.0 ? sc.sweep_mu1 : jf + 0.2;
    double mu3 = sc.sweep_mu3 > 0.0 ? sc.sweep_mu3 : jf + 0.8;
    double lo = sc.sweep_mu_min > 0.0 ? sc.sweep_mu_min : mu3 - 0.3;
    double hi = sc.sweep_mu_max > 0.0 ? sc.sweep_mu_max : mu3 + 0.3;
    if (!(mu1 < lo) || !(lo < hi))
      throw ConfigError("sweep: need mu1 < mu_min < mu_max");
    std::vector<double> mus;
    for (int i = 0; i < sc.sweep_steps; ++i)
      mus.push_back(lo + (hi - lo) * i / (sc.sweep_steps - 1.0));

    const auto res =
        unstable_count_sweep(a.ops, sc.cavity, nu, mu1, mu3, mus, sc.ic_momentum);

    std::string csv = file_header(
        sc.hash(), "columns: mu, unstable_count, tracked_re, tracked_im, kernel_dim");
    csv += "mu,unstable_count,tracked_re,tracked_im,kernel_dim\n";
    for (const auto& r : res.rows)
      csv += fmt_double(r.mu) + "," + std::to_string(r.unstable_count) + "," +
             fmt_double(r.tracked.real()) + "," + fmt_double(r.tracked.imag()) + "," +
             std::to_string(r.kernel_dim) + "\n";
    if (emit_csv) atomic_write((fs::path(cli.out_dir) / "sweep_mu.csv").string(), csv);

    json out;
    out["meta"] = meta_block(sc);
    out["kind"] = "mu";
    out["mu1"] = mu1;
    out["mu3"] = mu3;
    out["crossed"] = res.crossed;
    out["slope_at_mu3"] = res.slope;
    atomic_write((fs::path(cli.out_dir) / "sweep_mu.json").string(), out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (sc.sweep_kind == Scenario::SweepKind::hessian_panel) {
    // Random admissible inertia panel; checks the variational verdict against
    // the lambda-max rule at every principal axis. Pure 3x3 work, no assembly.
    const double jf = sc.cavity.fluid_inertia_scalar();
    std::mt19937_64 rng(sc.sweep_seed);
    std::uniform_real_distribution<double> shell(0.05, 2.0);
    std::string csv = file_header(
        sc.hash(), "columns: sample, lambda1, lambda2, lambda3, axis, verdict, agrees");
    csv += "sample,lambda1,lambda2,lambda3,axis,verdict,agrees\n";
    int mismatches = 0;
    for (int s = 0; s < sc.sweep_count; ++s) {
      const Vec3 lam(jf + shell(rng), jf + shell(rng), jf + shell(rng));
      const InertiaSpec inertia = InertiaSpec::from_diagonal(lam);
      for (int ax = 0; ax < 3; ++ax) {
        Vec3 a_star = Vec3::Zero();
        a_star[ax] = 1.0;
        const auto verdict = reduced_hessian_test(inertia, a_star);
        const bool is_max = std::abs(inertia.lambda[ax] - inertia.lambda[2]) <=
                            inertia.coincidence_tol();
        const bool agrees =
            (verdict == HessianVerdict::local_min_candidate) == is_max;
        if (!agrees) ++mismatches;
        csv += std::to_string(s) + "," + fmt_double(inertia.lambda[0]) + "," +
               fmt_double(inertia.lambda[1]) + "," + fmt_double(inertia.lambda[2]) +
               "," + std::to_string(ax) + "," + to_string(verdict) + "," +
               (agrees ? "1" : "0") + "\n";
      }
    }
    if (emit_csv)
      atomic_write((fs::path(cli.out_dir) / "sweep_hessian.csv").string(), csv);
    json out;
    out["meta"] = meta_block(sc);
    out["kind"] = "hessian_panel";
    out["samples"] = sc.sweep_count;
    out["mismatches"] = mismatches;
    atomic_write((fs::path(cli.out_dir) / "sweep_hessian.json").string(),
                 out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return mismatches == 0 ? 0 : 3;
  }

  // refinement: unstable counts at two basis resolutions over a random panel.
  const double jf = sc.cavity.fluid_inertia_scalar();
  const GalerkinBasis coarse = build_basis(sc.cavity, 1, 1);
  const GalerkinBasis fine = build_basis(sc.cavity, sc.l_max, sc.n_max);
  const InertiaSpec probe = InertiaSpec::from_diagonal(Vec3(jf + 1, jf + 2, jf + 3));
  const AssembledOperators ops_c = assemble_all(coarse, sc.cavity, probe);
  const AssembledOperators ops_f = assemble_all(fine, sc.cavity, probe);

  std::mt19937_64 rng(sc.sweep_seed);
  std::uniform_real_distribution<double> shell(0.1, 2.0);

  struct Member {
    Vec3 lam;
    int axis;
    int count_coarse = -1, count_fine = -1;
  };
  std::vector<Member> members;
  for (int s = 0; s < sc.sweep_count; ++s) {
    Vec3 lam(jf + shell(rng), jf + shell(rng), jf + shell(rng));
    // enforce clear separation so the panel probes the three generic cases
    std::sort(lam.data(), lam.data() + 3);
    if (lam[1] - lam[0] < 0.05 || lam[2] - lam[1] < 0.05) {
      lam[1] = lam[0] + std::max(0.05, lam[1] - lam[0]);
      lam[2] = lam[1] + std::max(0.05, lam[2] - lam[1]);
    }
    for (int ax = 0; ax < 3; ++ax) members.push_back({lam, ax});
  }

  auto run_member = [&](Member& m) {
    const InertiaSpec inertia = InertiaSpec::from_diagonal(m.lam);
    Vec3 a_star = Vec3::Zero();
    a_star[m.axis] = sc.ic_momentum / inertia.lambda[m.axis];
    for (int pass = 0; pass < 2; ++pass) {
      const AssembledOperators& ops = pass == 0 ? ops_c : ops_f;
      const EBlocks eb = build_E(ops, inertia);
      const auto lin = assemble_linearization(ops, eb, inertia, nu, a_star);
      const auto rep = compute_spectrum(lin);
      (pass == 0 ? m.count_coarse : m.count_fine) = rep.unstable_count;
    }
  };

  const int nthreads = std::max(1, cli.threads);
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < members.size(); i = next.fetch_add(1))
        run_member(members[i]);
    });
  for (auto& th : pool) th.join();

  std::string csv = file_header(
      sc.hash(),
      "columns: lambda1, lambda2, lambda3, axis, count_coarse, count_fine, match");
  csv += "lambda1,lambda2,lambda3,axis,count_coarse,count_fine,match\n";
  int mismatches = 0;
  for (const auto& m : members) {
    const bool match = m.count_coarse == m.count_fine;
    if (!match) ++mismatches;
    csv += fmt_double(m.lam[0]) + "," + fmt_double(m.lam[1]) + "," +
           fmt_double(m.lam[2]) + "," + std::to_string(m.axis) + "," +
           std::to_string(m.count_coarse) + "," + std::to_string(m.count_fine) + "," +
           (match ? "1" : "0") + "\n";
  }
  if (emit_csv)
    atomic_write((fs::path(cli.out_dir) / "sweep_refinement.csv").string(), csv);
  json out;
  out["meta"] = meta_block(sc);
  out["kind"] = "refinement";
  out["members"] = members.size();
  out["mismatches"] = mismatches;
  atomic_write((fs::path(cli.out_dir) / "sweep_refinement.json").string(),
               out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return mismatches == 0 ? 0 : 3;
}

// --------------------------------------------------------------------- cache

int cmd_cache(const Cli& cli, const std::string& action) {
  if (cli.cache_dir.empty()) throw ConfigError("cache: --dir is required");
  if (action == "list") {
    if (fs::exists(cli.cache_dir))
      for (const auto& e : fs::directory_iterator(cli.cache_dir))
        if (e.path().extension() == ".fcops")
          std::cout << e.path().filename().string() << " " << fs::file_size(e.path())
                    << "\n";
    return 0;
  }
  if (action == "clear") {
    size_t removed = 0;
    if (fs::exists(cli.cache_dir))
      for (const auto& e : fs::directory_iterator(cli.cache_dir))
        if (e.path().extension() == ".fcops") {
          fs::remove(e.path());
          ++removed;
        }
    std::cout << "removed " << removed << " entries\n";
    return 0;
  }
  const Scenario sc = parse_scenario_file(cli.config_path);
  const InertiaSpec inertia = sc.inertia();
  const std::string key = operator_cache_key(sc.cavity, sc.l_max, sc.n_max, inertia);
  const fs::path path = fs::path(cli.cache_dir) / (key + ".fcops");
  if (action == "path") {
    std::cout << path.string() << "\n";
    return 0;
  }
  if (action == "build") {
    const GalerkinBasis basis = build_basis(sc.cavity, sc.l_max, sc.n_max);
    assemble_cached(cli.cache_dir, basis, sc.cavity, inertia);
    std::cout << path.string() << "\n";
    return 0;
  }
  throw ConfigError("cache: unknown action '" + action + "' (list|clear|build|path)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"fluid-filled rigid body: Galerkin simulation and spectral analysis"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Cli cli;
  std::string cache_action = "list";

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* copt = sub->add_option("--config", cli.config_path, "scenario config file");
    if (needs_config) copt->required();
    sub->add_option("--out", cli.out_dir, "output directory");
    sub->add_option("--threads", cli.threads, "worker threads for sweeps");
    sub->add_option("--cache", cli.cache_dir, "operator cache directory");
    sub->add_option("--format", cli.format, "csv|json (json suppresses csv emission)");
  };

  auto* eq = app.add_subcommand("equilibria", "enumerate and classify equilibria");
  add_common(eq, true);
  auto* sp = app.add_subcommand("spectrum", "linearization spectrum at an equilibrium");
  add_common(sp, true);
  auto* si = app.add_subcommand("simulate", "integrate a scenario");
  add_common(si, true);
  auto* seed_opt =
      si->add_option("--seed", cli.seed_override, "override ic.seed from the config");
  auto* sw = app.add_subcommand("sweep", "parameter sweeps (mu / hessian / refinement)");
  add_common(sw, true);
  auto* ca = app.add_subcommand("cache", "operator cache maintenance");
  ca->add_option("action", cache_action, "list|clear|build|path");
  ca->add_option("--dir", cli.cache_dir, "cache directory")->required();
  ca->add_option("--config", cli.config_path, "scenario config file (build/path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cli.has_seed_override = seed_opt->count() > 0;

  try {
    if (cli.format != "csv" && cli.format != "json")
      throw ConfigError("--format must be csv or json");
    if (eq->parsed()) return cmd_equilibria(cli);
    if (sp->parsed()) return cmd_spectrum(cli);
    if (si->parsed()) return cmd_simulate(cli);
    if (sw->parsed()) return cmd_sweep(cli);
    if (ca->parsed()) return cmd_cache(cli, cache_action);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "cli error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
