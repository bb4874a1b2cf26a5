#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fcav/dynamics.hpp"
#include "fcav/types.hpp"

namespace fcav {

// Everything a run needs, parsed from a strict key = value config file.
// Unknown keys are hard errors. The canonical serialization (sorted keys,
// %.17g values) round-trips losslessly and is what the scenario hash covers.
struct Scenario {
  CavitySpec cavity;

  // Raw inertia input, kept for round-tripping; `inertia()` canonicalizes.
  std::optional<Vec3> inertia_diag;
  std::optional<Mat3> inertia_matrix;

  int l_max = 2;
  int n_max = 2;

  enum class IcKind { equilibrium, explicit_state };
  enum class AxisSel { min, mid, max };
  IcKind ic_kind = IcKind::equilibrium;
  AxisSel ic_axis = AxisSel::max;
  double ic_momentum = 1.0;
  double ic_amplitude = 1e-2;
  std::uint64_t ic_seed = 1;
  std::vector<double> ic_c0;  // explicit mode
  Vec3 ic_a0 = Vec3::Zero();  // explicit mode, user axes

  double horizon = 50.0;
  Scheme scheme = Scheme::imex2;
  double dt = 0.0;
  double rtol = 1e-8;
  bool adaptive = false;
  bool project_momentum = true;
  int max_samples = 2000;

  AxisSel spectrum_axis = AxisSel::max;

  enum class SweepKind { mu, hessian_panel, refinement };
  SweepKind sweep_kind = SweepKind::mu;
  double sweep_mu1 = 0.0, sweep_mu3 = 0.0;   // 0: derived from inertia
  double sweep_mu_min = 0.0, sweep_mu_max = 0.0;
  int sweep_steps = 21;
  int sweep_count = 100;
  std::uint64_t sweep_seed = 1;

  bool out_trajectory = true;
  bool out_summary = true;
  bool out_eigen_csv = true;
  bool out_modal = false;
  bool out_spectrum = true;  // compute the gap alongside simulate

  InertiaSpec inertia() const;
  IntegrateOptions integrate_options() const;
  std::string canonical_serialization() const;
  std::uint64_t hash() const;
};

Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text);

// Representative equilibrium for an axis selector; throws ConfigError when
// the selector is ambiguous for degenerate moments (mid with a twofold
// moment still resolves to the middle axis).
Vec3 equilibrium_for_axis(const InertiaSpec& inertia, Scenario::AxisSel axis,
                          double momentum);

// Isotropic Gaussian perturbation in the M-inner product on the c-block,
// scaled to ||c||_M = amplitude. Deterministic in the seed.
VecX sample_perturbation(const AssembledOperators& ops, double amplitude,
                         std::uint64_t seed);

State make_initial_state(const Scenario& sc, const AssembledOperators& ops,
                         const InertiaSpec& inertia);

const char* to_string(Scenario::AxisSel a);

} // namespace fcav
