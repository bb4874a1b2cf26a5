#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fcav/assembly.hpp"

namespace fcav {

// Modal state: fluid velocity v = sum_j c_j b_j (body frame, relative to the
// shell) plus the angular velocity a of the body frame.
struct State {
  VecX c;
  Vec3 a = Vec3::Zero();
  double t = 0.0;
};

struct Sample {
  double t;
  VecX c;
  Vec3 a;
  double energy;        // E = 1/2 (c' (M - R' I^-1 R) c + a' I a)
  double dissipation;   // nu c' S c
  double momentum_norm; // |I a|
  double cnorm_M;       // sqrt(c' M c)
};

enum class RunStatus { completed, diverged, step_underflow };

struct Trajectory {
  std::vector<Sample> samples;
  long steps = 0;
  long rejected = 0;
  RunStatus status = RunStatus::completed;
  double dt_used = 0.0;
};

enum class Scheme { imex1, imex2 };

struct IntegrateOptions {
  Scheme scheme = Scheme::imex2;
  double dt = 0.0;              // <= 0: choose from stiffness/rotation scales
  bool adaptive = false;        // embedded IMEX-Euler error control
  double rtol = 1e-8;
  bool project_momentum = true; // rescale I a to its initial magnitude each step
  double blowup_guard = 1e6;    // ||c|| + |a| beyond this aborts as diverged
  int max_samples = 2000;
};

// omega = I^-1 R c: the fluid's share of the angular velocity.
Vec3 fluid_omega(const AssembledOperators& ops, const InertiaSpec& inertia, const VecX& c);

// Right-hand side of the Galerkin evolution: solves
//   E (c_dot, a_dot) = ( -nu S c - T..(c,c) - 2 sum_k (a-omega)_k C_k c,
//                        -(a - omega) x (I a) )
// for (c_dot, a_dot). The linearization of this map at an equilibrium is
// -L*_h by construction, which is what the finite-difference oracle checks.
std::pair<VecX, Vec3> rhs(const State& state, const AssembledOperators& ops,
                          const EBlocks& eb, const InertiaSpec& inertia, double nu);

double energy(const State& state, const AssembledOperators& ops, const InertiaSpec& inertia);
double dissipation(const State& state, const AssembledOperators& ops, double nu);

// Fixed-step ARS(2,2,2) IMEX by default: the stiff viscous term is solved
// implicitly through (E + dt*gamma*nu*S_ext), the bilinear convection /
// Coriolis / gyroscopic terms advance explicitly. Momentum projection keeps
// |I a| at its initial value (the continuous invariant) without affecting the
// order of the scheme; it can be switched off to observe the bare drift.
Trajectory integrate(const State& state0, const AssembledOperators& ops,
                     const EBlocks& eb, const InertiaSpec& inertia, double nu,
                     double horizon, const IntegrateOptions& opts = {});

// Default step size: min(10 / (nu lambda_max(M^-1 S)), 0.05 / max(1, |a0|),
// horizon / 256). The first bound keeps the implicit part accurate (it is
// unconditionally stable), the second resolves the fastest rotation.
double default_time_step(const AssembledOperators& ops, double nu, const State& state0,
                         double horizon);

struct ExpFit {
  double rate;
  double stderr_rate;   // standard error of the slope
  double residual_rms;  // RMS of log-residuals
  int n;
};

// Least-squares slope of log(value) over the trailing time window.
// Throws std::invalid_argument on non-positive values, fewer than 10 samples
// in the window, or a degenerate (constant) series.
ExpFit fit_exponential_rate(std::span<const std::pair<double, double>> series,
                            double window);

struct DecayFitResult {
  bool ok = false;
  ExpFit fit{};
  double window = 0.0;
  std::string error;
};

// Fit policy for trajectory diagnostics: locate the peak of the series, drop
// the floor (values below 1e-11 * peak, where projection/rounding noise
// lives), then fit the trailing 60% of what remains after the peak. Swallows
// fit errors into the result instead of throwing.
DecayFitResult fit_trailing_decay(const std::vector<std::pair<double, double>>& series);

} // namespace fcav
