#include "fcav/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace fcav {

Vec3 fluid_omega(const AssembledOperators& ops, const InertiaSpec& inertia, const VecX& c) {
  return inertia.apply_inverse(ops.Rmom * c);
}

namespace {

// Nonstiff load N(y): convection + Coriolis on the fluid row, the gyroscopic
// torque on the body row. The stiff -nu S c is handled separately.
VecX explicit_load(const VecX& c, const Vec3& a, const AssembledOperators& ops,
                   const InertiaSpec& inertia) {
  const int N = ops.N;
  VecX load(N + 3);
  const Vec3 omega = fluid_omega(ops, inertia, c);
  const Vec3 rel = a - omega;
  load.head(N) = -convective_apply(ops, c, c) - 2.0 * coriolis_apply(ops, rel, c);
  load.tail(3) = -rel.cross(inertia.apply(a));
  return load;
}

VecX pack(const VecX& c, const Vec3& a) {
  VecX y(c.size() + 3);
  y.head(c.size()) = c;
  y.tail(3) = a;
  return y;
}

} // namespace

std::pair<VecX, Vec3> rhs(const State& state, const AssembledOperators& ops,
                          const EBlocks& eb, const InertiaSpec& inertia, double nu) {
  const int N = ops.N;
  VecX load = explicit_load(state.c, state.a, ops, inertia);
  load.head(N).noalias() -= nu * (ops.S * state.c);
  const VecX sol = eb.solve(load);
  return {sol.head(N), Vec3(sol.tail(3))};
}

double energy(const State& state, const AssembledOperators& ops, const InertiaSpec& inertia) {
  const Vec3 m = ops.Rmom * state.c;
  const double fluid = state.c.dot(ops.M * state.c) - m.dot(inertia.apply_inverse(m));
  return 0.5 * (fluid + state.a.dot(inertia.apply(state.a)));
}

double dissipation(const State& state, const AssembledOperators& ops, double nu) {
  return nu * state.c.dot(ops.S * state.c);
}

double default_time_step(const AssembledOperators& ops, double nu, const State& state0,
                         double horizon) {
  const double stiff = stiffness_scale(ops, nu);
  double dt = 10.0 / stiff;
  dt = std::min(dt, 0.05 / std::max(1.0, state0.a.norm()));
  dt = std::min(dt, horizon / 256.0);
  return dt;
}

namespace {

struct ImexStepper {
  // ARS(2,2,2): gamma = 1 - 1/sqrt(2), delta = 1 - 1/(2 gamma). Stiffly
  // accurate; the implicit part is a 2-stage L-stable SDIRK.
  static constexpr double kGamma = 0.29289321881345247560;
  static constexpr double kDelta = -0.70710678118654752440;

  const AssembledOperators& ops;
  const EBlocks& eb;
  const InertiaSpec& inertia;
  double nu;
  Scheme scheme;

  double dt = -1.0;
  Eigen::PartialPivLU<MatX> stage_lu;   // E + dt*gamma*nu*S_ext
  Eigen::PartialPivLU<MatX> euler_lu;   // E + dt*nu*S_ext (embedded estimate)

  ImexStepper(const AssembledOperators& o, const EBlocks& e, const InertiaSpec& in,
              double visc, Scheme s)
      : ops(o), eb(e), inertia(in), nu(visc), scheme(s) {}

  void refactor(double new_dt, bool with_euler) {
    dt = new_dt;
    const int N = ops.N;
    const double g = scheme == Scheme::imex2 ? kGamma : 1.0;
    MatX A = eb.E;
    A.topLeftCorner(N, N).noalias() += (dt * g * nu) * ops.S;
    stage_lu.compute(A);
    if (with_euler && scheme == Scheme::imex2) {
      MatX B = eb.E;
      B.topLeftCorner(N, N).noalias() += (dt * nu) * ops.S;
      euler_lu.compute(B);
    }
  }

  // One step from y = (c, a); returns y_{n+1}; fills err_est (difference to
  // the embedded IMEX-Euler solution) when requested.
  VecX step(const VecX& y, double* err_est) const {
    const int N = ops.N;
    const VecX n0 = explicit_load(y.head(N), Vec3(y.tail(3)), ops, inertia);
    const VecX Ey = eb.E * y;

    if (scheme == Scheme::imex1) {
      VecX ynew = stage_lu.solve(Ey + dt * n0);
      if (err_est) *err_est = 0.0;
      return ynew;
    }

    // Stage 2: (E + dt g nu S_ext) y2 = E y + dt g N(y)
    const VecX y2 = stage_lu.solve(Ey + (dt * kGamma) * n0);
    // Stage 3: (E + dt g nu S_ext) y3 =
    //   E y + dt [ delta N(y) + (1-delta) N(y2) - (1-g) nu S_ext y2 ]
    const VecX n2 = explicit_load(y2.head(N), Vec3(y2.tail(3)), ops, inertia);
    VecX rhs3 = Ey + dt * (kDelta * n0 + (1.0 - kDelta) * n2);
    rhs3.head(N).noalias() -= (dt * (1.0 - kGamma) * nu) * (ops.S * y2.head(N));
    VecX y3 = stage_lu.solve(rhs3);

    if (err_est) {
      const VecX y_euler = euler_lu.solve(Ey + dt * n0);
      *err_est = (y3 - y_euler).norm();
    }
    return y3;
  }
};

} // namespace

Trajectory integrate(const State& state0, const AssembledOperators& ops,
                     const EBlocks& eb, const InertiaSpec& inertia, double nu,
                     double horizon, const IntegrateOptions& opts) {
  if (!(horizon > 0.0)) throw std::invalid_argument("integrate: horizon must be > 0");
  const int N = ops.N;
  if (state0.c.size() != N) throw std::invalid_argument("integrate: state size mismatch");

  Trajectory traj;
  double dt = opts.dt > 0.0 ? opts.dt : default_time_step(ops, nu, state0, horizon);
  traj.dt_used = dt;

  ImexStepper stepper(ops, eb, inertia, nu, opts.scheme);
  stepper.refactor(dt, opts.adaptive);

  const double m0 = inertia.apply(state0.a).norm();
  VecX y = pack(state0.c, state0.a);
  double t = state0.t;
  const double t_end = state0.t + horizon;

  // Sampling cadence: aim at max_samples roughly evenly spaced steps.
  const long total_steps_est = static_cast<long>(std::ceil(horizon / dt));
  const long stride = std::max<long>(1, total_steps_est / std::max(1, opts.max_samples));

  auto record = [&](double tt, const VecX& yy) {
    Sample s;
    s.t = tt;
    s.c = yy.head(N);
    s.a = yy.tail(3);
    State st{s.c, s.a, tt};
    s.energy = energy(st, ops, inertia);
    s.dissipation = dissipation(st, ops, nu);
    s.momentum_norm = inertia.apply(s.a).norm();
    s.cnorm_M = std::sqrt(std::max(0.0, s.c.dot(ops.M * s.c)));
    traj.samples.push_back(std::move(s));
  };
  record(t, y);

  const double scale0 = std::max(1.0, y.norm());
  long step_count = 0;
  while (t < t_end - 1e-14 * horizon) {
    double h = std::min(dt, t_end - t);
    if (h != stepper.dt) stepper.refactor(h, opts.adaptive);

    double err = 0.0;
    VecX ynew = stepper.step(y, opts.adaptive ? &err : nullptr);

    if (opts.adaptive) {
      const double tol = opts.rtol * std::max(scale0, y.norm());
      if (err > tol) {
        ++traj.rejected;
        dt = std::max(0.5 * h * std::sqrt(tol / err), 0.1 * h);
        if (dt < 1e-13 * horizon) {
          traj.status = RunStatus::step_underflow;
          break;
        }
        continue;
      }
      if (err < 0.1 * tol && dt == h) {
        const double grow = std::min(2.0, 0.9 * std::sqrt(tol / std::max(err, 1e-300)));
        if (grow > 1.2) dt = h * grow;
      }
    }

    t += h;
    y = std::move(ynew);
    ++step_count;
    ++traj.steps;

    if (opts.project_momentum && m0 > 0.0) {
      const Vec3 m = inertia.apply(Vec3(y.tail(3)));
      const double mn = m.norm();
      if (mn > 0.0) y.tail(3) = inertia.apply_inverse(m * (m0 / mn));
    }

    if (y.head(N).norm() + y.tail(3).norm() > opts.blowup_guard) {
      traj.status = RunStatus::diverged;
      record(t, y);
      return traj;
    }
    if (step_count % stride == 0 || !(t < t_end - 1e-14 * horizon)) record(t, y);
  }
  if (traj.samples.back().t != t) record(t, y);
  return traj;
}

DecayFitResult fit_trailing_decay(const std::vector<std::pair<double, double>>& series) {
  DecayFitResult out;
  if (series.size() < 12) {
    out.error = "too few samples";
    return out;
  }
  size_t peak = 0;
  for (size_t i = 0; i < series.size(); ++i)
    if (series[i].second > series[peak].second) peak = i;
  const double floor = series[peak].second * 1e-11;

  std::vector<std::pair<double, double>> tail;
  for (size_t i = peak; i < series.size(); ++i) {
    if (series[i].second <= floor) break;
    tail.push_back(series[i]);
  }
  if (tail.size() < 12) {
    out.error = "too few samples above the noise floor after the peak";
    return out;
  }
  out.window = 0.6 * (tail.back().first - tail.front().first);
  try {
    out.fit = fit_exponential_rate(tail, out.window);
    out.ok = true;
  } catch (const std::invalid_argument& e) {
    out.error = e.what();
  }
  return out;
}

ExpFit fit_exponential_rate(std::span<const std::pair<double, double>> series,
                            double window) {
  if (series.empty()) throw std::invalid_argument("fit_exponential_rate: empty series");
  const double t_end = series.back().first;
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, v] : series) {
    if (t < t_end - window) continue;
    if (!(v > 0.0))
      throw std::invalid_argument("fit_exponential_rate: non-positive value in window");
    pts.emplace_back(t, std::log(v));
  }
  if (pts.size() < 10)
    throw std::invalid_argument("fit_exponential_rate: fewer than 10 samples in window");

  double tm = 0.0, lm = 0.0;
  for (auto& [t, lv] : pts) {
    tm += t;
    lm += lv;
  }
  tm /= pts.size();
  lm /= pts.size();
  double stt = 0.0, stl = 0.0, sll = 0.0;
  for (auto& [t, lv] : pts) {
    stt += (t - tm) * (t - tm);
    stl += (t - tm) * (lv - lm);
    sll += (lv - lm) * (lv - lm);
  }
  if (!(stt > 0.0)) throw std::invalid_argument("fit_exponential_rate: degenerate series");
  const double slope = stl / stt;
  double ss_res = 0.0;
  for (auto& [t, lv] : pts) {
    const double r = lv - lm - slope * (t - tm);
    ss_res += r * r;
  }
  if (sll <= 1e-24 * pts.size())
    throw std::invalid_argument("fit_exponential_rate: degenerate series");

  ExpFit fit;
  fit.rate = slope;
  fit.n = static_cast<int>(pts.size());
  const int dof = std::max<int>(1, fit.n - 2);
  fit.stderr_rate = std::sqrt(ss_res / dof / stt);
  fit.residual_rms = std::sqrt(ss_res / pts.size());
  return fit;
}

} // namespace fcav
