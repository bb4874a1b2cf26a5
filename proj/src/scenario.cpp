#include "fcav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>

namespace fcav {

namespace {

std::vector<double> parse_doubles(const std::string& v, const std::string& key) {
  std::istringstream is(v);
  std::vector<double> out;
  double x;
  while (is >> x) out.push_back(x);
  std::string rest;
  if (is.bad() || (is.clear(), is >> rest && !rest.empty()))
    throw ConfigError("config: malformed numeric list for '" + key + "'");
  if (out.empty()) throw ConfigError("config: empty value for '" + key + "'");
  return out;
}

double parse_one(const std::string& v, const std::string& key) {
  auto xs = parse_doubles(v, key);
  if (xs.size() != 1) throw ConfigError("config: expected one number for '" + key + "'");
  return xs[0];
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("config: expected boolean for '" + key + "', got '" + v + "'");
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw ConfigError("config: expected unsigned integer for '" + key + "'");
  }
}

Scenario::AxisSel parse_axis(const std::string& v, const std::string& key) {
  if (v == "min" || v == "1") return Scenario::AxisSel::min;
  if (v == "mid" || v == "2") return Scenario::AxisSel::mid;
  if (v == "max" || v == "3") return Scenario::AxisSel::max;
  throw ConfigError("config: '" + key + "' must be one of min|mid|max|1|2|3");
}

} // namespace

const char* to_string(Scenario::AxisSel a) {
  switch (a) {
    case Scenario::AxisSel::min: return "min";
    case Scenario::AxisSel::mid: return "mid";
    default: return "max";
  }
}

Scenario parse_scenario_text(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
    val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");

    if (key == "cavity.radius") sc.cavity.radius = parse_one(val, key);
    else if (key == "cavity.viscosity") sc.cavity.viscosity = parse_one(val, key);
    else if (key == "inertia.diag") {
      auto xs = parse_doubles(val, key);
      if (xs.size() != 3) throw ConfigError("config: inertia.diag needs 3 numbers");
      sc.inertia_diag = Vec3(xs[0], xs[1], xs[2]);
    } else if (key == "inertia.matrix") {
      auto xs = parse_doubles(val, key);
      if (xs.size() != 9) throw ConfigError("config: inertia.matrix needs 9 numbers");
      Mat3 m;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = xs[3 * r + c];
      sc.inertia_matrix = m;
    } else if (key == "basis.l_max") sc.l_max = static_cast<int>(parse_one(val, key));
    else if (key == "basis.n_max") sc.n_max = static_cast<int>(parse_one(val, key));
    else if (key == "ic.kind") {
      if (val == "equilibrium") sc.ic_kind = Scenario::IcKind::equilibrium;
      else if (val == "explicit") sc.ic_kind = Scenario::IcKind::explicit_state;
      else throw ConfigError("config: ic.kind must be equilibrium|explicit");
    } else if (key == "ic.axis") sc.ic_axis = parse_axis(val, key);
    else if (key == "ic.momentum") sc.ic_momentum = parse_one(val, key);
    else if (key == "ic.amplitude") sc.ic_amplitude = parse_one(val, key);
    else if (key == "ic.seed") sc.ic_seed = parse_u64(val, key);
    else if (key == "ic.c0") sc.ic_c0 = parse_doubles(val, key);
    else if (key == "ic.a0") {
      auto xs = parse_doubles(val, key);
      if (xs.size() != 3) throw ConfigError("config: ic.a0 needs 3 numbers");
      sc.ic_a0 = Vec3(xs[0], xs[1], xs[2]);
    } else if (key == "run.horizon") sc.horizon = parse_one(val, key);
    else if (key == "run.scheme") {
      if (val == "imex2") sc.scheme = Scheme::imex2;
      else if (val == "imex1") sc.scheme = Scheme::imex1;
      else throw ConfigError("config: run.scheme must be imex1|imex2");
    } else if (key == "run.dt") sc.dt = parse_one(val, key);
    else if (key == "run.rtol") sc.rtol = parse_one(val, key);
    else if (key == "run.adaptive") sc.adaptive = parse_bool(val, key);
    else if (key == "run.project_momentum") sc.project_momentum = parse_bool(val, key);
    else if (key == "run.max_samples") sc.max_samples = static_cast<int>(parse_one(val, key));
    else if (key == "spectrum.axis") sc.spectrum_axis = parse_axis(val, key);
    else if (key == "sweep.kind") {
      if (val == "mu") sc.sweep_kind = Scenario::SweepKind::mu;
      else if (val == "hessian_panel") sc.sweep_kind = Scenario::SweepKind::hessian_panel;
      else if (val == "refinement") sc.sweep_kind = Scenario::SweepKind::refinement;
      else throw ConfigError("config: sweep.kind must be mu|hessian_panel|refinement");
    } else if (key == "sweep.mu1") sc.sweep_mu1 = parse_one(val, key);
    else if (key == "sweep.mu3") sc.sweep_mu3 = parse_one(val, key);
    else if (key == "sweep.mu_min") sc.sweep_mu_min = parse_one(val, key);
    else if (key == "sweep.mu_max") sc.sweep_mu_max = parse_one(val, key);
    else if (key == "sweep.steps") sc.sweep_steps = static_cast<int>(parse_one(val, key));
    else if (key == "sweep.count") sc.sweep_count = static_cast<int>(parse_one(val, key));
    else if (key == "sweep.seed") sc.sweep_seed = parse_u64(val, key);
    else if (key == "output.trajectory") sc.out_trajectory = parse_bool(val, key);
    else if (key == "output.summary") sc.out_summary = parse_bool(val, key);
    else if (key == "output.eigen_csv") sc.out_eigen_csv = parse_bool(val, key);
    else if (key == "output.modal") sc.out_modal = parse_bool(val, key);
    else if (key == "output.spectrum") sc.out_spectrum = parse_bool(val, key);
    else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                           key + "'");
  }
  sc.cavity.validate();
  if (sc.inertia_diag && sc.inertia_matrix)
    throw ConfigError("config: give inertia.diag or inertia.matrix, not both");
  if (!sc.inertia_diag && !sc.inertia_matrix)
    throw ConfigError("config: inertia.diag or inertia.matrix is required");
  if (sc.l_max < 1) throw ConfigError("config: basis.l_max must be >= 1");
  if (sc.n_max < 0) throw ConfigError("config: basis.n_max must be >= 0");
  if (!(sc.horizon > 0.0)) throw ConfigError("config: run.horizon must be > 0");
  if (sc.ic_momentum < 0.0) throw ConfigError("config: ic.momentum must be >= 0");
  if (sc.ic_amplitude < 0.0) throw ConfigError("config: ic.amplitude must be >= 0");
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario_text(ss.str());
}

InertiaSpec Scenario::inertia() const {
  InertiaSpec spec = inertia_matrix ? InertiaSpec::from_matrix(*inertia_matrix)
                                    : InertiaSpec::from_diagonal(*inertia_diag);
  spec.require_admissible(cavity);
  return spec;
}

IntegrateOptions Scenario::integrate_options() const {
  IntegrateOptions o;
  o.scheme = scheme;
  o.dt = dt;
  o.rtol = rtol;
  o.adaptive = adaptive;
  o.project_momentum = project_momentum;
  o.max_samples = max_samples;
  return o;
}

std::string Scenario::canonical_serialization() const {
  std::map<std::string, std::string> kv;
  kv["cavity.radius"] = fmt_double(cavity.radius);
  kv["cavity.viscosity"] = fmt_double(cavity.viscosity);
  if (inertia_diag) {
    kv["inertia.diag"] = fmt_double((*inertia_diag)[0]) + " " +
                         fmt_double((*inertia_diag)[1]) + " " +
                         fmt_double((*inertia_diag)[2]);
  }
  if (inertia_matrix) {
    std::string s;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        s += (s.empty() ? "" : " ") + fmt_double((*inertia_matrix)(r, c));
    kv["inertia.matrix"] = s;
  }
  kv["basis.l_max"] = std::to_string(l_max);
  kv["basis.n_max"] = std::to_string(n_max);
  kv["ic.kind"] = ic_kind == IcKind::equilibrium ? "equilibrium" : "explicit";
  kv["ic.axis"] = to_string(ic_axis);
  kv["ic.momentum"] = fmt_double(ic_momentum);
  kv["ic.amplitude"] = fmt_double(ic_amplitude);
  kv["ic.seed"] = std::to_string(ic_seed);
  if (!ic_c0.empty()) {
    std::string s;
    for (double v : ic_c0) s += (s.empty() ? "" : " ") + fmt_double(v);
    kv["ic.c0"] = s;
  }
  if (ic_kind == IcKind::explicit_state)
    kv["ic.a0"] = fmt_double(ic_a0[0]) + " " + fmt_double(ic_a0[1]) + " " +
                  fmt_double(ic_a0[2]);
  kv["run.horizon"] = fmt_double(horizon);
  kv["run.scheme"] = scheme == Scheme::imex2 ? "imex2" : "imex1";
  kv["run.dt"] = fmt_double(dt);
  kv["run.rtol"] = fmt_double(rtol);
  kv["run.adaptive"] = adaptive ? "true" : "false";
  kv["run.project_momentum"] = project_momentum ? "true" : "false";
  kv["run.max_samples"] = std::to_string(max_samples);
  kv["spectrum.axis"] = to_string(spectrum_axis);
  kv["sweep.kind"] = sweep_kind == SweepKind::mu ? "mu"
                     : sweep_kind == SweepKind::hessian_panel ? "hessian_panel"
                                                              : "refinement";
  kv["sweep.mu1"] = fmt_double(sweep_mu1);
  kv["sweep.mu3"] = fmt_double(sweep_mu3);
  kv["sweep.mu_min"] = fmt_double(sweep_mu_min);
  kv["sweep.mu_max"] = fmt_double(sweep_mu_max);
  kv["sweep.steps"] = std::to_string(sweep_steps);
  kv["sweep.count"] = std::to_string(sweep_count);
  kv["sweep.seed"] = std::to_string(sweep_seed);
  kv["output.trajectory"] = out_trajectory ? "true" : "false";
  kv["output.summary"] = out_summary ? "true" : "false";
  kv["output.eigen_csv"] = out_eigen_csv ? "true" : "false";
  kv["output.modal"] = out_modal ? "true" : "false";
  kv["output.spectrum"] = out_spectrum ? "true" : "false";

  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t Scenario::hash() const { return fnv1a64(canonical_serialization()); }

Vec3 equilibrium_for_axis(const InertiaSpec& inertia, Scenario::AxisSel axis,
                          double momentum) {
  const int ax = axis == Scenario::AxisSel::min ? 0 : axis == Scenario::AxisSel::mid ? 1 : 2;
  Vec3 a = Vec3::Zero();
  if (momentum == 0.0) return a;
  a[ax] = momentum / inertia.lambda[ax];
  return a;
}

VecX sample_perturbation(const AssembledOperators& ops, double amplitude,
                         std::uint64_t seed) {
  const int N = ops.N;
  if (amplitude == 0.0) return VecX::Zero(N);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VecX g(N);
  for (int i = 0; i < N; ++i) g[i] = gauss(rng);
  // c = L^-T g has c' M c = g' g for M = L L'; rescale to the target M-norm.
  Eigen::LLT<MatX> llt(ops.M);
  if (llt.info() != Eigen::Success)
    throw NumericalError("sample_perturbation: mass matrix Cholesky failed");
  VecX c = llt.matrixU().solve(g);
  const double norm = std::sqrt(c.dot(ops.M * c));
  return c * (amplitude / norm);
}

State make_initial_state(const Scenario& sc, const AssembledOperators& ops,
                         const InertiaSpec& inertia) {
  State s;
  s.t = 0.0;
  if (sc.ic_kind == Scenario::IcKind::explicit_state) {
    if (static_cast<int>(sc.ic_c0.size()) != ops.N)
      throw ConfigError("config: ic.c0 has " + std::to_string(sc.ic_c0.size()) +
                        " entries, basis has N = " + std::to_string(ops.N));
    s.c = Eigen::Map<const VecX>(sc.ic_c0.data(), ops.N);
    s.a = inertia.to_comp(sc.ic_a0);
    return s;
  }
  s.a = equilibrium_for_axis(inertia, sc.ic_axis, sc.ic_momentum);
  s.c = sample_perturbation(ops, sc.ic_amplitude, sc.ic_seed);
  return s;
}

} // namespace fcav
