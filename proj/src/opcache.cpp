#include "fcav/opcache.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fcav/io.hpp"
#include "fcav/version.hpp"

static_assert(std::endian::native == std::endian::little,
              "operator cache format is little-endian");

namespace fcav {

namespace {

constexpr char kMagic[8] = {'F', 'C', 'O', 'P', 'S', '0', '0', '1'};

struct ArrayRef {
  std::string name;
  const double* data;
  size_t rows, cols;
};

} // namespace

std::string operator_cache_key(const CavitySpec& cavity, int l_max, int n_max,
                               const InertiaSpec& inertia) {
  std::string s = "radius=" + fmt_double(cavity.radius) +
                  ";viscosity=" + fmt_double(cavity.viscosity) +
                  ";l_max=" + std::to_string(l_max) + ";n_max=" + std::to_string(n_max) +
                  ";lambda=" + fmt_double(inertia.lambda[0]) + "," +
                  fmt_double(inertia.lambda[1]) + "," + fmt_double(inertia.lambda[2]);
  return hex64(fnv1a64(s));
}

void save_operators(const std::string& path, const AssembledOperators& ops,
                    const CavitySpec& cavity, const InertiaSpec& inertia) {
  const int N = ops.N;
  const std::vector<ArrayRef> arrays = {
      {"M", ops.M.data(), static_cast<size_t>(N), static_cast<size_t>(N)},
      {"S", ops.S.data(), static_cast<size_t>(N), static_cast<size_t>(N)},
      {"R", ops.Rmom.data(), 3, static_cast<size_t>(N)},
      {"C1", ops.C[0].data(), static_cast<size_t>(N), static_cast<size_t>(N)},
      {"C2", ops.C[1].data(), static_cast<size_t>(N), static_cast<size_t>(N)},
      {"C3", ops.C[2].data(), static_cast<size_t>(N), static_cast<size_t>(N)},
      {"J_fluid", ops.J_fluid.data(), 3, 3},
      {"T", ops.T.data(), static_cast<size_t>(N) * N, static_cast<size_t>(N)},
  };

  nlohmann::ordered_json hdr;
  hdr["format"] = "fcav-operators";
  hdr["version"] = kVersion;
  hdr["N"] = N;
  hdr["l_max"] = ops.l_max;
  hdr["n_max"] = ops.n_max;
  hdr["radius"] = cavity.radius;
  hdr["lambda"] = {inertia.lambda[0], inertia.lambda[1], inertia.lambda[2]};
  size_t offset = 0;
  for (const auto& a : arrays) {
    hdr["arrays"].push_back({{"name", a.name},
                             {"rows", a.rows},
                             {"cols", a.cols},
                             {"offset", offset},
                             {"count", a.rows * a.cols}});
    offset += a.rows * a.cols * sizeof(double);
  }
  const std::string header = hdr.dump();

  std::string blob;
  blob.reserve(16 + header.size() + offset);
  blob.append(kMagic, 8);
  const std::uint64_t hlen = header.size();
  blob.append(reinterpret_cast<const char*>(&hlen), 8);
  blob.append(header);
  for (const auto& a : arrays)
    blob.append(reinterpret_cast<const char*>(a.data), a.rows * a.cols * sizeof(double));
  atomic_write(path, blob);
}

std::optional<AssembledOperators> load_operators(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  char magic[8];
  std::uint64_t hlen = 0;
  f.read(magic, 8);
  f.read(reinterpret_cast<char*>(&hlen), 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0)
    throw NumericalError("operator cache: bad magic in " + path);
  std::string header(hlen, '\0');
  f.read(header.data(), static_cast<std::streamsize>(hlen));
  if (!f) throw NumericalError("operator cache: truncated header in " + path);

  nlohmann::json hdr;
  try {
    hdr = nlohmann::json::parse(header);
  } catch (const std::exception& e) {
    throw NumericalError("operator cache: bad header in " + path + ": " + e.what());
  }
  if (hdr.value("format", "") != "fcav-operators")
    throw NumericalError("operator cache: wrong format in " + path);

  AssembledOperators ops;
  ops.N = hdr.at("N").get<int>();
  ops.l_max = hdr.at("l_max").get<int>();
  ops.n_max = hdr.at("n_max").get<int>();
  ops.radius = hdr.at("radius").get<double>();
  const int N = ops.N;

  auto read_into = [&](double* dst, size_t count) {
    f.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count * 8));
    if (!f) throw NumericalError("operator cache: truncated payload in " + path);
  };
  ops.M.resize(N, N);
  ops.S.resize(N, N);
  ops.Rmom.resize(3, N);
  for (auto& c : ops.C) c.resize(N, N);
  ops.T.resize(static_cast<size_t>(N) * N * N);
  for (const auto& a : hdr.at("arrays")) {
    const std::string name = a.at("name").get<std::string>();
    const size_t count = a.at("count").get<size_t>();
    if (name == "M") read_into(ops.M.data(), count);
    else if (name == "S") read_into(ops.S.data(), count);
    else if (name == "R") read_into(ops.Rmom.data(), count);
    else if (name == "C1") read_into(ops.C[0].data(), count);
    else if (name == "C2") read_into(ops.C[1].data(), count);
    else if (name == "C3") read_into(ops.C[2].data(), count);
    else if (name == "J_fluid") read_into(ops.J_fluid.data(), count);
    else if (name == "T") read_into(ops.T.data(), count);
    else throw NumericalError("operator cache: unknown array '" + name + "' in " + path);
  }
  return ops;
}

AssembledOperators assemble_cached(const std::string& cache_dir,
                                   const GalerkinBasis& basis, const CavitySpec& cavity,
                                   const InertiaSpec& inertia) {
  namespace fs = std::filesystem;
  const std::string key = operator_cache_key(cavity, basis.l_max, basis.n_max, inertia);
  const fs::path path = fs::path(cache_dir) / (key + ".fcops");
  if (auto ops = load_operators(path.string())) {
    verify_operator_invariants(*ops, inertia);
    return std::move(*ops);
  }
  AssembledOperators ops = assemble_all(basis, cavity, inertia);
  fs::create_directories(cache_dir);
  save_operators(path.string(), ops, cavity, inertia);
  return ops;
}

} // namespace fcav
