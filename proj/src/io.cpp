#include "fcav/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "fcav/version.hpp"

namespace fcav {

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp." +
                        std::to_string(static_cast<unsigned>(::getpid())));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string file_header(std::uint64_t scenario_hash, const std::string& extra) {
  std::string h;
  h += "# fcav " + std::string(kVersion) + "\n";
  h += "# scenario_hash: " + hex64(scenario_hash) + "\n";
  h += "# conventions: spectra are of the semigroup generator -L*; "
       "E = 0.5*(c'(M - R'I^-1R)c + a'Ia); ||c||_M = sqrt(c'Mc); "
       "axes sorted so lambda1 <= lambda2 <= lambda3\n";
  if (!extra.empty()) h += "# " + extra + "\n";
  return h;
}

} // namespace fcav
