#pragma once

#include <string>

#include "fcav/util.hpp"

namespace fcav {

// Write via a temporary file in the same directory plus rename, so partially
// written outputs are never observed by concurrent sweep readers.
void atomic_write(const std::string& path, const std::string& content);

// Comment header stamped on every emitted file: tool version, scenario hash,
// and the convention notes the numbers depend on.
std::string file_header(std::uint64_t scenario_hash, const std::string& extra = "");

} // namespace fcav
