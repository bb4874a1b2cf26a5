#pragma once

#include <optional>
#include <string>

#include "fcav/assembly.hpp"

namespace fcav {

// Binary operator dump, little-endian throughout:
//   bytes 0..7   magic "FCOPS001"
//   bytes 8..15  u64 header length H
//   bytes 16..   JSON header (H bytes): version, cavity/basis/inertia inputs,
//                and an array table [{name, rows, cols, offset, count}] with
//                offsets relative to the payload start (16 + H)
//   payload      the arrays as raw f64, column-major, back to back in table
//                order (M, S, R, C1, C2, C3, J_fluid, T)
std::string operator_cache_key(const CavitySpec& cavity, int l_max, int n_max,
                               const InertiaSpec& inertia);

void save_operators(const std::string& path, const AssembledOperators& ops,
                    const CavitySpec& cavity, const InertiaSpec& inertia);

// Empty when the file is missing; throws NumericalError on a corrupt file or
// format mismatch.
std::optional<AssembledOperators> load_operators(const std::string& path);

// assemble_all with a transparent per-directory cache keyed by the content
// hash of (cavity, basis truncation, inertia).
AssembledOperators assemble_cached(const std::string& cache_dir,
                                   const GalerkinBasis& basis, const CavitySpec& cavity,
                                   const InertiaSpec& inertia);

} // namespace fcav
