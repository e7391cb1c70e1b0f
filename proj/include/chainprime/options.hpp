#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "chainprime/primality.hpp"

namespace chainprime {

inline constexpr std::uint64_t kDefaultMemGuard = std::uint64_t{1} << 31;

/// Execution parameters shared by the scanning kernels. Results never
/// depend on `workers`; it only sets the OpenMP team size.
struct RunOptions {
  unsigned workers = 1;
  /// Interval cells for sieves, bytes of limb storage for chain frontiers.
  std::uint64_t mem_guard = kDefaultMemGuard;
  PrimalityConfig primality;
  /// Optional progress sink (one line per completed unit of work).
  std::function<void(const std::string&)> progress;
};

/// kDefaultMemGuard unless CHAINPRIME_MEM_GUARD holds a positive integer.
std::uint64_t default_mem_guard();

}  // namespace chainprime
