#include "chainprime/options.hpp"

#include <cstdlib>
#include <string>

namespace chainprime {

std::uint64_t default_mem_guard() {
  if (const char* env = std::getenv("CHAINPRIME_MEM_GUARD")) {
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(env, &used, 0);
      if (used == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return kDefaultMemGuard;
}

}  // namespace chainprime
