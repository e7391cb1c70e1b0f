#pragma once

#include <cstdint>
#include <span>

#include <gmpxx.h>

namespace chainprime {

/// Controls the probabilistic regime above 2^64. Verdicts are a pure
/// function of (value, config): extra round bases are drawn from a stream
/// seeded by rng_seed mixed with the value itself.
struct PrimalityConfig {
  unsigned extra_rounds = 0;
  std::uint64_t rng_seed = 0x5eed;
};

/// Exact for every 64-bit input (strong tests to a fixed base set).
bool is_prime(std::uint64_t v) noexcept;

/// Exact below 2^64. Above: strong base-2 test plus strong Lucas test
/// (BPSW), then cfg.extra_rounds seeded strong tests. A prime is never
/// reported composite.
bool is_prime(const mpz_class& v, const PrimalityConfig& cfg = {});

/// Same verdict as is_prime for the value held in little-endian limbs
/// (top limb may be zero).
bool is_prime(std::span<const std::uint64_t> limbs, const PrimalityConfig& cfg = {});

namespace detail {
/// BPSW (+ extra rounds) on an odd normalized multi-limb value with no
/// small-prime precheck; callers sieve beforehand. Size 1 falls back to
/// the 64-bit deterministic test.
bool probable_prime_limbs(std::span<const std::uint64_t> limbs, const PrimalityConfig& cfg);
}  // namespace detail

}  // namespace chainprime
