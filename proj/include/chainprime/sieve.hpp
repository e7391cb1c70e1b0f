#pragma once

#include <cstdint>
#include <vector>

#include "chainprime/options.hpp"

namespace chainprime {

/// Primality table for the half-open interval [lo, hi); bit k <=> lo + k prime.
class PrimeBitmap {
 public:
  PrimeBitmap() = default;
  PrimeBitmap(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  std::uint64_t size() const noexcept { return hi_ - lo_; }

  bool contains(std::uint64_t v) const noexcept { return v >= lo_ && v < hi_; }
  /// v must lie in [lo, hi).
  bool test(std::uint64_t v) const noexcept {
    std::uint64_t k = v - lo_;
    return (words_[k / 64] >> (k % 64)) & 1;
  }
  std::uint64_t count() const noexcept;
  /// Primes in [a, b) intersected with the interval.
  std::uint64_t count(std::uint64_t a, std::uint64_t b) const noexcept;

  /// Calls fn(p) for every prime in [a, b) ∩ [lo, hi), ascending.
  template <class Fn>
  void for_each_prime(std::uint64_t a, std::uint64_t b, Fn&& fn) const {
    if (a < lo_) a = lo_;
    if (b > hi_) b = hi_;
    if (a >= b) return;
    std::uint64_t k0 = a - lo_, k1 = b - lo_;
    for (std::uint64_t w = k0 / 64; w * 64 < k1; ++w) {
      std::uint64_t bits = words_[w];
      if (w == k0 / 64) bits &= ~std::uint64_t{0} << (k0 % 64);
      if ((w + 1) * 64 > k1 && k1 % 64) bits &= (std::uint64_t{1} << (k1 % 64)) - 1;
      while (bits) {
        unsigned t = static_cast<unsigned>(__builtin_ctzll(bits));
        fn(lo_ + w * 64 + t);
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::uint64_t>& words() noexcept { return words_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const PrimeBitmap&, const PrimeBitmap&) = default;

 private:
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Primes p <= limit by a plain sieve of Eratosthenes.
std::vector<std::uint32_t> small_primes(std::uint32_t limit);

/// Segmented sieve over [lo, hi), segments processed in parallel.
/// Throws DomainError if lo >= hi and ResourceError if hi - lo exceeds
/// opts.mem_guard (scan in chunks instead).
PrimeBitmap sieve_interval(std::uint64_t lo, std::uint64_t hi, const RunOptions& opts = {});

/// Single-pass, single-threaded reference for sieve_interval.
PrimeBitmap sieve_interval_serial(std::uint64_t lo, std::uint64_t hi, const RunOptions& opts = {});

/// pi(hi - 1) - pi(lo - 1), sieved in guard-sized chunks.
std::uint64_t count_primes(std::uint64_t lo, std::uint64_t hi, const RunOptions& opts = {});

std::uint64_t isqrt(std::uint64_t n) noexcept;

}  // namespace chainprime
