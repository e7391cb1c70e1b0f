#include "chainprime/sieve.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include <omp.h>

#include "chainprime/errors.hpp"

namespace chainprime {

namespace {

// Segment length in integers; a multiple of 64 so segments own whole words.
constexpr std::uint64_t kSegment = std::uint64_t{1} << 18;

void check_interval(std::uint64_t lo, std::uint64_t hi, const RunOptions& opts) {
  if (lo >= hi) throw DomainError("sieve_interval: empty interval");
  if (hi > (std::uint64_t{1} << 63)) throw DomainError("sieve_interval: hi must not exceed 2^63");
  if (hi - lo > opts.mem_guard)
    throw ResourceError("sieve_interval: " + std::to_string(hi - lo) +
                        " cells exceed the memory guard of " + std::to_string(opts.mem_guard) +
                        "; scan the interval in chunks");
}

std::uint64_t first_multiple(std::uint64_t p, std::uint64_t a) {
  std::uint64_t start = p * p;
  if (start < a) start = (a + p - 1) / p * p;
  return start;
}

}  // namespace

PrimeBitmap::PrimeBitmap(std::uint64_t lo, std::uint64_t hi)
    : lo_(lo), hi_(hi), words_((hi - lo + 63) / 64, 0) {}

std::uint64_t PrimeBitmap::count() const noexcept {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::uint64_t PrimeBitmap::count(std::uint64_t a, std::uint64_t b) const noexcept {
  std::uint64_t total = 0;
  for_each_prime(a, b, [&](std::uint64_t) { ++total; });
  return total;
}

std::uint64_t isqrt(std::uint64_t n) noexcept {
  constexpr std::uint64_t kMax = 0xffffffffu;
  std::uint64_t r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
  if (r > kMax) r = kMax;
  while (r * r > n) --r;
  while (r < kMax && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

PrimeBitmap sieve_interval(std::uint64_t lo, std::uint64_t hi, const RunOptions& opts) {
  check_interval(lo, hi, opts);
  PrimeBitmap bitmap(lo, hi);
  const auto base = small_primes(static_cast<std::uint32_t>(isqrt(hi - 1)));
  auto& words = bitmap.words();
  const std::int64_t segments = static_cast<std::int64_t>((hi - lo + kSegment - 1) / kSegment);

#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.workers)
  for (std::int64_t s = 0; s < segments; ++s) {
    const std::uint64_t a = lo + static_cast<std::uint64_t>(s) * kSegment;
    const std::uint64_t b = std::min(hi, a + kSegment);
    const std::uint64_t w0 = (a - lo) / 64;
    const std::uint64_t w1 = (b - lo + 63) / 64;
    std::fill(words.begin() + static_cast<std::ptrdiff_t>(w0),
              words.begin() + static_cast<std::ptrdiff_t>(w1), ~std::uint64_t{0});
    for (std::uint64_t v = a; v < std::min<std::uint64_t>(b, 2); ++v) {
      std::uint64_t k = v - lo;
      words[k / 64] &= ~(std::uint64_t{1} << (k % 64));
    }
    for (std::uint32_t p32 : base) {
      const std::uint64_t p = p32;
      if (p * p >= b) break;
      for (std::uint64_t m = first_multiple(p, a); m < b; m += p) {
        std::uint64_t k = m - lo;
        words[k / 64] &= ~(std::uint64_t{1} << (k % 64));
      }
    }
    // Bits past hi in the final word stay clear.
    if (b == hi && (hi - lo) % 64) words[w1 - 1] &= (std::uint64_t{1} << ((hi - lo) % 64)) - 1;
  }
  return bitmap;
}

PrimeBitmap sieve_interval_serial(std::uint64_t lo, std::uint64_t hi, const RunOptions& opts) {
  check_interval(lo, hi, opts);
  std::vector<bool> composite(hi - lo, false);
  for (std::uint64_t v = lo; v < std::min<std::uint64_t>(hi, 2); ++v) composite[v - lo] = true;
  for (std::uint64_t p = 2; p * p < hi; ++p) {
    for (std::uint64_t m = first_multiple(p, lo); m < hi; m += p) composite[m - lo] = true;
  }
  PrimeBitmap bitmap(lo, hi);
  auto& words = bitmap.words();
  for (std::uint64_t k = 0; k < hi - lo; ++k)
    if (!composite[k]) words[k / 64] |= std::uint64_t{1} << (k % 64);
  return bitmap;
}

std::uint64_t count_primes(std::uint64_t lo, std::uint64_t hi, const RunOptions& opts) {
  if (lo >= hi) return 0;
  const std::uint64_t chunk = std::max<std::uint64_t>(64, opts.mem_guard / 64 * 64);
  std::uint64_t total = 0;
  for (std::uint64_t a = lo; a < hi;) {
    std::uint64_t b = (hi - a > chunk) ? a + chunk : hi;
    total += sieve_interval(a, b, opts).count();
    a = b;
  }
  return total;
}

}  // namespace chainprime
