#include "chainprime/factor.hpp"

#include <algorithm>
#include <numeric>

#include "chainprime/detail/montgomery.hpp"
#include "chainprime/errors.hpp"
#include "chainprime/primality.hpp"
#include "chainprime/sieve.hpp"

namespace chainprime {

namespace {

using detail::u64;

constexpr u64 kTrialLimit = 1000;

// Pollard-Brent with batched gcds; returns a non-trivial factor of the odd
// composite n, or n itself if this constant c fails.
u64 brent(u64 n, u64 c) {
  detail::Mont64 f(n);
  const auto cm = f.to(c);
  auto step = [&](u64 x) { return f.add(f.sqr(x), cm); };
  u64 y = f.to(2), x = y, q = f.one(), ys = y;
  u64 g = 1;
  constexpr u64 kBatch = 128;
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = step(y);
    for (u64 k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
        y = step(y);
        q = f.mul(q, x > y ? x - y : y - x);
      }
      g = std::gcd(q, n);
    }
  }
  if (g == n) {
    // Batch overshot; replay one step at a time from the saved point.
    do {
      ys = step(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void split(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 r = isqrt(n);
  if (r * r == n) {
    split(r, out);
    split(r, out);
    return;
  }
  for (u64 c = 1;; ++c) {
    u64 d = brent(n, c);
    if (d != n) {
      split(d, out);
      split(n / d, out);
      return;
    }
  }
}

}  // namespace

std::vector<PrimePower> factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  std::vector<u64> primes;
  for (u64 p = 2; p <= kTrialLimit && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) {
    if (n < kTrialLimit * kTrialLimit)
      primes.push_back(n);
    else
      split(n, primes);
  }
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().prime == p)
      ++out.back().exponent;
    else
      out.push_back({p, 1});
  }
  return out;
}

std::uint64_t sigma(const std::vector<PrimePower>& factors) {
  u64 total = 1;
  for (const auto& [p, e] : factors) {
    // 1 + p + ... + p^e
    u64 term = 1, power = 1;
    for (unsigned i = 0; i < e; ++i) {
      if (__builtin_mul_overflow(power, p, &power) || __builtin_add_overflow(term, power, &term))
        throw DomainError("sigma: overflow");
    }
    if (__builtin_mul_overflow(total, term, &total)) throw DomainError("sigma: overflow");
  }
  return total;
}

std::uint64_t euler_phi(std::uint64_t n) {
  u64 phi = n;
  for (const auto& pp : factorize(n)) phi = phi / pp.prime * (pp.prime - 1);
  return phi;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<u64> out;
  for (const auto& pp : factorize(n)) out.push_back(pp.prime);
  return out;
}

}  // namespace chainprime
