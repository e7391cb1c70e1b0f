#pragma once

#include <cstdint>
#include <vector>

namespace chainprime {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of n >= 1, ascending by prime (empty for n = 1).
/// Trial division by small primes, then Pollard-Brent rho on the cofactor.
std::vector<PrimePower> factorize(std::uint64_t n);

/// Sum of divisors from a factorization; DomainError if it overflows 64 bits.
std::uint64_t sigma(const std::vector<PrimePower>& factors);

std::uint64_t euler_phi(std::uint64_t n);

/// Distinct prime divisors of n.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

}  // namespace chainprime
