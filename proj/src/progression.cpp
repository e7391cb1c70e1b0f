#include "chainprime/progression.hpp"

#include <vector>

#include "chainprime/sieve.hpp"

namespace chainprime {

CandidateCapExceeded::CandidateCapExceeded(ProgressionCursor cursor)
    : ResourceError("candidate cap exceeded after " + std::to_string(cursor.examined) +
                    " candidates; resume from " + cursor.next.get_str()),
      cursor_(std::move(cursor)) {}

mpz_class next_prime_in_progression(const mpz_class& residue, const mpz_class& modulus,
                                    const mpz_class& lower_bound, const PrimalityConfig& cfg,
                                    std::uint64_t candidate_cap) {
  if (modulus < 1) throw DomainError("next_prime_in_progression: modulus must be positive");
  if (residue < 0) throw DomainError("next_prime_in_progression: residue must be non-negative");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), residue.get_mpz_t(), modulus.get_mpz_t());
  if (g != 1) throw DomainError("next_prime_in_progression: gcd(residue, modulus) = " + g.get_str());
  if (lower_bound < residue)
    throw DomainError("next_prime_in_progression: lower bound below the residue");

  ProgressionCursor cursor;
  cursor.residue = residue;
  cursor.modulus = modulus;
  mpz_class steps = (lower_bound - residue) / modulus + 1;
  cursor.next = residue + steps * modulus;
  return resume_progression(cursor, cfg, candidate_cap);
}

mpz_class resume_progression(ProgressionCursor& cursor, const PrimalityConfig& cfg,
                             std::uint64_t candidate_cap) {
  static const std::vector<std::uint32_t> primes = small_primes(2000);
  // Residues of the current candidate and the step modulo each small prime.
  std::vector<std::uint32_t> rc(primes.size()), rm(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    rc[i] = static_cast<std::uint32_t>(mpz_fdiv_ui(cursor.next.get_mpz_t(), primes[i]));
    rm[i] = static_cast<std::uint32_t>(mpz_fdiv_ui(cursor.modulus.get_mpz_t(), primes[i]));
  }
  const bool small_candidates = cursor.next <= primes.back();

  for (std::uint64_t tried = 0; tried < candidate_cap; ++tried) {
    bool sieved_out = false;
    if (!small_candidates) {
      for (std::size_t i = 0; i < primes.size(); ++i) {
        if (rc[i] == 0) {
          sieved_out = true;
          break;
        }
      }
    }
    mpz_class candidate = cursor.next;
    cursor.next += cursor.modulus;
    ++cursor.examined;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      rc[i] += rm[i];
      if (rc[i] >= primes[i]) rc[i] -= primes[i];
    }
    if (!sieved_out && is_prime(candidate, cfg)) return candidate;
  }
  throw CandidateCapExceeded(cursor);
}

}  // namespace chainprime
