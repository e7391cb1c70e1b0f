#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "chainprime/errors.hpp"
#include "chainprime/primality.hpp"

namespace chainprime {

/// Position of a search through residue + k * modulus; `next` is the first
/// candidate not yet examined.
struct ProgressionCursor {
  mpz_class residue;
  mpz_class modulus;
  mpz_class next;
  std::uint64_t examined = 0;
};

/// Thrown when the candidate cap runs out; the cursor resumes the search.
class CandidateCapExceeded : public ResourceError {
 public:
  explicit CandidateCapExceeded(ProgressionCursor cursor);
  const ProgressionCursor& cursor() const noexcept { return cursor_; }

 private:
  ProgressionCursor cursor_;
};

inline constexpr std::uint64_t kDefaultCandidateCap = 50'000'000;

/// Smallest prime p > lower_bound with p = residue (mod modulus). Requires
/// gcd(residue, modulus) = 1 and lower_bound >= residue (DomainError).
mpz_class next_prime_in_progression(const mpz_class& residue, const mpz_class& modulus,
                                    const mpz_class& lower_bound, const PrimalityConfig& cfg = {},
                                    std::uint64_t candidate_cap = kDefaultCandidateCap);

/// Continues a search interrupted by CandidateCapExceeded; the cap applies
/// to this call only. Advances the cursor past the returned prime.
mpz_class resume_progression(ProgressionCursor& cursor, const PrimalityConfig& cfg = {},
                             std::uint64_t candidate_cap = kDefaultCandidateCap);

}  // namespace chainprime
