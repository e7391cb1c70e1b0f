#pragma once

// Mirror primes: N-digit primes p in [g^(N-1), g^N) together with the digit
// reversal p* of each. Scans sieve the interval once and look mirrors up in
// the same bitmap; the mirror of an N-digit prime other than g itself is
// again an N-digit integer because its low digit is non-zero.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "chainprime/options.hpp"

namespace chainprime {

struct MirrorScan {
  unsigned base = 0;
  unsigned N = 0;
  std::uint64_t total_primes = 0;  // primes in [g^(N-1), g^N)
  std::uint64_t M = 0;             // of which the mirror is prime
};

/// Throws DomainError unless base >= 2, N >= 1 and g^N <= 2^63. Intervals
/// larger than opts.mem_guard are scanned chunk by chunk.
MirrorScan count_mirror_primes(unsigned base, unsigned N, const RunOptions& opts = {});

/// Reference: trial primality test of every integer and of its mirror.
MirrorScan count_mirror_primes_serial(unsigned base, unsigned N);

inline constexpr std::uint64_t kHistogramLimit = 1'000'000;

struct ResidueCount {
  unsigned base = 0;
  unsigned N = 0;
  std::uint64_t modulus = 0;
  std::uint64_t total_primes = 0;
  std::vector<std::uint64_t> counts;  // counts[a] = #{p : p* = a (mod m)}
  /// max_a counts[a] * N / g^N, the constant the bound R <= C g^N / N needs.
  double trivial_constant = 0;
};

/// Histograms of mirror residues for each modulus (each <= kHistogramLimit,
/// ResourceError otherwise), from one scan of the interval. Every histogram
/// is checked against R <= g^N/m + 1 (InvariantError if violated).
std::vector<ResidueCount> residue_counts(unsigned base, unsigned N,
                                         std::span<const std::uint64_t> moduli,
                                         const RunOptions& opts = {});
ResidueCount residue_counts(unsigned base, unsigned N, std::uint64_t m, const RunOptions& opts = {});

/// Single residue class, no histogram; any m >= 1.
std::uint64_t residue_count(unsigned base, unsigned N, std::uint64_t m, std::uint64_t a,
                            const RunOptions& opts = {});

inline constexpr std::uint64_t kFactorLimit = std::uint64_t{1} << 40;
/// Above this many interval cells the sigma-sum is kept in fixed point only.
inline constexpr std::uint64_t kExactSigmaLimit = std::uint64_t{1} << 24;

struct MirrorStats {
  unsigned base = 0;
  unsigned N = 0;
  bool top_digit_one = false;
  std::uint64_t total_primes = 0;  // primes whose mirrors were factored
  /// sum of sigma(p*)/p*, exact when g^N <= kExactSigmaLimit.
  std::optional<mpq_class> sigma_exact;
  /// The same sum as a 2^-128 fixed-point integer (floor of each term).
  mpz_class sigma_fixed;
  /// Number of distinct primes dividing the product of all mirrors.
  std::uint64_t omega_product = 0;
  /// nu[l] = exponent of the prime l in the product of all mirrors.
  std::map<std::uint64_t, std::uint64_t> nu;

  double sigma_sum() const;
  /// Decimal rendering of the sum with `digits` significant digits.
  std::string sigma_decimal(int digits = 30) const;
};

/// Factors the mirror of every prime in [g^(N-1), g^N), or only of those in
/// [g^(N-1), 2 g^(N-1)) when top_digit_one is set. Requires g^N <= kFactorLimit.
MirrorStats mirror_stats(unsigned base, unsigned N, bool top_digit_one = false,
                         const RunOptions& opts = {});

struct M2Heuristic {
  unsigned N = 0;
  std::uint64_t interval_primes = 0;  // pi(2^N) - pi(2^(N-1))
  std::uint64_t M = 0;                // M_2(N)
  double heuristic = 0;               // 6 (pi(2^N) - pi(2^(N-1)))^2 / 2^N
  double ratio = 0;                   // heuristic / M, 0 when M = 0
};

/// Requires 2 <= N <= 63.
M2Heuristic heuristic_m2(unsigned N, const RunOptions& opts = {});

// Empirical envelope R_g(N, m, a) <= C g^N gcd(g^N, m) / (N sqrt m).

struct EnvelopeRow {
  unsigned N = 0;
  std::uint64_t modulus = 0;
  std::uint64_t max_count = 0;  // max over a of R_g(N, m, a)
  double constant = 0;          // max_count / (g^N gcd(g^N, m) / (N sqrt m))
};

struct EnvelopeFit {
  unsigned base = 0;
  unsigned fit_n_max = 0;
  std::vector<EnvelopeRow> rows;
  double fitted = 0;  // max constant over rows with N <= fit_n_max
  double later = 0;   // max constant over rows with N > fit_n_max
  bool holds(double slack) const noexcept { return later <= fitted * slack; }
};

EnvelopeFit envelope_constant(unsigned base, unsigned n_min, unsigned n_max, unsigned fit_n_max,
                              std::span<const std::uint64_t> moduli, const RunOptions& opts = {});

}  // namespace chainprime
