#pragma once

// Constants bounding the growth of prime digit-chains and the heuristic
// approximation of the non-zero-digit counts.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chainprime/chains.hpp"

namespace chainprime {

inline constexpr std::uint64_t kPhiWindowLimit = 1'000'000'000;

/// max over h of #{1 <= u <= U : gcd(u + h, q) = 1}. q <= kPhiWindowLimit.
std::uint64_t phi_qU(std::uint64_t q, std::uint64_t U);

/// phi(q, U) <= (phi(q)/q)(U - 1) + 2^s, s = number of prime divisors of q.
bool erat_bound_check(std::uint64_t q, std::uint64_t U);

struct GammaResult {
  double value = 0;
  unsigned m_star = 0;        // minimizing m
  unsigned search_limit = 0;  // m ranged over 1..search_limit
};

/// g min_m (2g / (m phi(g) log g))^(1/m). Stated for g >= 3; g = 2 is
/// evaluated by the same formula.
GammaResult gamma_g(unsigned g);
/// The bracketed expression for a single m (the m-th root included).
double gamma_term(unsigned g, unsigned m);

struct ThetaWitness {
  unsigned s = 0;
  std::uint64_t q = 0;  // product of the first s primes coprime to g
  unsigned m = 0;
  std::uint64_t phi = 0;  // phi(q, g^m)
  double value = 0;       // phi^(1/m)
};

/// Product of the first s primes not dividing g.
std::uint64_t coprime_primorial(unsigned g, unsigned s);

ThetaWitness theta_g(unsigned g, unsigned s, unsigned m);

/// Smallest phi(q_s, g^m)^(1/m) over s <= s_max and m <= m_max (with g^m
/// kept below 2^63); ties go to the smaller s, then the smaller m.
ThetaWitness theta_search(unsigned g, unsigned s_max = 6, unsigned m_max = 40);

/// floor(e g (g-1) / (phi(g) log g)); g >= 3.
unsigned n_g(unsigned g);

/// A (e g (g-1) / (N phi(g) log g))^N.
double approx_pstar(unsigned g, unsigned N, double A = 1.0);
/// A (g (g-1))^N / (N! (phi(g) log g)^N).
double approx_pstar_factorial(unsigned g, unsigned N, double A = 1.0);

struct AlphaPoint {
  unsigned N = 0;
  std::uint64_t count = 0;
  double alpha = 0;
};

/// P*(N)^(1/N) N phi(g) log g / (e g (g-1)) for every N of a non-zero-digit
/// table; alpha = 0 where the count is 0.
std::vector<AlphaPoint> alpha_g(const CountTable& table);

struct RhoEstimate {
  unsigned n = 0;  // the N it was read at
  double value = 0;
  std::vector<std::pair<unsigned, double>> trend;  // (N, P(N)^(1/N)) before n
};

/// P(N_max)^(1/N_max) of a zeros-allowed table with N_max >= min_n.
RhoEstimate rho_estimate(const CountTable& table, unsigned window = 5, unsigned min_n = 20);

struct TheoryReport {
  unsigned g = 0;
  GammaResult gamma;
  ThetaWitness theta;
  std::optional<unsigned> N_g;  // defined for g >= 3
};

TheoryReport theory_report(unsigned g, unsigned s_max = 6, unsigned m_max = 40);

}  // namespace chainprime
