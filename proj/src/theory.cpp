#include "chainprime/theory.hpp"

#include <cmath>
#include <numbers>

#include "chainprime/errors.hpp"
#include "chainprime/factor.hpp"
#include "chainprime/primality.hpp"

namespace chainprime {

namespace {

using u64 = std::uint64_t;

// coprime[i] <=> gcd(i, q) = 1, for i in [0, q).
std::vector<bool> coprime_indicator(u64 q) {
  if (q > kPhiWindowLimit) throw ResourceError("phi(q, U): q exceeds 10^9");
  std::vector<bool> coprime(q, true);
  for (u64 p : prime_divisors(q))
    for (u64 i = 0; i < q; i += p) coprime[i] = false;
  if (q == 1) coprime[0] = true;
  return coprime;
}

// Largest number of coprime residues in a circular window of length w < q.
u64 window_max(const std::vector<bool>& coprime, u64 w) {
  const u64 q = coprime.size();
  if (w == 0) return 0;
  u64 inside = 0;
  for (u64 i = 0; i < w; ++i) inside += coprime[i];
  u64 best = inside;
  for (u64 start = 1; start < q; ++start) {
    inside += coprime[(start + w - 1) % q];
    inside -= coprime[start - 1];
    best = std::max(best, inside);
  }
  return best;
}

u64 phi_from(const std::vector<bool>& coprime, u64 U) {
  const u64 q = coprime.size();
  u64 phi = 0;
  for (bool c : coprime) phi += c;
  return U / q * phi + window_max(coprime, U % q);
}

double log_phi_log_g(unsigned g) {
  return static_cast<double>(euler_phi(g)) * std::log(static_cast<double>(g));
}

}  // namespace

u64 phi_qU(u64 q, u64 U) {
  if (q < 1 || U < 1) throw DomainError("phi(q, U): q and U must be positive");
  return phi_from(coprime_indicator(q), U);
}

bool erat_bound_check(u64 q, u64 U) {
  const u64 phi = phi_qU(q, U);
  const auto s = prime_divisors(q).size();
  const long double bound = static_cast<long double>(euler_phi(q)) / q * (U - 1.0L) +
                            std::ldexp(1.0L, static_cast<int>(s));
  return phi <= bound;
}

double gamma_term(unsigned g, unsigned m) {
  require_base(g);
  if (m < 1) throw DomainError("gamma: m must be positive");
  return g * std::pow(2.0 * g / (m * log_phi_log_g(g)), 1.0 / m);
}

GammaResult gamma_g(unsigned g) {
  require_base(g);
  // Past m = 2g/(phi(g) log g) the base drops below 1 and the root climbs
  // back towards 1, so the minimum sits well inside this range.
  unsigned limit = std::max(64u, static_cast<unsigned>(std::ceil(16.0 * g / log_phi_log_g(g))));
  for (int attempt = 0; attempt < 2; ++attempt, limit *= 2) {
    GammaResult r{gamma_term(g, 1), 1, limit};
    for (unsigned m = 2; m <= limit; ++m) {
      const double v = gamma_term(g, m);
      if (v < r.value) r = {v, m, limit};
    }
    if (r.m_star < limit) return r;
  }
  throw InvariantError("gamma: minimum at the edge of the search range for g = " + std::to_string(g));
}

u64 coprime_primorial(unsigned g, unsigned s) {
  require_base(g);
  u64 q = 1;
  unsigned taken = 0;
  for (u64 p = 2; taken < s; ++p) {
    if (!is_prime(p) || g % p == 0) continue;
    if (__builtin_mul_overflow(q, p, &q)) throw ResourceError("q_s overflows 64 bits");
    ++taken;
  }
  return q;
}

ThetaWitness theta_g(unsigned g, unsigned s, unsigned m) {
  if (m < 1) throw DomainError("theta: m must be positive");
  const u64 q = coprime_primorial(g, s);
  const u64 U = checked_pow(g, m);
  const u64 phi = phi_qU(q, U);
  return {s, q, m, phi, std::pow(static_cast<double>(phi), 1.0 / m)};
}

ThetaWitness theta_search(unsigned g, unsigned s_max, unsigned m_max) {
  require_base(g);
  if (s_max < 1 || m_max < 1) throw DomainError("theta search: empty range");
  ThetaWitness best;
  for (unsigned s = 1; s <= s_max; ++s) {
    const u64 q = coprime_primorial(g, s);
    const auto coprime = coprime_indicator(q);
    u64 U = 1;
    for (unsigned m = 1; m <= m_max; ++m) {
      if (__builtin_mul_overflow(U, u64{g}, &U) || U > (u64{1} << 63)) break;
      const u64 phi = phi_from(coprime, U);
      const double v = std::pow(static_cast<double>(phi), 1.0 / m);
      if (best.s == 0 || v < best.value) best = {s, q, m, phi, v};
    }
  }
  return best;
}

unsigned n_g(unsigned g) {
  if (g < 3) throw DomainError("N_g is defined for g >= 3");
  return static_cast<unsigned>(std::floor(std::numbers::e * g * (g - 1.0) / log_phi_log_g(g)));
}

double approx_pstar(unsigned g, unsigned N, double A) {
  require_base(g);
  if (N < 1 || !(A > 0)) throw DomainError("approx_pstar: need N >= 1 and A > 0");
  return A * std::pow(std::numbers::e * g * (g - 1.0) / (N * log_phi_log_g(g)), N);
}

double approx_pstar_factorial(unsigned g, unsigned N, double A) {
  require_base(g);
  if (N < 1 || !(A > 0)) throw DomainError("approx_pstar: need N >= 1 and A > 0");
  const double log_value =
      N * std::log(g * (g - 1.0) / log_phi_log_g(g)) - std::lgamma(N + 1.0);
  return A * std::exp(log_value);
}

std::vector<AlphaPoint> alpha_g(const CountTable& table) {
  if (table.variant != Variant::NonzeroOnly)
    throw DomainError("alpha: needs the non-zero-digit count table");
  const unsigned g = table.base;
  const double scale = log_phi_log_g(g) / (std::numbers::e * g * (g - 1.0));
  std::vector<AlphaPoint> out;
  for (unsigned N = 1; N <= table.n_max(); ++N) {
    const u64 c = table.at(N);
    const double alpha = c ? std::pow(static_cast<double>(c), 1.0 / N) * N * scale : 0.0;
    out.push_back({N, c, alpha});
  }
  return out;
}

RhoEstimate rho_estimate(const CountTable& table, unsigned window, unsigned min_n) {
  if (table.variant != Variant::ZerosAllowed)
    throw DomainError("rho: needs the zeros-allowed count table");
  if (table.n_max() < min_n)
    throw DomainError("rho: table reaches N = " + std::to_string(table.n_max()) + ", need at least " +
                      std::to_string(min_n));
  auto root = [&](unsigned N) { return std::pow(static_cast<double>(table.at(N)), 1.0 / N); };
  RhoEstimate r;
  r.n = table.n_max();
  r.value = root(r.n);
  for (unsigned N = r.n > window ? r.n - window : 1; N < r.n; ++N) r.trend.emplace_back(N, root(N));
  return r;
}

TheoryReport theory_report(unsigned g, unsigned s_max, unsigned m_max) {
  TheoryReport r;
  r.g = g;
  r.gamma = gamma_g(g);
  r.theta = theta_search(g, s_max, m_max);
  if (g >= 3) r.N_g = n_g(g);
  return r;
}

}  // namespace chainprime
