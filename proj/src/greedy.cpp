#include <cmath>
#include <numeric>

#include "chainprime/chains.hpp"
#include "chainprime/primality.hpp"
#include "chainprime/progression.hpp"

namespace chainprime {

namespace {

// Appends digits d_n, d_{n+1}, ... to the trace and records each new prime
// prefix as a milestone.
void append_digits(GreedyTrace& trace, const DigitSequence& high, const PrimalityConfig& cfg) {
  const std::size_t first = trace.digits.size();
  trace.digits.append(high);
  unsigned count = trace.varpi();
  for (std::size_t n = first + 1; n <= trace.digits.size(); ++n) {
    mpz_class u = chain_value(trace.digits, n).value;
    if (is_prime(u, cfg)) trace.milestones.push_back({static_cast<unsigned>(n), std::move(u), ++count});
  }
}

}  // namespace

GreedyInterrupted::GreedyInterrupted(GreedyTrace partial)
    : ResourceError("greedy construction stopped at " + std::to_string(partial.digits.size()) +
                    " digits: candidate cap exceeded"),
      partial_(std::move(partial)) {}

unsigned greedy_baseline(unsigned N) {
  if (N < 1) return 0;
  return static_cast<unsigned>(std::floor(std::log(static_cast<double>(N)) / std::log(2.4)));
}

GreedyTrace greedy_sequence(unsigned base, unsigned n_target, const PrimalityConfig& cfg,
                            std::uint64_t candidate_cap) {
  require_base(base);
  GreedyTrace trace;
  trace.base = base;
  trace.digits = DigitSequence(base);
  // Smallest prime coprime to the base written with at most two digits.
  const std::uint64_t limit = std::uint64_t{base} * base;
  std::uint64_t seed = 2;
  while (seed < limit && (std::gcd(seed, std::uint64_t{base}) != 1 || !is_prime(seed))) ++seed;
  if (seed == limit) throw InvariantError("no two-digit prime seed");
  DigitSequence seed_digits = digits_of(seed, base);
  append_digits(trace, seed_digits, cfg);
  trace.candidates_per_step.push_back(0);
  greedy_extend(trace, n_target, cfg, candidate_cap);
  return trace;
}

void greedy_extend(GreedyTrace& trace, unsigned n_target, const PrimalityConfig& cfg,
                   std::uint64_t candidate_cap) {
  const unsigned g = trace.base;
  while (trace.digits.size() < n_target) {
    const std::size_t n = trace.digits.size();
    mpz_class u = chain_value(trace.digits, n).value;
    mpz_class step;
    mpz_ui_pow_ui(step.get_mpz_t(), g, static_cast<unsigned long>(n));
    ProgressionCursor cursor{u, step, u + step, 0};
    mpz_class p;
    try {
      p = resume_progression(cursor, cfg, candidate_cap);
    } catch (const CandidateCapExceeded&) {
      throw GreedyInterrupted(trace);
    }
    trace.candidates_per_step.push_back(cursor.examined);
    append_digits(trace, digits_of(mpz_class((p - u) / step), g), cfg);
  }
}

}  // namespace chainprime
