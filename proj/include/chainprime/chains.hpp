#pragma once

// Prime digit-chains: digit sequences d_0, d_1, ... (least significant
// first) whose chain values u(n) = sum_{i<n} d_i g^i are prime for every
// n in (eta, N], where eta = 1 for g = 2 (u(1) is 0 or 1) and 0 otherwise.
//
// count_chains enumerates them level by level. A level-n state is the pair
// (u(n), n); the same prime padded with high zero digits is a distinct
// state at every longer level. counts[N] is the number of level-N states
// whose top digit d_{N-1} is non-zero.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "chainprime/digits.hpp"
#include "chainprime/errors.hpp"
#include "chainprime/options.hpp"

namespace chainprime {

enum class Variant { ZerosAllowed, NonzeroOnly };

std::string to_string(Variant v);
/// Accepts "zeros" / "nonzero" (and the to_string spellings).
Variant parse_variant(const std::string& s);

/// 1 for base 2, else 0.
constexpr unsigned eta(unsigned base) noexcept { return base == 2 ? 1 : 0; }

struct ChainState {
  mpz_class value;
  unsigned length = 0;
  friend bool operator==(const ChainState&, const ChainState&) = default;
};

struct CountTable {
  unsigned base = 0;
  Variant variant = Variant::ZerosAllowed;
  /// counts[N - 1] = chain count at length N.
  std::vector<std::uint64_t> counts;

  unsigned n_max() const noexcept { return static_cast<unsigned>(counts.size()); }
  std::uint64_t at(unsigned N) const { return counts.at(N - 1); }
  /// Smallest N with count zero, if any within the table.
  std::optional<unsigned> first_zero() const;

  friend bool operator==(const CountTable&, const CountTable&) = default;
};

/// Level-synchronous enumeration state. Values are stored as fixed-width
/// little-endian limb rows, `width` limbs each, in a deterministic order.
struct Frontier {
  unsigned base = 0;
  Variant variant = Variant::ZerosAllowed;
  unsigned level = 0;
  std::vector<std::uint64_t> counts;  // counts for N = 1..level
  std::size_t width = 1;
  std::vector<std::uint64_t> limbs;  // size() == states * width

  std::size_t states() const noexcept { return width ? limbs.size() / width : 0; }
  mpz_class value(std::size_t i) const;
  std::vector<ChainState> to_states() const;

  friend bool operator==(const Frontier&, const Frontier&) = default;
};

/// Thrown when the next level would exceed the memory guard. Holds the last
/// complete level, ready for write_checkpoint / resume_chains.
class FrontierGuardExceeded : public ResourceError {
 public:
  FrontierGuardExceeded(Frontier frontier, std::uint64_t required_bytes);
  const Frontier& frontier() const noexcept { return frontier_; }
  Frontier& frontier() noexcept { return frontier_; }

 private:
  Frontier frontier_;
};

/// #{1 <= n <= N : u(n) prime}. Requires N <= seq.size() (std::out_of_range).
unsigned varpi(const DigitSequence& seq, std::size_t N, const PrimalityConfig& cfg = {});

/// Level-1 frontier for the given base and variant.
Frontier initial_frontier(unsigned base, Variant variant);

/// Exact counts for N = 1..n_max (parallel frontier expansion).
/// NonzeroOnly needs base >= 3. Stops early once the frontier is empty;
/// the remaining counts are zero.
CountTable count_chains(unsigned base, unsigned n_max, Variant variant, const RunOptions& opts = {});

/// Continues from a checkpointed frontier up to n_max.
CountTable resume_chains(Frontier frontier, unsigned n_max, const RunOptions& opts = {});

/// Advances `frontier` by one level. Throws FrontierGuardExceeded (with the
/// unchanged frontier) if the children do not fit in opts.mem_guard bytes.
void expand_level(Frontier& frontier, const RunOptions& opts = {});

/// Straightforward single-threaded reference: mpz values, no sieving.
CountTable count_chains_serial(unsigned base, unsigned n_max, Variant variant,
                               const PrimalityConfig& cfg = {});

inline constexpr std::uint64_t kBruteForceLimit = std::uint64_t{1} << 24;

/// Applies the definition to all base^N digit tuples; primality comes from a
/// private sieve table. Requires base^N <= 2^24 (ResourceError otherwise).
std::uint64_t brute_force_count(unsigned base, unsigned N, Variant variant);

// Checkpoint format: header "g=<g> variant=<v> level=<n> counts=<c1,...,cn>"
// then one "<value-decimal> <length>" line per state.
void write_checkpoint(std::ostream& out, const Frontier& frontier);
Frontier read_checkpoint(std::istream& in);

// ---------------------------------------------------------------------------
// Greedy prime-rich sequence.

struct Milestone {
  unsigned n;       // u(n) is prime
  mpz_class value;  // u(n)
  unsigned varpi;   // varpi(n), counting this milestone
};

struct GreedyTrace {
  unsigned base = 0;
  DigitSequence digits{2};
  std::vector<Milestone> milestones;
  /// Progression candidates examined by each extension step.
  std::vector<std::uint64_t> candidates_per_step;

  unsigned varpi() const noexcept { return milestones.empty() ? 0 : milestones.back().varpi; }
};

/// floor(log N / log(12/5)), the growth-rate baseline for varpi(N).
unsigned greedy_baseline(unsigned N);

/// Builds digits until at least n_target are fixed. Each step takes the
/// smallest prime p > u(n) with p = u(n) (mod g^n) and appends the digits
/// of (p - u(n)) / g^n. Throws GreedyInterrupted if a step hits the cap.
GreedyTrace greedy_sequence(unsigned base, unsigned n_target, const PrimalityConfig& cfg = {},
                            std::uint64_t candidate_cap = 50'000'000);

/// Extends an existing trace (e.g. one recovered from GreedyInterrupted).
void greedy_extend(GreedyTrace& trace, unsigned n_target, const PrimalityConfig& cfg = {},
                   std::uint64_t candidate_cap = 50'000'000);

class GreedyInterrupted : public ResourceError {
 public:
  explicit GreedyInterrupted(GreedyTrace partial);
  const GreedyTrace& partial() const noexcept { return partial_; }

 private:
  GreedyTrace partial_;
};

}  // namespace chainprime
