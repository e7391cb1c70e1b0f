#include "chainprime/chains.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <utility>

#include <omp.h>

#include "chainprime/primality.hpp"
#include "chainprime/sieve.hpp"

namespace chainprime {

namespace {

using u64 = std::uint64_t;

// States per parallel work item. Fixed, so the child order does not depend
// on the team size.
constexpr std::size_t kBlock = 1024;
// Candidates are sieved by primes below this bound before the BPSW test.
constexpr std::uint32_t kSieveBound = 256;

std::size_t limbs_for(const mpz_class& v) {
  return std::max<std::size_t>(1, mpz_size(v.get_mpz_t()));
}

std::vector<u64> to_limbs(const mpz_class& v, std::size_t width) {
  std::vector<u64> out(width, 0);
  std::size_t count = 0;
  if (v != 0) mpz_export(out.data(), &count, -1, sizeof(u64), 0, 0, v.get_mpz_t());
  return out;
}

u64 inverse_mod(u64 a, u64 m) {
  // a, m coprime, m prime and small.
  long long t = 0, new_t = 1;
  long long r = static_cast<long long>(m), new_r = static_cast<long long>(a % m);
  while (new_r != 0) {
    long long q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return static_cast<u64>(t < 0 ? t + static_cast<long long>(m) : t);
}

void require_variant_base(unsigned base, Variant variant) {
  require_base(base);
  if (variant == Variant::NonzeroOnly && base < 3)
    throw DomainError("the non-zero-digit variant needs base >= 3");
}

// Per-level data for sieving candidates u + d g^n by small primes.
struct LevelSieve {
  bool enabled = false;
  std::vector<u64> primes;
  std::vector<u64> g_mod;  // g^n mod p
  std::vector<u64> g_inv;  // (g^n)^{-1} mod p, or 0 when p | g
  // Primes grouped so each group's product fits in 64 bits.
  std::vector<u64> group_modulus;
  std::vector<std::size_t> group_end;
};

LevelSieve make_level_sieve(const mpz_class& step) {
  LevelSieve s;
  s.enabled = step > kSieveBound;
  if (!s.enabled) return s;
  for (std::uint32_t p : small_primes(kSieveBound - 1)) s.primes.push_back(p);
  u64 product = 1;
  for (std::size_t i = 0; i < s.primes.size(); ++i) {
    u64 p = s.primes[i];
    u64 gm = mpz_fdiv_ui(step.get_mpz_t(), p);
    s.g_mod.push_back(gm);
    s.g_inv.push_back(gm ? inverse_mod(gm, p) : 0);
    if (product > ~u64{0} / p) {
      s.group_modulus.push_back(product);
      s.group_end.push_back(i);
      product = 1;
    }
    product *= p;
  }
  s.group_modulus.push_back(product);
  s.group_end.push_back(s.primes.size());
  return s;
}

struct BlockResult {
  std::vector<u64> limbs;
  u64 nonzero_top = 0;
};

}  // namespace

std::string to_string(Variant v) { return v == Variant::ZerosAllowed ? "zeros" : "nonzero"; }

Variant parse_variant(const std::string& s) {
  if (s == "zeros" || s == "zeros-allowed") return Variant::ZerosAllowed;
  if (s == "nonzero" || s == "nonzero-only") return Variant::NonzeroOnly;
  throw DomainError("unknown variant '" + s + "' (expected zeros or nonzero)");
}

std::optional<unsigned> CountTable::first_zero() const {
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] == 0) return static_cast<unsigned>(i + 1);
  return std::nullopt;
}

mpz_class Frontier::value(std::size_t i) const {
  mpz_class v;
  mpz_import(v.get_mpz_t(), width, -1, sizeof(u64), 0, 0, limbs.data() + i * width);
  return v;
}

std::vector<ChainState> Frontier::to_states() const {
  std::vector<ChainState> out;
  out.reserve(states());
  for (std::size_t i = 0; i < states(); ++i) out.push_back({value(i), level});
  return out;
}

FrontierGuardExceeded::FrontierGuardExceeded(Frontier frontier, std::uint64_t required_bytes)
    : ResourceError("frontier for level " + std::to_string(frontier.level + 1) + " needs at least " +
                    std::to_string(required_bytes) + " bytes, over the memory guard; stopped at level " +
                    std::to_string(frontier.level)),
      frontier_(std::move(frontier)) {}

unsigned varpi(const DigitSequence& seq, std::size_t N, const PrimalityConfig& cfg) {
  if (N > seq.size())
    throw std::out_of_range("varpi: N = " + std::to_string(N) + " exceeds stored digits");
  unsigned count = 0;
  for (std::size_t n = 1; n <= N; ++n)
    if (is_prime(chain_value(seq, n).value, cfg)) ++count;
  return count;
}

Frontier initial_frontier(unsigned base, Variant variant) {
  require_variant_base(base, variant);
  Frontier f;
  f.base = base;
  f.variant = variant;
  f.level = 1;
  f.width = 1;
  if (base == 2) {
    // u(1) is exempt from the chain condition in base 2.
    f.limbs = {0, 1};
    f.counts = {1};
    return f;
  }
  for (unsigned d = 2; d < base; ++d)
    if (is_prime(static_cast<u64>(d))) f.limbs.push_back(d);
  f.counts = {f.limbs.size()};
  return f;
}

void expand_level(Frontier& frontier, const RunOptions& opts) {
  const unsigned g = frontier.base;
  const unsigned n = frontier.level;
  const bool zeros = frontier.variant == Variant::ZerosAllowed;
  // Level-n states are prime once n > eta, so their zero-digit child is too.
  const bool keep_zero_child = zeros && n > eta(g);

  mpz_class step;
  mpz_ui_pow_ui(step.get_mpz_t(), g, n);
  mpz_class bound = step * g;
  const std::size_t in_width = frontier.width;
  const std::size_t width = limbs_for(bound - 1);
  const std::vector<u64> step_limbs = to_limbs(step, width);
  const LevelSieve sieve = make_level_sieve(step);

  const std::size_t states = frontier.states();
  const std::size_t blocks = (states + kBlock - 1) / kBlock;
  std::vector<BlockResult> results(blocks);
  std::atomic<u64> produced_bytes{0};
  std::atomic<bool> over_guard{false};

#pragma omp parallel num_threads(opts.workers)
  {
    std::vector<std::uint8_t> blocked(g);
    std::vector<u64> residues(sieve.primes.size());
    std::vector<u64> candidate(width);

#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      if (over_guard.load(std::memory_order_relaxed)) continue;
      BlockResult& out = results[static_cast<std::size_t>(b)];
      const std::size_t first = static_cast<std::size_t>(b) * kBlock;
      const std::size_t last = std::min(states, first + kBlock);
      for (std::size_t i = first; i < last; ++i) {
        const u64* v = frontier.limbs.data() + i * in_width;
        std::size_t v_size = in_width;
        while (v_size > 1 && v[v_size - 1] == 0) --v_size;

        std::fill(blocked.begin(), blocked.end(), 0);
        bool all_blocked = false;
        if (sieve.enabled) {
          std::size_t begin = 0;
          for (std::size_t j = 0; j < sieve.group_modulus.size(); ++j) {
            const u64 q = sieve.group_modulus[j];
            const u64 r = v_size == 1 ? v[0] % q
                                      : mpn_mod_1(reinterpret_cast<const mp_limb_t*>(v),
                                                  static_cast<mp_size_t>(v_size), q);
            for (std::size_t k = begin; k < sieve.group_end[j]; ++k) residues[k] = r % sieve.primes[k];
            begin = sieve.group_end[j];
          }
          for (std::size_t k = 0; k < sieve.primes.size() && !all_blocked; ++k) {
            const u64 p = sieve.primes[k];
            if (sieve.g_mod[k] == 0) {
              // Every candidate is congruent to u mod p.
              if (residues[k] == 0) all_blocked = true;
              continue;
            }
            // u + d g^n = 0 (mod p)  <=>  d = -u (g^n)^{-1} (mod p)
            u64 bad = (p - residues[k]) % p * sieve.g_inv[k] % p;
            for (u64 d = bad; d < g; d += p) blocked[d] = 1;
          }
        }

        if (keep_zero_child) {
          out.limbs.insert(out.limbs.end(), v, v + in_width);
          out.limbs.resize(out.limbs.size() + (width - in_width), 0);
        }
        if (all_blocked) continue;
        for (unsigned d = 1; d < g; ++d) {
          if (blocked[d]) continue;
          std::fill(candidate.begin(), candidate.end(), 0);
          std::copy(v, v + in_width, candidate.begin());
          mpn_addmul_1(reinterpret_cast<mp_limb_t*>(candidate.data()),
                       reinterpret_cast<const mp_limb_t*>(step_limbs.data()),
                       static_cast<mp_size_t>(width), d);
          const bool prime = sieve.enabled ? detail::probable_prime_limbs(candidate, opts.primality)
                                           : is_prime(std::span<const u64>(candidate), opts.primality);
          if (prime) {
            out.limbs.insert(out.limbs.end(), candidate.begin(), candidate.end());
            ++out.nonzero_top;
          }
        }
      }
      const u64 bytes = produced_bytes.fetch_add(out.limbs.size() * sizeof(u64)) +
                        out.limbs.size() * sizeof(u64);
      if (bytes > opts.mem_guard) over_guard.store(true);
    }
  }

  if (over_guard.load()) throw FrontierGuardExceeded(std::move(frontier), produced_bytes.load());

  std::size_t total = 0;
  u64 nonzero_top = 0;
  for (const auto& r : results) {
    total += r.limbs.size();
    nonzero_top += r.nonzero_top;
  }
  std::vector<u64> next;
  next.reserve(total);
  for (auto& r : results) {
    next.insert(next.end(), r.limbs.begin(), r.limbs.end());
    std::vector<u64>().swap(r.limbs);
  }
  frontier.limbs = std::move(next);
  frontier.width = width;
  frontier.level = n + 1;
  frontier.counts.push_back(nonzero_top);
}

CountTable resume_chains(Frontier frontier, unsigned n_max, const RunOptions& opts) {
  require_variant_base(frontier.base, frontier.variant);
  if (n_max < 1) throw DomainError("count_chains: n_max must be at least 1");
  while (frontier.level < n_max) {
    if (frontier.states() == 0) {
      frontier.counts.resize(n_max, 0);
      break;
    }
    expand_level(frontier, opts);
    if (opts.progress)
      opts.progress("level " + std::to_string(frontier.level) + ": count " +
                    std::to_string(frontier.counts.back()) + ", frontier " +
                    std::to_string(frontier.states()));
  }
  CountTable table{frontier.base, frontier.variant, std::move(frontier.counts)};
  table.counts.resize(n_max);
  return table;
}

CountTable count_chains(unsigned base, unsigned n_max, Variant variant, const RunOptions& opts) {
  return resume_chains(initial_frontier(base, variant), n_max, opts);
}

CountTable count_chains_serial(unsigned base, unsigned n_max, Variant variant,
                               const PrimalityConfig& cfg) {
  require_variant_base(base, variant);
  if (n_max < 1) throw DomainError("count_chains: n_max must be at least 1");
  const unsigned first_digit = variant == Variant::ZerosAllowed ? 0 : 1;
  CountTable table{base, variant, {}};
  std::vector<mpz_class> level;
  u64 count = 0;
  for (unsigned d = first_digit; d < base; ++d) {
    if (base == 2 || is_prime(mpz_class(d), cfg)) {
      level.emplace_back(d);
      if (d != 0) ++count;
    }
  }
  table.counts.push_back(count);
  mpz_class step = base;
  for (unsigned n = 1; n < n_max; ++n) {
    std::vector<mpz_class> next;
    count = 0;
    for (const auto& u : level) {
      for (unsigned d = first_digit; d < base; ++d) {
        mpz_class c = u + step * d;
        if (is_prime(c, cfg)) {
          next.push_back(c);
          if (d != 0) ++count;
        }
      }
    }
    table.counts.push_back(count);
    level.swap(next);
    step *= base;
  }
  return table;
}

std::uint64_t brute_force_count(unsigned base, unsigned N, Variant variant) {
  require_variant_base(base, variant);
  if (N < 1) throw DomainError("brute_force_count: N must be at least 1");
  u64 total = 1;
  for (unsigned i = 0; i < N; ++i) {
    total *= base;
    if (total > kBruteForceLimit)
      throw ResourceError("brute_force_count: base^N exceeds 2^24");
  }
  std::vector<bool> prime(total, true);
  prime[0] = false;
  if (total > 1) prime[1] = false;
  for (u64 i = 2; i * i < total; ++i)
    if (prime[i])
      for (u64 j = i * i; j < total; j += i) prime[j] = false;

  const u64 top = total / base;  // base^(N-1)
  const unsigned want = N - eta(base);
  u64 count = 0;
  for (u64 t = top; t < total; ++t) {  // d_{N-1} != 0 <=> t >= base^(N-1)
    if (variant == Variant::NonzeroOnly) {
      bool has_zero = false;
      for (u64 x = t; x; x /= base)
        if (x % base == 0) has_zero = true;
      if (has_zero) continue;
    }
    unsigned w = 0;
    u64 modulus = 1;
    for (unsigned n = 1; n <= N; ++n) {
      modulus *= base;
      if (prime[t % modulus]) ++w;
    }
    if (w == want) ++count;
  }
  return count;
}

}  // namespace chainprime
