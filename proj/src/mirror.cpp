#include "chainprime/mirror.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include <omp.h>

#include "chainprime/digits.hpp"
#include "chainprime/errors.hpp"
#include "chainprime/factor.hpp"
#include "chainprime/primality.hpp"
#include "chainprime/sieve.hpp"

namespace chainprime {

namespace {

using u64 = std::uint64_t;

constexpr u64 kScanBlock = u64{1} << 16;

struct Interval {
  u64 lo, hi;
};

Interval digit_interval(unsigned base, unsigned N) {
  require_base(base);
  if (N < 1) throw DomainError("N must be at least 1");
  const u64 hi = checked_pow(base, N);
  if (hi > (u64{1} << 63)) throw DomainError("base^N must not exceed 2^63");
  return {hi / base, hi};
}

// Sieves [lo, hi) in guard-sized chunks; within a chunk, fixed blocks are
// visited in parallel, each filling its own Partial, and `merge` receives
// the partials in interval order. visit(part, p, bitmap) returns false to
// report a broken invariant.
template <class Partial, class Visit, class Merge>
void scan_primes(Interval iv, const RunOptions& opts, Visit visit, Merge merge) {
  const u64 chunk = std::max<u64>(64, opts.mem_guard / 64 * 64);
  std::atomic<bool> broken{false};
  for (u64 a = iv.lo; a < iv.hi; a = std::min(iv.hi, a + chunk)) {
    const u64 b = std::min(iv.hi, a + chunk);
    const PrimeBitmap bitmap = sieve_interval(a, b, opts);
    const u64 blocks = (b - a + kScanBlock - 1) / kScanBlock;
    std::vector<Partial> parts(blocks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.workers)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(blocks); ++k) {
      const u64 x = a + static_cast<u64>(k) * kScanBlock;
      const u64 y = std::min(b, x + kScanBlock);
      Partial& part = parts[static_cast<std::size_t>(k)];
      bitmap.for_each_prime(x, y, [&](u64 p) {
        if (!visit(part, p, bitmap)) broken.store(true, std::memory_order_relaxed);
      });
    }
    if (broken.load()) throw InvariantError("mirror of an N-digit prime left the digit interval");
    for (auto& part : parts) merge(part);
  }
}

bool prime_via(const PrimeBitmap& bitmap, u64 v) {
  return bitmap.contains(v) ? bitmap.test(v) : is_prime(v);
}

// Mirror of a prime p of the interval; false if p is not a multiple of the
// base yet its mirror has fewer digits.
bool mirror_in_interval(u64 p, unsigned base, Interval iv, u64& q) {
  q = mirror(p, base);
  return p % base == 0 || (q >= iv.lo && q < iv.hi);
}

mpq_class tree_sum(std::vector<mpq_class>& terms, std::size_t a, std::size_t b) {
  if (a == b) return 0;
  if (b - a == 1) return terms[a];
  std::size_t mid = a + (b - a) / 2;
  return tree_sum(terms, a, mid) + tree_sum(terms, mid, b);
}

}  // namespace

MirrorScan count_mirror_primes(unsigned base, unsigned N, const RunOptions& opts) {
  const Interval iv = digit_interval(base, N);
  struct Part {
    u64 total = 0, mirrored = 0;
  };
  MirrorScan scan{base, N, 0, 0};
  scan_primes<Part>(
      iv, opts,
      [&](Part& part, u64 p, const PrimeBitmap& bitmap) {
        u64 q;
        const bool ok = mirror_in_interval(p, base, iv, q);
        ++part.total;
        if (prime_via(bitmap, q)) ++part.mirrored;
        return ok;
      },
      [&](const Part& part) {
        scan.total_primes += part.total;
        scan.M += part.mirrored;
      });
  return scan;
}

MirrorScan count_mirror_primes_serial(unsigned base, unsigned N) {
  const Interval iv = digit_interval(base, N);
  MirrorScan scan{base, N, 0, 0};
  for (u64 v = iv.lo; v < iv.hi; ++v) {
    if (!is_prime(v)) continue;
    ++scan.total_primes;
    if (is_prime(mirror(v, base))) ++scan.M;
  }
  return scan;
}

std::vector<ResidueCount> residue_counts(unsigned base, unsigned N, std::span<const u64> moduli,
                                         const RunOptions& opts) {
  const Interval iv = digit_interval(base, N);
  std::vector<ResidueCount> out;
  for (u64 m : moduli) {
    if (m < 1) throw DomainError("residue_counts: modulus must be positive");
    if (m > kHistogramLimit)
      throw ResourceError("residue_counts: modulus " + std::to_string(m) +
                          " exceeds the histogram limit; count single residues instead");
    out.push_back({base, N, m, 0, std::vector<u64>(m, 0), 0});
  }
  using Part = std::vector<u64>;  // mirrors of the block's primes
  scan_primes<Part>(
      iv, opts,
      [&](Part& part, u64 p, const PrimeBitmap&) {
        u64 q;
        const bool ok = mirror_in_interval(p, base, iv, q);
        part.push_back(q);
        return ok;
      },
      [&](const Part& part) {
        for (auto& rc : out) {
          rc.total_primes += part.size();
          for (u64 q : part) ++rc.counts[q % rc.modulus];
        }
      });
  const double gN = static_cast<double>(iv.hi);
  for (auto& rc : out) {
    const u64 max = *std::max_element(rc.counts.begin(), rc.counts.end());
    if (max > iv.hi / rc.modulus + 1)
      throw InvariantError("residue count above g^N/m + 1 for m = " + std::to_string(rc.modulus));
    rc.trivial_constant = static_cast<double>(max) * N / gN;
  }
  return out;
}

ResidueCount residue_counts(unsigned base, unsigned N, u64 m, const RunOptions& opts) {
  const u64 moduli[] = {m};
  return std::move(residue_counts(base, N, moduli, opts).front());
}

u64 residue_count(unsigned base, unsigned N, u64 m, u64 a, const RunOptions& opts) {
  const Interval iv = digit_interval(base, N);
  if (m < 1) throw DomainError("residue_count: modulus must be positive");
  u64 total = 0;
  scan_primes<u64>(
      iv, opts,
      [&](u64& part, u64 p, const PrimeBitmap&) {
        u64 q;
        const bool ok = mirror_in_interval(p, base, iv, q);
        if (q % m == a % m) ++part;
        return ok;
      },
      [&](u64 part) { total += part; });
  return total;
}

double MirrorStats::sigma_sum() const {
  return std::ldexp(sigma_fixed.get_d(), -128);
}

std::string MirrorStats::sigma_decimal(int digits) const {
  const mpz_class whole = sigma_fixed >> 128;
  if (whole == 0) return "0";
  const int k = std::max(0, digits - static_cast<int>(whole.get_str().size()));
  mpz_class ten_k;
  mpz_ui_pow_ui(ten_k.get_mpz_t(), 10, static_cast<unsigned long>(k));
  const std::string s = mpz_class((sigma_fixed * ten_k) >> 128).get_str();
  if (k == 0) return s;
  return s.substr(0, s.size() - k) + "." + s.substr(s.size() - k);
}

MirrorStats mirror_stats(unsigned base, unsigned N, bool top_digit_one, const RunOptions& opts) {
  Interval iv = digit_interval(base, N);
  if (iv.hi > kFactorLimit) throw ResourceError("mirror_stats: base^N exceeds 2^40");
  const bool exact = iv.hi <= kExactSigmaLimit;
  const Interval full = iv;
  if (top_digit_one) iv.hi = std::min(iv.hi, 2 * iv.lo);

  struct Part {
    u64 count = 0;
    mpz_class fixed;
    std::vector<mpq_class> terms;
    std::map<u64, u64> nu;
  };
  MirrorStats stats;
  stats.base = base;
  stats.N = N;
  stats.top_digit_one = top_digit_one;
  std::vector<mpq_class> block_sums;
  scan_primes<Part>(
      iv, opts,
      [&](Part& part, u64 p, const PrimeBitmap&) {
        u64 q;
        const bool ok = mirror_in_interval(p, base, full, q);
        const auto factors = factorize(q);
        const u64 s = sigma(factors);
        mpz_class term(static_cast<unsigned long>(s));
        term <<= 128;
        mpz_fdiv_q_ui(term.get_mpz_t(), term.get_mpz_t(), q);
        part.fixed += term;
        if (exact) part.terms.emplace_back(mpz_class(static_cast<unsigned long>(s)),
                                           mpz_class(static_cast<unsigned long>(q)));
        for (const auto& [l, e] : factors) part.nu[l] += e;
        ++part.count;
        return ok;
      },
      [&](Part& part) {
        stats.total_primes += part.count;
        stats.sigma_fixed += part.fixed;
        for (const auto& [l, e] : part.nu) stats.nu[l] += e;
        if (exact) {
          for (auto& t : part.terms) t.canonicalize();
          block_sums.push_back(tree_sum(part.terms, 0, part.terms.size()));
        }
      });
  if (exact) stats.sigma_exact = tree_sum(block_sums, 0, block_sums.size());
  stats.omega_product = stats.nu.size();
  return stats;
}

M2Heuristic heuristic_m2(unsigned N, const RunOptions& opts) {
  if (N < 2 || N > 63) throw DomainError("heuristic_m2: N must lie in [2, 63]");
  const MirrorScan scan = count_mirror_primes(2, N, opts);
  M2Heuristic h;
  h.N = N;
  h.interval_primes = scan.total_primes;
  h.M = scan.M;
  const long double P = static_cast<long double>(scan.total_primes);
  h.heuristic = static_cast<double>(std::ldexp(6.0L * P * P, -static_cast<int>(N)));
  h.ratio = h.M ? h.heuristic / static_cast<double>(h.M) : 0.0;
  return h;
}

EnvelopeFit envelope_constant(unsigned base, unsigned n_min, unsigned n_max, unsigned fit_n_max,
                              std::span<const u64> moduli, const RunOptions& opts) {
  if (n_min < 1 || n_min > n_max) throw DomainError("envelope_constant: empty N range");
  if (fit_n_max < n_min || fit_n_max > n_max)
    throw DomainError("envelope_constant: fit range must lie inside the N range");
  EnvelopeFit fit;
  fit.base = base;
  fit.fit_n_max = fit_n_max;
  for (unsigned N = n_min; N <= n_max; ++N) {
    const u64 gN = checked_pow(base, N);
    for (const auto& rc : residue_counts(base, N, moduli, opts)) {
      EnvelopeRow row{N, rc.modulus, *std::max_element(rc.counts.begin(), rc.counts.end()), 0};
      const double bound = static_cast<double>(gN) * static_cast<double>(std::gcd(gN, rc.modulus)) /
                           (N * std::sqrt(static_cast<double>(rc.modulus)));
      row.constant = static_cast<double>(row.max_count) / bound;
      double& slot = N <= fit_n_max ? fit.fitted : fit.later;
      slot = std::max(slot, row.constant);
      fit.rows.push_back(row);
    }
  }
  return fit;
}

}  // namespace chainprime
