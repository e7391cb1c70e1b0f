#include "chainprime/primality.hpp"

#include <array>
#include <vector>

#include "chainprime/detail/bpsw.hpp"
#include "chainprime/detail/montgomery.hpp"

namespace chainprime {

namespace {

using detail::u64;

constexpr std::array<unsigned, 15> kSmallPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
// 3 * 5 * ... * 47
constexpr u64 kOddPrimorial47 = 307444891294245705ULL;

// Strong pseudoprime bases that together admit no composite below 2^64.
constexpr std::array<u64, 7> kBases64 = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};

bool sprp64(const detail::Mont64& f, u64 n, u64 a) {
  a %= n;
  if (a == 0) return true;
  return detail::strong_probable_prime(f, f.to(a), std::span<const u64>(&n, 1));
}

u64 splitmix64(u64& state) {
  u64 z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

template <class F>
bool bpsw_with_rounds(const F& f, std::span<const u64> n, const PrimalityConfig& cfg) {
  if (!detail::strong_probable_prime(f, f.from_small(2), n)) return false;
  // Squares would stall the Selfridge parameter search.
  if (mpn_perfect_square_p(reinterpret_cast<const mp_limb_t*>(n.data()),
                           static_cast<mp_size_t>(n.size())))
    return false;
  if (!detail::strong_lucas_probable_prime(f, n)) return false;
  if (cfg.extra_rounds == 0) return true;
  u64 state = cfg.rng_seed;
  for (u64 limb : n) {
    state ^= limb;
    splitmix64(state);
  }
  for (unsigned r = 0; r < cfg.extra_rounds; ++r) {
    // n > 2^64 here, so any base below 2^32 is in range.
    u64 base = 3 + splitmix64(state) % ((u64{1} << 32) - 3);
    if (!detail::strong_probable_prime(f, f.from_small(base), n)) return false;
  }
  return true;
}

template <std::size_t L>
bool bpsw_fixed(std::span<const u64> n, const PrimalityConfig& cfg) {
  detail::MontN<L> f(std::span<const u64, L>(n.data(), L));
  return bpsw_with_rounds(f, n, cfg);
}

std::span<const u64> normalized(std::span<const u64> limbs) {
  std::size_t size = limbs.size();
  while (size > 0 && limbs[size - 1] == 0) --size;
  return limbs.first(size);
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (n % p == 0) return n == p;
  }
  if (n < 53 * 53) return true;
  detail::Mont64 f(n);
  for (u64 a : kBases64)
    if (!sprp64(f, n, a)) return false;
  return true;
}

namespace detail {

bool probable_prime_limbs(std::span<const std::uint64_t> limbs, const PrimalityConfig& cfg) {
  auto n = normalized(limbs);
  if (n.empty()) return false;
  if (n.size() == 1) return is_prime(n[0]);
  if ((n[0] & 1) == 0) return false;
  switch (n.size()) {
    case 2:
      return bpsw_fixed<2>(n, cfg);
    case 3:
      return bpsw_fixed<3>(n, cfg);
    case 4:
      return bpsw_fixed<4>(n, cfg);
    default:
      break;
  }
  MpzField f(n);
  return bpsw_with_rounds(f, n, cfg);
}

}  // namespace detail

bool is_prime(std::span<const std::uint64_t> limbs, const PrimalityConfig& cfg) {
  auto n = normalized(limbs);
  if (n.size() <= 1) return is_prime(n.empty() ? u64{0} : n[0]);
  if ((n[0] & 1) == 0) return false;
  u64 r = mpn_mod_1(reinterpret_cast<const mp_limb_t*>(n.data()), static_cast<mp_size_t>(n.size()),
                    kOddPrimorial47);
  for (std::size_t i = 1; i < kSmallPrimes.size(); ++i)
    if (r % kSmallPrimes[i] == 0) return false;
  return detail::probable_prime_limbs(n, cfg);
}

bool is_prime(const mpz_class& v, const PrimalityConfig& cfg) {
  if (v < 2) return false;
  if (mpz_sizeinbase(v.get_mpz_t(), 2) <= 64) return is_prime(static_cast<u64>(mpz_get_ui(v.get_mpz_t())));
  std::size_t count = 0;
  std::vector<u64> limbs((mpz_sizeinbase(v.get_mpz_t(), 2) + 63) / 64);
  mpz_export(limbs.data(), &count, -1, sizeof(u64), 0, 0, v.get_mpz_t());
  limbs.resize(count);
  return is_prime(std::span<const u64>(limbs), cfg);
}

}  // namespace chainprime
