#pragma once

// Strong probable-prime and strong Lucas tests, generic over the modular
// field (Mont64, MontN<L>, MpzField). The modulus is passed separately as
// little-endian 64-bit limbs for exponent bit walks.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "chainprime/detail/montgomery.hpp"

namespace chainprime::detail {

/// Plain residues modulo an arbitrary-size n, for moduli beyond MontN's widths.
class MpzField {
 public:
  using Elem = mpz_class;

  explicit MpzField(std::span<const u64> n) {
    mpz_import(n_.get_mpz_t(), n.size(), -1, sizeof(u64), 0, 0, n.data());
  }

  const mpz_class& modulus() const noexcept { return n_; }
  Elem one() const { return 1; }
  Elem zero() const { return 0; }
  Elem from_small(u64 k) const {
    mpz_class r;
    mpz_set_ui(r.get_mpz_t(), k);
    mpz_tdiv_r(r.get_mpz_t(), r.get_mpz_t(), n_.get_mpz_t());
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    mpz_class r;
    mpz_mul(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_tdiv_r(r.get_mpz_t(), r.get_mpz_t(), n_.get_mpz_t());
    return r;
  }
  Elem sqr(const Elem& a) const { return mul(a, a); }
  Elem add(const Elem& a, const Elem& b) const {
    mpz_class r = a + b;
    if (r >= n_) r -= n_;
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    mpz_class r = a - b;
    if (r < 0) r += n_;
    return r;
  }
  Elem half(const Elem& a) const {
    mpz_class r = a;
    if (mpz_odd_p(r.get_mpz_t())) r += n_;
    mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), 1);
    return r;
  }
  static bool equal(const Elem& a, const Elem& b) { return a == b; }
  static bool is_zero(const Elem& a) { return a == 0; }

 private:
  mpz_class n_;
};

inline std::size_t bit_length(std::span<const u64> e) noexcept {
  for (std::size_t i = e.size(); i-- > 0;)
    if (e[i]) return 64 * i + static_cast<std::size_t>(std::bit_width(e[i]));
  return 0;
}

inline bool test_bit(std::span<const u64> e, std::size_t i) noexcept {
  return (e[i / 64] >> (i % 64)) & 1;
}

inline std::size_t trailing_zeros(std::span<const u64> e) noexcept {
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i]) return 64 * i + static_cast<std::size_t>(std::countr_zero(e[i]));
  return 0;
}

inline std::vector<u64> shift_right(std::span<const u64> e, std::size_t s) {
  std::vector<u64> out(e.size(), 0);
  std::size_t limb = s / 64, bits = s % 64;
  for (std::size_t i = limb; i < e.size(); ++i) {
    u64 lo = e[i] >> bits;
    u64 hi = (bits && i + 1 < e.size()) ? e[i + 1] << (64 - bits) : 0;
    out[i - limb] = lo | hi;
  }
  return out;
}

/// n -/+ 1 as a limb vector one limb wider than n.
inline std::vector<u64> offset_by_one(std::span<const u64> n, bool plus) {
  std::vector<u64> out(n.begin(), n.end());
  out.push_back(0);
  for (auto& limb : out) {
    if (plus) {
      if (++limb != 0) break;
    } else {
      if (limb-- != 0) break;
    }
  }
  return out;
}

template <class F>
typename F::Elem power(const F& f, const typename F::Elem& base, std::span<const u64> e) {
  std::size_t bits = bit_length(e);
  if (bits == 0) return f.one();
  typename F::Elem acc = base;
  for (std::size_t i = bits - 1; i-- > 0;) {
    acc = f.sqr(acc);
    if (test_bit(e, i)) acc = f.mul(acc, base);
  }
  return acc;
}

inline mpz_class power(const MpzField& f, const mpz_class& base, std::span<const u64> e) {
  mpz_class exp, r;
  mpz_import(exp.get_mpz_t(), e.size(), -1, sizeof(u64), 0, 0, e.data());
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), f.modulus().get_mpz_t());
  return r;
}

/// Strong probable-prime test to the given base (already in field form).
template <class F>
bool strong_probable_prime(const F& f, const typename F::Elem& base, std::span<const u64> n) {
  std::vector<u64> nm1 = offset_by_one(n, false);
  std::size_t s = trailing_zeros(nm1);
  std::vector<u64> d = shift_right(nm1, s);
  const auto one = f.one();
  const auto minus_one = f.sub(f.zero(), one);
  auto x = power(f, base, d);
  if (F::equal(x, one) || F::equal(x, minus_one)) return true;
  for (std::size_t r = 1; r < s; ++r) {
    x = f.sqr(x);
    if (F::equal(x, minus_one)) return true;
    if (F::equal(x, one)) return false;
  }
  return false;
}

template <class F>
typename F::Elem signed_small(const F& f, long long k) {
  if (k >= 0) return f.from_small(static_cast<u64>(k));
  return f.sub(f.zero(), f.from_small(static_cast<u64>(-k)));
}

/// Jacobi symbol (a / b) for odd b > 0.
inline int jacobi(u64 a, u64 b) noexcept {
  int t = 1;
  a %= b;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      u64 r = b & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, b);
    if ((a & 3) == 3 && (b & 3) == 3) t = -t;
    a %= b;
  }
  return b == 1 ? t : 0;
}

/// Jacobi symbol (D / n) for odd |D| and an odd multi-limb n.
inline int jacobi_signed(long long D, std::span<const u64> n) noexcept {
  u64 k = static_cast<u64>(D < 0 ? -D : D);
  u64 n_mod4 = n[0] & 3;
  int t = 1;
  if (D < 0 && n_mod4 == 3) t = -t;  // (-1 / n)
  u64 n_mod_k = mpn_mod_1(reinterpret_cast<const mp_limb_t*>(n.data()),
                          static_cast<mp_size_t>(n.size()), k);
  // Reciprocity for odd k, n.
  if ((k & 3) == 3 && n_mod4 == 3) t = -t;
  return t * jacobi(n_mod_k, k);
}

/// Strong Lucas test with Selfridge parameters (P = 1, Q = (1 - D) / 4).
/// n is odd, not a perfect square, and larger than any D tried.
template <class F>
bool strong_lucas_probable_prime(const F& f, std::span<const u64> n) {
  long long D = 5;
  for (;;) {
    int j = jacobi_signed(D, n);
    if (j == -1) break;
    if (j == 0) return false;
    D = D > 0 ? -(D + 2) : -D + 2;
  }
  const long long Q = (1 - D) / 4;
  const auto Df = signed_small(f, D);
  const auto Qf = signed_small(f, Q);

  std::vector<u64> np1 = offset_by_one(n, true);
  std::size_t s = trailing_zeros(np1);
  std::vector<u64> d = shift_right(np1, s);

  auto U = f.one();
  auto V = f.one();  // V_1 = P
  auto Qk = Qf;
  for (std::size_t i = bit_length(d) - 1; i-- > 0;) {
    U = f.mul(U, V);
    V = f.sub(f.sqr(V), f.add(Qk, Qk));
    Qk = f.sqr(Qk);
    if (test_bit(d, i)) {
      auto U2 = f.half(f.add(U, V));
      V = f.half(f.add(f.mul(Df, U), V));
      U = U2;
      Qk = f.mul(Qk, Qf);
    }
  }
  if (F::is_zero(U) || F::is_zero(V)) return true;
  for (std::size_t r = 1; r < s; ++r) {
    V = f.sub(f.sqr(V), f.add(Qk, Qk));
    if (F::is_zero(V)) return true;
    Qk = f.sqr(Qk);
  }
  return false;
}

}  // namespace chainprime::detail
