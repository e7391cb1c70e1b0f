#pragma once

// Fixed-width Montgomery arithmetic modulo an odd n.
//
// Mont64 handles n < 2^64; MontN<L> handles L-limb moduli with the CIOS
// product. Elements are kept in Montgomery form (x * R mod n) and never
// leave it: halving and small constants are computed directly on the
// representatives, so no R^2 table is needed for the multi-limb case.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include <gmp.h>

namespace chainprime::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// n^{-1} mod 2^64 for odd n (Newton iteration, 3 -> 96 correct bits).
constexpr u64 inverse_mod_2_64(u64 n) noexcept {
  u64 x = n;
  for (int i = 0; i < 5; ++i) x *= 2 - n * x;
  return x;
}

class Mont64 {
 public:
  using Elem = u64;

  explicit Mont64(u64 n) noexcept
      : n_(n), ninv_(inverse_mod_2_64(n)), one_((0 - n) % n), r2_(static_cast<u64>(u128(one_) * one_ % n)) {}

  u64 modulus() const noexcept { return n_; }
  Elem one() const noexcept { return one_; }
  Elem zero() const noexcept { return 0; }
  Elem to(u64 x) const noexcept { return mul(x % n_, r2_); }
  u64 from(Elem a) const noexcept { return redc(a); }
  Elem from_small(u64 k) const noexcept { return to(k); }

  Elem mul(Elem a, Elem b) const noexcept { return redc(u128(a) * b); }
  Elem sqr(Elem a) const noexcept { return redc(u128(a) * a); }
  Elem add(Elem a, Elem b) const noexcept {
    u64 r = a + b;
    if (r < a || r >= n_) r -= n_;
    return r;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a - b + n_; }
  Elem half(Elem a) const noexcept { return (a & 1) ? (a >> 1) + (n_ >> 1) + 1 : a >> 1; }
  static bool equal(Elem a, Elem b) noexcept { return a == b; }
  static bool is_zero(Elem a) noexcept { return a == 0; }

 private:
  // (t - m n) / 2^64 with m = lo(t) n^{-1}; never overflows since lo(t) = lo(m n).
  u64 redc(u128 t) const noexcept {
    u64 m = static_cast<u64>(t) * ninv_;
    u64 mn_hi = static_cast<u64>((u128(m) * n_) >> 64);
    u64 t_hi = static_cast<u64>(t >> 64);
    u64 r = t_hi - mn_hi;
    if (t_hi < mn_hi) r += n_;
    return r;
  }

  u64 n_;
  u64 ninv_;
  u64 one_;
  u64 r2_;
};

template <std::size_t L>
class MontN {
  static_assert(L >= 2);

 public:
  using Elem = std::array<u64, L>;

  /// n must be odd and exactly L limbs (top limb non-zero).
  explicit MontN(std::span<const u64, L> n) noexcept {
    for (std::size_t i = 0; i < L; ++i) n_[i] = n[i];
    ninv_ = 0 - inverse_mod_2_64(n_[0]);
    // R mod n with R = 2^(64 L).
    mp_limb_t num[L + 1] = {};
    num[L] = 1;
    mp_limb_t q[2];
    mp_limb_t r[L];
    mpn_tdiv_qr(q, r, 0, num, L + 1, reinterpret_cast<const mp_limb_t*>(n_.data()), L);
    for (std::size_t i = 0; i < L; ++i) one_[i] = r[i];
  }

  const Elem& modulus() const noexcept { return n_; }
  Elem one() const noexcept { return one_; }
  Elem zero() const noexcept { return Elem{}; }

  /// k R mod n by double-and-add on R mod n.
  Elem from_small(u64 k) const noexcept {
    Elem acc{};
    Elem base = one_;
    for (; k != 0; k >>= 1) {
      if (k & 1) acc = add(acc, base);
      base = add(base, base);
    }
    return acc;
  }

  Elem mul(const Elem& a, const Elem& b) const noexcept {
    u64 t[L + 2] = {};
    for (std::size_t i = 0; i < L; ++i) {
      u64 c = 0;
      for (std::size_t j = 0; j < L; ++j) {
        u128 s = u128(a[j]) * b[i] + t[j] + c;
        t[j] = static_cast<u64>(s);
        c = static_cast<u64>(s >> 64);
      }
      u128 s = u128(t[L]) + c;
      t[L] = static_cast<u64>(s);
      t[L + 1] = static_cast<u64>(s >> 64);

      u64 m = t[0] * ninv_;
      s = u128(m) * n_[0] + t[0];
      c = static_cast<u64>(s >> 64);
      for (std::size_t j = 1; j < L; ++j) {
        s = u128(m) * n_[j] + t[j] + c;
        t[j - 1] = static_cast<u64>(s);
        c = static_cast<u64>(s >> 64);
      }
      s = u128(t[L]) + c;
      t[L - 1] = static_cast<u64>(s);
      t[L] = t[L + 1] + static_cast<u64>(s >> 64);
    }
    Elem r;
    for (std::size_t i = 0; i < L; ++i) r[i] = t[i];
    if (t[L] != 0 || !less(r, n_)) sub_in_place(r, n_);
    return r;
  }
  Elem sqr(const Elem& a) const noexcept { return mul(a, a); }

  Elem add(const Elem& a, const Elem& b) const noexcept {
    Elem r;
    u64 carry = 0;
    for (std::size_t i = 0; i < L; ++i) {
      u128 s = u128(a[i]) + b[i] + carry;
      r[i] = static_cast<u64>(s);
      carry = static_cast<u64>(s >> 64);
    }
    if (carry || !less(r, n_)) sub_in_place(r, n_);
    return r;
  }

  Elem sub(const Elem& a, const Elem& b) const noexcept {
    Elem r = a;
    if (sub_in_place(r, b)) add_in_place(r, n_);
    return r;
  }

  Elem half(const Elem& a) const noexcept {
    Elem r = a;
    u64 carry = 0;
    if (r[0] & 1) carry = add_in_place(r, n_);
    for (std::size_t i = 0; i + 1 < L; ++i) r[i] = (r[i] >> 1) | (r[i + 1] << 63);
    r[L - 1] = (r[L - 1] >> 1) | (carry << 63);
    return r;
  }

  static bool equal(const Elem& a, const Elem& b) noexcept { return a == b; }
  static bool is_zero(const Elem& a) noexcept {
    for (u64 x : a)
      if (x) return false;
    return true;
  }

 private:
  static bool less(const Elem& a, const Elem& b) noexcept {
    for (std::size_t i = L; i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
  // Returns the borrow.
  static u64 sub_in_place(Elem& a, const Elem& b) noexcept {
    u64 borrow = 0;
    for (std::size_t i = 0; i < L; ++i) {
      u128 d = u128(a[i]) - b[i] - borrow;
      a[i] = static_cast<u64>(d);
      borrow = static_cast<u64>(d >> 64) ? 1 : 0;
    }
    return borrow;
  }
  // Returns the carry.
  static u64 add_in_place(Elem& a, const Elem& b) noexcept {
    u64 carry = 0;
    for (std::size_t i = 0; i < L; ++i) {
      u128 s = u128(a[i]) + b[i] + carry;
      a[i] = static_cast<u64>(s);
      carry = static_cast<u64>(s >> 64);
    }
    return carry;
  }

  Elem n_{};
  u64 ninv_ = 0;
  Elem one_{};
};

}  // namespace chainprime::detail
