#include "chainprime/digits.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

#include "chainprime/errors.hpp"

namespace chainprime {

void require_base(unsigned base) {
  if (base < 2) throw DomainError("base must be at least 2, got " + std::to_string(base));
}

DigitSequence::DigitSequence(unsigned base) : base_(base) { require_base(base); }

DigitSequence::DigitSequence(unsigned base, std::vector<unsigned> digits)
    : base_(base), digits_(std::move(digits)) {
  require_base(base);
  for (unsigned d : digits_)
    if (d >= base_)
      throw DomainError("digit " + std::to_string(d) + " out of range for base " +
                        std::to_string(base_));
}

std::size_t DigitSequence::length() const noexcept {
  auto it = std::find_if(digits_.rbegin(), digits_.rend(), [](unsigned d) { return d != 0; });
  return static_cast<std::size_t>(digits_.rend() - it);
}

void DigitSequence::push_back(unsigned digit) {
  if (digit >= base_) throw DomainError("digit out of range for base " + std::to_string(base_));
  digits_.push_back(digit);
}

void DigitSequence::append(const DigitSequence& high) {
  if (high.base_ != base_) throw DomainError("cannot append digits of a different base");
  digits_.insert(digits_.end(), high.digits_.begin(), high.digits_.end());
}

std::string DigitSequence::to_string() const {
  if (digits_.empty()) return "0";
  std::string out;
  for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
    if (*it < 10) {
      out.push_back(static_cast<char>('0' + *it));
    } else {
      out += '[' + std::to_string(*it) + ']';
    }
  }
  return out;
}

ChainValue chain_value(const DigitSequence& seq, std::size_t n) {
  if (n > seq.size())
    throw std::out_of_range("chain_value: n = " + std::to_string(n) + " exceeds " +
                            std::to_string(seq.size()) + " stored digits");
  // Horner from the top position down: u(n) = d_{n-1} g^{n-1} + ... + d_0.
  mpz_class value = 0;
  for (std::size_t i = n; i-- > 0;) {
    value *= seq.base();
    value += seq[i];
  }
  return {value, n};
}

DigitSequence digits_of(const mpz_class& v, unsigned base) {
  require_base(base);
  if (v < 0) throw DomainError("digits_of: negative value");
  std::vector<unsigned> digits;
  mpz_class rest = v;
  while (rest != 0) {
    digits.push_back(static_cast<unsigned>(mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), base)));
  }
  return DigitSequence(base, std::move(digits));
}

DigitSequence digits_of(std::uint64_t v, unsigned base) {
  require_base(base);
  std::vector<unsigned> digits;
  for (; v != 0; v /= base) digits.push_back(static_cast<unsigned>(v % base));
  return DigitSequence(base, std::move(digits));
}

mpz_class mirror(const mpz_class& s, unsigned base) {
  require_base(base);
  if (s <= 0) throw DomainError("mirror: s must be positive");
  mpz_class rest = s;
  mpz_class out = 0;
  while (rest != 0) {
    unsigned long d = mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), base);
    out *= base;
    out += d;
  }
  return out;
}

std::uint64_t mirror(std::uint64_t s, unsigned base) {
  require_base(base);
  if (s == 0) throw DomainError("mirror: s must be positive");
  if (base == 2) {
    // Bit reversal within the bit length of s.
    unsigned width = static_cast<unsigned>(std::bit_width(s));
    std::uint64_t r = s;
    r = ((r >> 1) & 0x5555555555555555ULL) | ((r & 0x5555555555555555ULL) << 1);
    r = ((r >> 2) & 0x3333333333333333ULL) | ((r & 0x3333333333333333ULL) << 2);
    r = ((r >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((r & 0x0F0F0F0F0F0F0F0FULL) << 4);
    r = __builtin_bswap64(r);
    return r >> (64 - width);
  }
  std::uint64_t out = 0;
  for (; s != 0; s /= base) {
    if (__builtin_mul_overflow(out, base, &out) || __builtin_add_overflow(out, s % base, &out))
      throw DomainError("mirror: reflection does not fit in 64 bits");
  }
  return out;
}

unsigned digit_count(std::uint64_t v, unsigned base) noexcept {
  unsigned n = 0;
  for (; v != 0; v /= base) ++n;
  return n;
}

std::uint64_t checked_pow(unsigned base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base)
      throw DomainError(std::to_string(base) + "^" + std::to_string(exp) +
                        " does not fit in 64 bits");
    r *= base;
  }
  return r;
}

}  // namespace chainprime
