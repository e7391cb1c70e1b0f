#pragma once

// Base-g digit sequences, chain values and mirror reflection.
//
// Digits are stored least-significant first, so digits()[i] is the
// coefficient of base^i. Everything that prints a sequence prints it
// most-significant first, the usual way numbers are written.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace chainprime {

class DigitSequence {
 public:
  explicit DigitSequence(unsigned base);
  DigitSequence(unsigned base, std::vector<unsigned> digits);

  unsigned base() const noexcept { return base_; }
  const std::vector<unsigned>& digits() const noexcept { return digits_; }
  unsigned operator[](std::size_t i) const { return digits_.at(i); }

  /// Number of stored digits, including high zeros.
  std::size_t size() const noexcept { return digits_.size(); }

  /// Index of the last non-zero digit plus one; 0 for the all-zero sequence.
  std::size_t length() const noexcept;

  void push_back(unsigned digit);
  void append(const DigitSequence& high);

  /// Most-significant first, digits above 9 written in brackets: "1[12]3".
  std::string to_string() const;

  friend bool operator==(const DigitSequence&, const DigitSequence&) = default;

 private:
  unsigned base_;
  std::vector<unsigned> digits_;
};

/// u(n) = sum_{i<n} d_i base^i together with the number of positions used.
struct ChainValue {
  mpz_class value;
  std::size_t ndigits = 0;
};

/// Throws std::out_of_range when n exceeds the stored digits.
ChainValue chain_value(const DigitSequence& seq, std::size_t n);

/// Least-significant-first expansion of v; v = 0 gives the empty sequence.
DigitSequence digits_of(const mpz_class& v, unsigned base);
DigitSequence digits_of(std::uint64_t v, unsigned base);

/// Digit reversal of s in the given base. A trailing zero of s becomes a
/// leading zero of the result and is lost, so mirror is an involution only
/// on values not divisible by base. Throws DomainError for s = 0.
mpz_class mirror(const mpz_class& s, unsigned base);
std::uint64_t mirror(std::uint64_t s, unsigned base);

/// Number of base-g digits of v (0 for v = 0).
unsigned digit_count(std::uint64_t v, unsigned base) noexcept;

/// base^exp, throwing DomainError if it does not fit in 64 bits.
std::uint64_t checked_pow(unsigned base, unsigned exp);

void require_base(unsigned base);

}  // namespace chainprime
