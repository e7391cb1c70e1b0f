#include <doctest.h>

#include "chainprime/digits.hpp"
#include "chainprime/errors.hpp"

using namespace chainprime;

TEST_CASE("chain values take the low digits") {
  DigitSequence d(10, {3, 1, 1, 2});
  CHECK(chain_value(d, 0).value == 0);
  CHECK(chain_value(d, 1).value == 3);
  CHECK(chain_value(d, 2).value == 13);
  CHECK(chain_value(d, 4).value == 2113);
  CHECK(chain_value(d, 4).ndigits == 4);
  CHECK_THROWS_AS(chain_value(d, 5), std::out_of_range);
}

TEST_CASE("digit sequences validate and print most significant first") {
  CHECK_THROWS_AS(DigitSequence(1), DomainError);
  CHECK_THROWS_AS(DigitSequence(10, {3, 10}), DomainError);
  DigitSequence d(16, {12, 0, 1});
  CHECK(d.to_string() == "10[12]");
  CHECK(DigitSequence(10, {5, 0, 0}).length() == 1);
  CHECK(DigitSequence(10, {0, 0}).length() == 0);
  CHECK(DigitSequence(10, {0, 0}).size() == 2);
}

TEST_CASE("digits_of round-trips through chain_value") {
  for (unsigned base : {2u, 3u, 10u, 17u}) {
    for (std::uint64_t v : {1ull, 7ull, 1000003ull, 18446744073709551557ull}) {
      auto d = digits_of(v, base);
      CHECK(chain_value(d, d.size()).value == mpz_class(std::to_string(v)));
      CHECK(digits_of(mpz_class(std::to_string(v)), base) == d);
    }
  }
  CHECK(digits_of(std::uint64_t{0}, 10).size() == 0);
}

TEST_CASE("mirror reverses the digit string") {
  CHECK(mirror(std::uint64_t{11}, 2) == 13);  // 1011 -> 1101
  CHECK(mirror(std::uint64_t{13}, 2) == 11);
  CHECK(mirror(std::uint64_t{2}, 2) == 1);    // trailing zero is lost
  CHECK(mirror(std::uint64_t{123}, 10) == 321);
  CHECK(mirror(std::uint64_t{120}, 10) == 21);
  CHECK(mirror(mpz_class("1234567890123456789012345"), 10) == mpz_class("5432109876543210987654321"));
  CHECK_THROWS_AS(mirror(std::uint64_t{0}, 10), DomainError);
  // 19-digit value whose reversal does not fit in 64 bits.
  CHECK_THROWS_AS(mirror(std::uint64_t{18000000000000000009ull}, 10), DomainError);
  for (std::uint64_t v = 1; v < 5000; ++v) {
    if (v % 7 == 0) continue;
    CHECK(mirror(mirror(v, 7), 7) == v);
    CHECK(mirror(v, 7) == mirror(mpz_class(static_cast<unsigned long>(v)), 7));
  }
}

TEST_CASE("checked_pow and digit_count") {
  CHECK(checked_pow(10, 19) == 10000000000000000000ull);
  CHECK_THROWS_AS(checked_pow(10, 20), DomainError);
  CHECK(digit_count(0, 10) == 0);
  CHECK(digit_count(999, 10) == 3);
  CHECK(digit_count(1000, 10) == 4);
  CHECK(digit_count(8, 2) == 4);
}
