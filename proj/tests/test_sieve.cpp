#include <doctest.h>

#include "chainprime/errors.hpp"
#include "chainprime/primality.hpp"
#include "chainprime/sieve.hpp"

using namespace chainprime;

TEST_CASE("segmented sieve matches the serial sieve and the primality test") {
  RunOptions four;
  four.workers = 4;
  for (auto [lo, hi] : {std::pair{0ull, 1000ull}, std::pair{1ull, 2ull}, std::pair{999983ull, 2000003ull},
                        std::pair{(1ull << 40) - 5000, (1ull << 40) + 300000}}) {
    const auto par = sieve_interval(lo, hi, four);
    const auto ser = sieve_interval_serial(lo, hi);
    CHECK(par == ser);
    if (hi - lo <= 400000)
      for (std::uint64_t v = lo; v < hi; v += 7) REQUIRE(par.test(v) == is_prime(v));
  }
}

TEST_CASE("prime counts") {
  CHECK(count_primes(0, 100) == 25);
  CHECK(count_primes(0, 1000000) == 78498);
  CHECK(count_primes(8, 16) == 2);
  RunOptions small;
  small.mem_guard = 4096;  // forces many chunks
  CHECK(count_primes(0, 10000000, small) == 664579);
  const auto b = sieve_interval(100, 200);
  CHECK(b.count() == 21);
  CHECK(b.count(100, 110) == 4);  // 101 103 107 109
  std::vector<std::uint64_t> seen;
  b.for_each_prime(150, 170, [&](std::uint64_t p) { seen.push_back(p); });
  CHECK(seen == std::vector<std::uint64_t>{151, 157, 163, 167});
}

TEST_CASE("guards") {
  CHECK_THROWS_AS(sieve_interval(10, 10), DomainError);
  RunOptions tiny;
  tiny.mem_guard = 100;
  CHECK_THROWS_AS(sieve_interval(0, 1000, tiny), ResourceError);
  CHECK(small_primes(30) == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(isqrt(99) == 9);
  CHECK(isqrt(100) == 10);
  CHECK(isqrt(~0ull) == 4294967295ull);
}
