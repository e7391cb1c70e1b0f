#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "chainprime/chains.hpp"
#include "chainprime/primality.hpp"

using namespace chainprime;

TEST_CASE("varpi counts prime prefixes") {
  CHECK(varpi(DigitSequence(2, {1, 1, 1}), 3) == 2);
  CHECK(varpi(DigitSequence(10, {3, 1}), 2) == 2);
  CHECK(varpi(DigitSequence(10, {0, 0, 0, 0}), 4) == 0);
  CHECK_THROWS_AS(varpi(DigitSequence(10, {3}), 2), std::out_of_range);
}

TEST_CASE("small counts by hand") {
  CHECK(count_chains(10, 1, Variant::ZerosAllowed).at(1) == 4);
  CHECK(count_chains(10, 2, Variant::ZerosAllowed).at(2) == 11);
  auto t2 = count_chains(2, 3, Variant::ZerosAllowed);
  CHECK(t2.counts == std::vector<std::uint64_t>{1, 2, 1});
  CHECK(brute_force_count(3, 1, Variant::ZerosAllowed) == 1);
  CHECK(brute_force_count(2, 2, Variant::ZerosAllowed) == 2);
  CHECK(brute_force_count(10, 2, Variant::ZerosAllowed) == 11);
  CHECK_THROWS_AS(count_chains(2, 5, Variant::NonzeroOnly), DomainError);
  CHECK_THROWS_AS(count_chains(1, 5, Variant::ZerosAllowed), DomainError);
  CHECK_THROWS_AS(brute_force_count(10, 8, Variant::ZerosAllowed), ResourceError);
}

TEST_CASE("enumeration matches brute force whenever g^N <= 2^20") {
  for (unsigned g : {2u, 3u, 5u, 10u}) {
    for (Variant v : {Variant::ZerosAllowed, Variant::NonzeroOnly}) {
      if (v == Variant::NonzeroOnly && g < 3) continue;
      unsigned n_max = 1;
      while (std::pow(double(g), n_max + 1) <= double(1 << 20)) ++n_max;
      const auto table = count_chains(g, n_max, v);
      for (unsigned N = 1; N <= n_max; ++N) {
        CAPTURE(g);
        CAPTURE(N);
        CHECK(table.at(N) == brute_force_count(g, N, v));
      }
    }
  }
}

TEST_CASE("parallel kernel matches the serial reference past the sieve threshold") {
  for (auto [g, n, v] : {std::tuple{10u, 9u, Variant::ZerosAllowed}, std::tuple{7u, 10u, Variant::ZerosAllowed},
                         std::tuple{16u, 8u, Variant::NonzeroOnly}, std::tuple{2u, 40u, Variant::ZerosAllowed},
                         std::tuple{3u, 30u, Variant::ZerosAllowed}}) {
    CAPTURE(g);
    CHECK(count_chains(g, n, v) == count_chains_serial(g, n, v));
  }
}

TEST_CASE("results do not depend on the worker count") {
  RunOptions one, four;
  four.workers = 4;
  CHECK(count_chains(10, 11, Variant::ZerosAllowed, one) == count_chains(10, 11, Variant::ZerosAllowed, four));
  Frontier a = initial_frontier(17, Variant::NonzeroOnly), b = a;
  for (int i = 0; i < 6; ++i) {
    expand_level(a, one);
    expand_level(b, four);
  }
  CHECK(a == b);
}

TEST_CASE("frontier states satisfy the chain definition") {
  Frontier f = initial_frontier(10, Variant::ZerosAllowed);
  for (int i = 0; i < 5; ++i) expand_level(f);
  mpz_class bound = 1000000;
  for (const auto& s : f.to_states()) {
    REQUIRE(s.length == 6);
    REQUIRE(s.value < bound);
    mpz_class modulus = 1;
    for (unsigned k = 1; k <= 6; ++k) {
      modulus *= 10;
      REQUIRE(is_prime(mpz_class(s.value % modulus)));
    }
  }
}

TEST_CASE("non-zero-digit chains die out") {
  // Totals are the known counts of left-truncatable primes per base.
  struct Case {
    unsigned g, first_zero;
    std::uint64_t total;
  };
  for (auto c : {Case{10, 25, 4260}, Case{16, 26, 27982}, Case{17, 12, 362}, Case{3, 4, 3}}) {
    CAPTURE(c.g);
    const auto table = count_chains(c.g, 60, Variant::NonzeroOnly);
    REQUIRE(table.first_zero().has_value());
    CHECK(*table.first_zero() == c.first_zero);
    CHECK(std::accumulate(table.counts.begin(), table.counts.end(), std::uint64_t{0}) == c.total);
    for (unsigned N = *table.first_zero(); N <= table.n_max(); ++N) CHECK(table.at(N) == 0);
  }
}

TEST_CASE("checkpoint round trip and resume after a guard stop") {
  const auto full = count_chains(10, 12, Variant::ZerosAllowed);
  RunOptions tight;
  tight.mem_guard = 200000;  // bytes; trips a few levels in
  Frontier stopped;
  try {
    count_chains(10, 12, Variant::ZerosAllowed, tight);
    FAIL("expected a guard stop");
  } catch (const FrontierGuardExceeded& e) {
    stopped = e.frontier();
  }
  CHECK(stopped.level >= 2);
  CHECK(stopped.level < 12);
  std::stringstream file;
  write_checkpoint(file, stopped);
  const Frontier back = read_checkpoint(file);
  CHECK(back == stopped);
  CHECK(resume_chains(back, 12) == full);

  std::istringstream bad("g=10 variant=zeros level=2 counts=4\n13 2\n");
  CHECK_THROWS_AS(read_checkpoint(bad), DomainError);
}

TEST_CASE("greedy construction") {
  auto t10 = greedy_sequence(10, 4);
  REQUIRE(t10.milestones.size() >= 4);
  CHECK(t10.milestones[0].value == 3);
  CHECK(t10.milestones[1].value == 13);
  CHECK(t10.milestones[2].value == 113);
  CHECK(t10.milestones[3].value == 2113);

  auto t2 = greedy_sequence(2, 2);
  REQUIRE(!t2.milestones.empty());
  CHECK(t2.milestones[0].value == 3);
  CHECK(t2.milestones[0].n == 2);

  for (unsigned g : {2u, 3u, 10u, 12u}) {
    auto t = greedy_sequence(g, 120);
    CHECK(t.digits.size() >= 120);
    unsigned prev = 0;
    mpz_class modulus;
    for (std::size_t i = 0; i < t.milestones.size(); ++i) {
      const auto& ms = t.milestones[i];
      CHECK(ms.n > prev);
      CHECK(is_prime(ms.value, PrimalityConfig{4, 1}));
      CHECK(ms.value == chain_value(t.digits, ms.n).value);
      CHECK(ms.varpi == varpi(t.digits, ms.n));
      CHECK(ms.varpi >= greedy_baseline(ms.n));
      if (i > 0) {
        mpz_ui_pow_ui(modulus.get_mpz_t(), g, prev);
        CHECK(ms.value % modulus == t.milestones[i - 1].value);
      }
      prev = ms.n;
    }
  }
}

TEST_CASE("greedy baseline") {
  CHECK(greedy_baseline(1) == 0);
  CHECK(greedy_baseline(2) == 0);
  CHECK(greedy_baseline(3) == 1);
  CHECK(greedy_baseline(300) == 6);  // log 300 / log 2.4 = 6.5
}
