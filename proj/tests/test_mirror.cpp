#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "chainprime/digits.hpp"
#include "chainprime/errors.hpp"
#include "chainprime/factor.hpp"
#include "chainprime/mirror.hpp"
#include "chainprime/primality.hpp"

using namespace chainprime;

TEST_CASE("mirror prime counts") {
  CHECK(count_mirror_primes(2, 2).M == 1);
  CHECK(count_mirror_primes(2, 3).M == 2);
  CHECK(count_mirror_primes(2, 4).M == 2);
  CHECK(count_mirror_primes(2, 4).total_primes == 2);
  CHECK(count_mirror_primes(10, 2).M == 9);  // 11 13 17 31 37 71 73 79 97
  RunOptions chunked;
  chunked.mem_guard = 1000;
  chunked.workers = 3;
  for (auto [g, N] : {std::pair{2u, 18u}, std::pair{3u, 11u}, std::pair{10u, 5u}, std::pair{7u, 7u}}) {
    const auto ref = count_mirror_primes_serial(g, N);
    const auto a = count_mirror_primes(g, N);
    const auto b = count_mirror_primes(g, N, chunked);
    CHECK(a.M == ref.M);
    CHECK(a.total_primes == ref.total_primes);
    CHECK(b.M == ref.M);
    CHECK(b.total_primes == ref.total_primes);
  }
}

TEST_CASE("residue histograms") {
  const auto r = residue_counts(2, 3, std::uint64_t{3});
  CHECK(r.counts == std::vector<std::uint64_t>{0, 1, 1});
  for (unsigned N = 3; N <= 16; ++N) {
    const std::uint64_t moduli[] = {2, 3, 12};
    const auto rs = residue_counts(2, N, moduli);
    CHECK(rs[0].counts[0] == 0);
    CHECK(rs[1].counts[0] == 0);
    for (const auto& rc : rs)
      CHECK(std::accumulate(rc.counts.begin(), rc.counts.end(), std::uint64_t{0}) == rc.total_primes);
    CHECK(residue_count(2, N, 7, 3) == residue_counts(2, N, std::uint64_t{7}).counts[3]);
  }
  // p = 3 is its own mirror.
  CHECK(residue_counts(2, 2, std::uint64_t{3}).counts[0] == 1);

  // Direct oracle for base 10.
  std::vector<std::uint64_t> direct(11, 0);
  for (std::uint64_t p = 1000; p < 10000; ++p)
    if (is_prime(p)) ++direct[mirror(p, 10) % 11];
  CHECK(residue_counts(10, 4, std::uint64_t{11}).counts == direct);
  CHECK_THROWS_AS(residue_counts(2, 10, std::uint64_t{2000000}), ResourceError);
  CHECK(residue_count(2, 10, 2000000, 5) == 0);
}

TEST_CASE("divisor statistics of mirrors") {
  const auto s3 = mirror_stats(2, 3);
  REQUIRE(s3.sigma_exact.has_value());
  CHECK(*s3.sigma_exact == mpq_class(82, 35));
  CHECK(s3.omega_product == 2);
  const auto s4 = mirror_stats(2, 4);
  CHECK(*s4.sigma_exact == mpq_class(14, 13) + mpq_class(12, 11));
  CHECK(s4.omega_product == 2);
  CHECK(s4.nu.at(11) == 1);
  CHECK(s4.nu.at(13) == 1);
  CHECK(s3.sigma_decimal(10) == "2.342857142");

  RunOptions four;
  four.workers = 4;
  const auto a = mirror_stats(2, 16);
  const auto b = mirror_stats(2, 16, false, four);
  CHECK(a.sigma_fixed == b.sigma_fixed);
  CHECK(*a.sigma_exact == *b.sigma_exact);
  CHECK(a.nu == b.nu);
  CHECK(std::abs(a.sigma_exact->get_d() - a.sigma_sum()) < 1e-12);
  CHECK(a.sigma_sum() >= double(a.total_primes));

  // omega of the product from scratch.
  std::set<std::uint64_t> distinct;
  for (std::uint64_t p = 1 << 11; p < (1 << 12); ++p)
    if (is_prime(p))
      for (auto l : prime_divisors(mirror(p, 2))) distinct.insert(l);
  CHECK(mirror_stats(2, 12).omega_product == distinct.size());

  const auto top = mirror_stats(10, 4, true);
  CHECK(top.total_primes == 135);  // primes in [1000, 2000)
}

TEST_CASE("mirror-prime heuristic") {
  CHECK(heuristic_m2(3).heuristic == doctest::Approx(3.0));
  CHECK(heuristic_m2(4).heuristic == doctest::Approx(1.5));
  CHECK(heuristic_m2(3).ratio == doctest::Approx(1.5));
  CHECK_THROWS_AS(heuristic_m2(1), DomainError);
}

TEST_CASE("envelope fit") {
  const std::uint64_t moduli[] = {3, 5, 8};
  const auto fit = envelope_constant(2, 6, 12, 9, moduli);
  CHECK(fit.rows.size() == 7 * 3);
  CHECK(fit.fitted > 0);
  for (const auto& row : fit.rows) CHECK(row.constant > 0);
}
