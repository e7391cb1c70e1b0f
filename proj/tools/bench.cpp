// Serial reference kernels against the OpenMP ones. Prints CSV:
// kernel,case,impl,workers,reps,best_seconds,result

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "chainprime/chains.hpp"
#include "chainprime/mirror.hpp"
#include "chainprime/report.hpp"
#include "chainprime/sieve.hpp"

using namespace chainprime;

namespace {

struct Timing {
  double best = 0;
  std::uint64_t result = 0;
};

Timing time_best(int reps, const std::function<std::uint64_t()>& fn) {
  Timing t;
  for (int r = 0; r < reps; ++r) {
    auto start = std::chrono::steady_clock::now();
    t.result = fn();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r == 0 || s < t.best) t.best = s;
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chainprime kernel benchmark"};
  unsigned workers = static_cast<unsigned>(omp_get_max_threads());
  int reps = 3;
  unsigned sieve_bits = 26;
  unsigned chain_base = 10, chain_n = 12;
  unsigned mirror_n = 22;
  app.add_option("--workers", workers, "threads for the parallel kernels");
  app.add_option("--reps", reps, "repetitions; the best time is reported");
  app.add_option("--sieve-bits", sieve_bits, "sieve [2^(b-1), 2^b)");
  app.add_option("--chain-g", chain_base, "base for the chain kernel");
  app.add_option("--chain-n", chain_n, "length for the chain kernel");
  app.add_option("--mirror-n", mirror_n, "binary digits for the mirror scan");
  CLI11_PARSE(app, argc, argv);

  RunOptions par;
  par.workers = workers;
  RunOptions one;

  CsvTable csv({"kernel", "case", "impl", "workers", "reps", "best_seconds", "result"});
  auto add = [&](const std::string& kernel, const std::string& what, const std::string& impl, unsigned w,
                 const Timing& t) {
    csv.add_row({kernel, what, impl, std::uint64_t{w}, std::uint64_t(reps), t.best, t.result});
  };

  const std::uint64_t lo = std::uint64_t{1} << (sieve_bits - 1), hi = lo * 2;
  const std::string sieve_case = "2^" + std::to_string(sieve_bits);
  add("sieve", sieve_case, "serial", 1,
      time_best(reps, [&] { return sieve_interval_serial(lo, hi).count(); }));
  add("sieve", sieve_case, "openmp", 1, time_best(reps, [&] { return sieve_interval(lo, hi, one).count(); }));
  add("sieve", sieve_case, "openmp", workers,
      time_best(reps, [&] { return sieve_interval(lo, hi, par).count(); }));

  const std::string chain_case = "g=" + std::to_string(chain_base) + " N=" + std::to_string(chain_n);
  add("chains", chain_case, "serial", 1, time_best(reps, [&] {
        return count_chains_serial(chain_base, chain_n, Variant::ZerosAllowed).at(chain_n);
      }));
  add("chains", chain_case, "openmp", 1, time_best(reps, [&] {
        return count_chains(chain_base, chain_n, Variant::ZerosAllowed, one).at(chain_n);
      }));
  add("chains", chain_case, "openmp", workers, time_best(reps, [&] {
        return count_chains(chain_base, chain_n, Variant::ZerosAllowed, par).at(chain_n);
      }));

  const std::string mirror_case = "g=2 N=" + std::to_string(mirror_n);
  add("mirror", mirror_case, "serial", 1,
      time_best(reps, [&] { return count_mirror_primes_serial(2, mirror_n).M; }));
  add("mirror", mirror_case, "openmp", 1,
      time_best(reps, [&] { return count_mirror_primes(2, mirror_n, one).M; }));
  add("mirror", mirror_case, "openmp", workers,
      time_best(reps, [&] { return count_mirror_primes(2, mirror_n, par).M; }));

  OutputHeader header{"bench", {{"reps", std::to_string(reps)}}, 0};
  csv.write(std::cout, header);
  return 0;
}
