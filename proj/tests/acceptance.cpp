// Acceptance run: one PASS/FAIL line per criterion. Tolerances and the
// values we expect where the published numbers do not reproduce are pinned
// below. Exit status is non-zero only for an unexplained failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chainprime/chains.hpp"
#include "chainprime/mirror.hpp"
#include "chainprime/primality.hpp"
#include "chainprime/theory.hpp"
#include "cli.hpp"

using namespace chainprime;

namespace {

// Tolerances.
constexpr double kConstSeconds = 1.0;        // criteria 1-3
constexpr double kRhoLo2 = 1.00, kRhoHi2 = 1.09;
constexpr double kRhoLo10 = 2.0, kRhoHi10 = 2.5;
constexpr unsigned kRhoN = 50;
constexpr std::uint64_t kRhoGuard10 = std::uint64_t{1} << 26;  // frontier bytes for g = 10
constexpr double kRatioLo = 0.5, kRatioHi = 2.0;
constexpr double kSigmaFactor = 2.0;
constexpr double kEnvelopeSlack = 1.25;
constexpr unsigned kGreedyDigits = 300;
constexpr unsigned kGreedyRounds = 16;

struct Outcome {
  bool pass = false;
  std::string detail;
  // Set when the failure is the recorded, understood one.
  bool expected_failure = false;
};

struct CliResult {
  int code;
  std::string out;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  args.push_back("--quiet");
  int code = cli::run(args, out, err);
  return {code, out.str()};
}

// Rows of a CSV emitted by the tool, header comments and column row dropped.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  bool columns = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!columns) {
      columns = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

// ------------------------------------------------------------------ 1-3

Outcome criterion1() {
  struct Row {
    unsigned g;
    double value;
    unsigned m;
  };
  Outcome o{true, ""};
  auto t0 = std::chrono::steady_clock::now();
  for (auto r : {Row{2, 1.876, 16}, Row{3, 2.622, 7}, Row{5, 3.947, 4}, Row{10, 8.441, 6}}) {
    const auto got = gamma_g(r.g);
    const double truncated = std::floor(got.value * 1000) / 1000;
    const bool ok = std::abs(truncated - r.value) < 1e-9 && got.m_star == r.m;
    o.pass = o.pass && ok;
    o.detail += "g=" + std::to_string(r.g) + ":" + fmt(got.value, 7) + "@m=" + std::to_string(got.m_star) + " ";
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.pass = o.pass && s < kConstSeconds;
  o.detail += "(" + fmt(s, 3) + " s)";
  return o;
}

Outcome criterion2() {
  struct Row {
    unsigned g, s, m;
    std::uint64_t q, phi;
  };
  Outcome o{true, ""};
  bool only_g10 = true;
  auto t0 = std::chrono::steady_clock::now();
  for (auto r : {Row{2, 2, 3, 15, 5}, Row{3, 1, 1, 2, 2}, Row{5, 2, 1, 6, 2}, Row{10, 2, 1, 21, 6}}) {
    const auto w = theta_g(r.g, r.s, r.m);
    const bool ok = w.q == r.q && w.phi == r.phi;
    if (!ok && r.g != 10) only_g10 = false;
    o.pass = o.pass && ok;
    o.detail += "phi(" + std::to_string(w.q) + "," + std::to_string(checked_pow(r.g, r.m)) + ")=" +
                std::to_string(w.phi) + (ok ? "" : " [published " + std::to_string(r.phi) + "]") + " ";
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.pass = o.pass && s < kConstSeconds;
  o.detail += "(" + fmt(s, 3) + " s)";
  // The window 16..25 has seven integers prime to 21.
  o.expected_failure = !o.pass && only_g10 && theta_g(10, 2, 1).phi == 7 && s < kConstSeconds;
  if (o.expected_failure) o.detail += "; by the definition theta_10 = 7, not 6";
  return o;
}

Outcome criterion3() {
  Outcome o{true, ""};
  auto t0 = std::chrono::steady_clock::now();
  for (auto [g, want] : std::vector<std::pair<unsigned, unsigned>>{{16, 29}, {17, 16}, {18, 47}, {20, 43}, {22, 40}}) {
    const unsigned got = n_g(g);
    o.pass = o.pass && got == want;
    o.detail += "N_" + std::to_string(g) + "=" + std::to_string(got) + " ";
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.pass = o.pass && s < kConstSeconds;
  o.detail += "(" + fmt(s, 3) + " s)";
  return o;
}

// ------------------------------------------------------------------ 4

const std::vector<unsigned> kExtinctionBases{16, 17, 18, 20, 22};
const std::map<unsigned, unsigned> kPublishedExtinction{{16, 27}, {17, 14}, {18, 43}, {20, 38}, {22, 37}};
// Exhaustive enumeration; totals agree with the known counts of
// left-truncatable primes in these bases.
const std::map<unsigned, unsigned> kComputedExtinction{{16, 26}, {17, 12}, {18, 44}, {20, 38}, {22, 38}};

std::vector<std::string> extinction_args(unsigned g, unsigned workers) {
  return {"chains", "count", "--g", std::to_string(g), "--variant", "nonzero", "--n-max", "60",
          "--workers", std::to_string(workers)};
}

Outcome criterion4(std::map<unsigned, std::string>& outputs) {
  Outcome o{true, ""};
  bool matches_computed = true;
  for (unsigned g : kExtinctionBases) {
    auto r = cli(extinction_args(g, 1));
    outputs[g] = r.out;
    unsigned first_zero = 0;
    for (const auto& row : csv_rows(r.out))
      if (row.at(3) == "0") {
        first_zero = static_cast<unsigned>(std::stoul(row.at(2)));
        break;
      }
    const bool ok = r.code == 0 && first_zero == kPublishedExtinction.at(g);
    matches_computed = matches_computed && first_zero == kComputedExtinction.at(g);
    o.pass = o.pass && ok;
    o.detail += "g=" + std::to_string(g) + ":" + std::to_string(first_zero) +
                (ok ? "" : "[published " + std::to_string(kPublishedExtinction.at(g)) + "]") + " ";
  }
  o.expected_failure = !o.pass && matches_computed;
  if (o.expected_failure) o.detail += "; published values do not reproduce (see README)";
  return o;
}

// ------------------------------------------------------------------ 5

Outcome criterion5() {
  Outcome o{true, ""};
  unsigned cases = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (unsigned g : {2u, 3u, 5u, 10u}) {
    for (Variant v : {Variant::ZerosAllowed, Variant::NonzeroOnly}) {
      if (v == Variant::NonzeroOnly && g < 3) continue;
      unsigned n_max = 0;
      for (std::uint64_t p = g; p <= (std::uint64_t{1} << 20); p *= g) ++n_max;
      const auto table = count_chains(g, n_max, v);
      for (unsigned N = 1; N <= n_max; ++N, ++cases)
        if (table.at(N) != brute_force_count(g, N, v)) {
          o.pass = false;
          o.detail += "mismatch g=" + std::to_string(g) + " N=" + std::to_string(N) + " ";
        }
    }
  }
  const bool anchors = count_chains(10, 2, Variant::ZerosAllowed).at(2) == 11 &&
                       count_chains(2, 3, Variant::ZerosAllowed).at(2) == 2 &&
                       count_chains(2, 3, Variant::ZerosAllowed).at(3) == 1;
  o.pass = o.pass && anchors;
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.pass = o.pass && s < 60;
  o.detail += std::to_string(cases) + " (g, variant, N) cases; P_10(2)=11 P_2(2)=2 P_2(3)=1 " +
              (anchors ? "ok" : "WRONG") + " (" + fmt(s, 3) + " s)";
  return o;
}

// ------------------------------------------------------------------ 6

std::vector<std::string> rho_args(unsigned g, unsigned workers, const std::string& ckpt) {
  std::vector<std::string> a{"chains", "count", "--g", std::to_string(g), "--n-max", std::to_string(kRhoN),
                             "--workers", std::to_string(workers)};
  if (g == 10) {
    a.insert(a.end(), {"--mem-guard", std::to_string(kRhoGuard10), "--checkpoint", ckpt});
  }
  return a;
}

Outcome criterion6(std::map<unsigned, std::string>& outputs, const std::string& ckpt) {
  Outcome o;
  auto r2 = cli(rho_args(2, 1, ckpt));
  outputs[2] = r2.out;
  CountTable t2{2, Variant::ZerosAllowed, {}};
  for (const auto& row : csv_rows(r2.out)) t2.counts.push_back(std::stoull(row.at(3)));
  const auto rho2 = rho_estimate(t2);
  const bool ok2 = r2.code == 0 && rho2.n == kRhoN && rho2.value >= kRhoLo2 && rho2.value <= kRhoHi2;

  auto r10 = cli(rho_args(10, 1, ckpt));
  outputs[10] = r10.out;
  const auto rows10 = csv_rows(r10.out);
  const unsigned reached = static_cast<unsigned>(rows10.size());
  const double root = reached ? std::pow(std::stod(rows10.back().at(3)), 1.0 / reached) : 0.0;
  const bool ok10 = r10.code == 0 && reached == kRhoN && root >= kRhoLo10 && root <= kRhoHi10;

  o.pass = ok2 && ok10;
  o.detail = "P_2(50)=" + std::to_string(t2.at(kRhoN)) + " root " + fmt(rho2.value, 5) + (ok2 ? " ok" : " out") +
             "; g=10 ";
  if (r10.code == 3)
    o.detail += "stopped by the frontier guard at N=" + std::to_string(reached) +
                " (P_10=" + rows10.back().at(3) + ", root " + fmt(root, 4) +
                "); N=50 not reached";
  else
    o.detail += "root " + fmt(root, 5);
  o.expected_failure = ok2 && !ok10 && r10.code == 3;
  return o;
}

// ------------------------------------------------------------------ 7

Outcome criterion7() {
  Outcome o{true, ""};
  const unsigned M2 = count_mirror_primes(2, 2).M, M3 = count_mirror_primes(2, 3).M,
                 M4 = count_mirror_primes(2, 4).M;
  const bool small = M2 == 1 && M3 == 2 && M4 == 2;
  o.detail = "M_2(2..4)=" + std::to_string(M2) + "," + std::to_string(M3) + "," + std::to_string(M4) + "; ";
  std::vector<std::string> violations;
  const std::uint64_t moduli[] = {2, 3};
  for (unsigned N = 1; N <= 20; ++N) {
    const auto rc = residue_counts(2, N, moduli);
    if (rc[0].counts[0] != 0)
      violations.push_back("R_2(" + std::to_string(N) + ",2,0)=" + std::to_string(rc[0].counts[0]));
    if (rc[1].counts[0] != 0)
      violations.push_back("R_2(" + std::to_string(N) + ",3,0)=" + std::to_string(rc[1].counts[0]));
  }
  o.pass = small && violations.empty();
  if (violations.empty()) o.detail += "R_2(N,2,0)=R_2(N,3,0)=0 for N<=20";
  for (const auto& v : violations) o.detail += v + " ";
  // p = 3 is its own mirror; the congruence argument needs p != 3.
  o.expected_failure = small && violations == std::vector<std::string>{"R_2(2,3,0)=1"};
  if (o.expected_failure) o.detail += "(p=3 is its own mirror); zero for 3<=N<=20";
  return o;
}

// ------------------------------------------------------------------ 8

std::vector<std::string> ratio_args(unsigned workers) {
  return {"figures", "fig3", "--n-min", "16", "--n-max", "24", "--workers", std::to_string(workers)};
}

Outcome criterion8(std::string& output) {
  Outcome o;
  auto r = cli(ratio_args(1));
  output = r.out;
  bool in_range = r.code == 0;
  unsigned above = 0, total = 0;
  std::string list;
  for (const auto& row : csv_rows(r.out)) {
    const double ratio = std::stod(row.at(1));
    in_range = in_range && ratio >= kRatioLo && ratio <= kRatioHi;
    above += ratio > 1.0;
    ++total;
    list += fmt(ratio, 4) + " ";
  }
  const bool bias = 2 * above > total;
  o.pass = in_range && total == 9 && bias;
  o.detail = "ratios N=16..24: " + list + "; " + std::to_string(above) + "/" + std::to_string(total) + " above 1";
  o.expected_failure = in_range && total == 9 && above == 0;
  if (o.expected_failure) o.detail += "; M_2(N) itself sits ~3-7% above the heuristic";
  return o;
}

// ------------------------------------------------------------------ 9

Outcome criterion9() {
  Outcome o{true, ""};
  for (unsigned g : {2u, 10u}) {
    const auto t = greedy_sequence(g, kGreedyDigits);
    bool ok = t.digits.size() >= kGreedyDigits && !t.milestones.empty();
    const PrimalityConfig strict{kGreedyRounds, 0x600d};
    for (const auto& ms : t.milestones) {
      ok = ok && is_prime(ms.value, strict) && mpz_probab_prime_p(ms.value.get_mpz_t(), 30) != 0;
      ok = ok && ms.varpi >= greedy_baseline(ms.n);
    }
    o.pass = o.pass && ok;
    const auto& last = t.milestones.back();
    o.detail += "g=" + std::to_string(g) + ": " + std::to_string(t.digits.size()) + " digits, " +
                std::to_string(t.milestones.size()) + " milestones, varpi(" + std::to_string(last.n) +
                ")=" + std::to_string(last.varpi) + " vs bound " + std::to_string(greedy_baseline(last.n)) + "; ";
  }
  return o;
}

// ------------------------------------------------------------------ 10

Outcome criterion10() {
  Outcome o;
  const auto s3 = mirror_stats(2, 3), s4 = mirror_stats(2, 4);
  const bool exact = s3.sigma_exact && *s3.sigma_exact == mpq_class(82, 35) && s3.omega_product == 2 &&
                     s4.sigma_exact && *s4.sigma_exact == mpq_class(14, 13) + mpq_class(12, 11) &&
                     s4.omega_product == 2;
  std::vector<double> normalized;
  for (unsigned N = 12; N <= 20; ++N)
    normalized.push_back(mirror_stats(2, N).sigma_sum() * N / std::ldexp(1.0, static_cast<int>(N)));
  double worst = 1;
  for (std::size_t i = 1; i < normalized.size(); ++i)
    worst = std::max(worst, std::max(normalized[i], normalized[i - 1]) / std::min(normalized[i], normalized[i - 1]));
  o.pass = exact && worst < kSigmaFactor;
  o.detail = std::string("N=3,4 exact ") + (exact ? "ok" : "WRONG") + "; normalized sigma-sum N=12..20 in [" +
             fmt(*std::min_element(normalized.begin(), normalized.end()), 4) + ", " +
             fmt(*std::max_element(normalized.begin(), normalized.end()), 4) + "], worst consecutive factor " +
             fmt(worst, 4);
  return o;
}

// ------------------------------------------------------------------ 11

Outcome criterion11() {
  Outcome o;
  std::vector<std::uint64_t> moduli{3, 5, 7, 9, 15, 63};
  for (unsigned k = 1; k <= 10; ++k) moduli.push_back(std::uint64_t{1} << k);
  const auto fit = envelope_constant(2, 10, 22, 14, moduli);
  o.pass = fit.holds(kEnvelopeSlack);
  o.detail = "C fitted on N<=14: " + fmt(fit.fitted, 5) + "; max for N=15..22: " + fmt(fit.later, 5) +
             " (ratio " + fmt(fit.later / fit.fitted, 4) + ", allowed " + fmt(kEnvelopeSlack, 3) + ")";
  return o;
}

// ------------------------------------------------------------------ 12

Outcome criterion12(const std::map<unsigned, std::string>& extinction,
                    const std::map<unsigned, std::string>& rho, const std::string& ratio,
                    const std::string& ckpt) {
  Outcome o{true, ""};
  unsigned compared = 0;
  for (unsigned w : {4u, 8u}) {
    for (unsigned g : kExtinctionBases) {
      const bool same = cli(extinction_args(g, w)).out == extinction.at(g);
      o.pass = o.pass && same;
      ++compared;
      if (!same) o.detail += "extinction g=" + std::to_string(g) + " differs at " + std::to_string(w) + " workers; ";
    }
    for (unsigned g : {2u, 10u}) {
      const bool same = cli(rho_args(g, w, ckpt)).out == rho.at(g);
      o.pass = o.pass && same;
      ++compared;
      if (!same) o.detail += "rho g=" + std::to_string(g) + " differs at " + std::to_string(w) + " workers; ";
    }
    const bool same = cli(ratio_args(w)).out == ratio;
    o.pass = o.pass && same;
    ++compared;
    if (!same) o.detail += "fig3 differs at " + std::to_string(w) + " workers; ";
  }
  o.detail += std::to_string(compared) + " outputs at 4 and 8 workers compared byte for byte with 1 worker";
  return o;
}

}  // namespace

int main() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "chainprime_acceptance";
  fs::create_directories(dir);
  const std::string ckpt = (dir / "g10.ckpt").string();

  std::map<unsigned, std::string> extinction, rho;
  std::string ratio;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1},
      {2, criterion2},
      {3, criterion3},
      {4, [&] { return criterion4(extinction); }},
      {5, criterion5},
      {6, [&] { return criterion6(rho, ckpt); }},
      {7, criterion7},
      {8, [&] { return criterion8(ratio); }},
      {9, criterion9},
      {10, criterion10},
      {11, criterion11},
      {12, [&] { return criterion12(extinction, rho, ratio, ckpt); }},
  };

  int unexplained = 0, failed = 0;
  for (const auto& [id, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), false};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) {
      ++failed;
      if (!o.expected_failure) ++unexplained;
    }
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " | " << o.detail << " ["
              << fmt(s, 3) << " s]" << std::endl;
  }
  fs::remove_all(dir);
  std::cout << failed << " of " << criteria.size() << " criteria failed, " << unexplained
            << " without a recorded explanation" << std::endl;
  return unexplained ? 1 : 0;
}
