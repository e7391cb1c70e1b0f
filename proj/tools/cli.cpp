#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "chainprime/chains.hpp"
#include "chainprime/errors.hpp"
#include "chainprime/mirror.hpp"
#include "chainprime/report.hpp"
#include "chainprime/theory.hpp"

namespace chainprime::cli {

namespace {

using u64 = std::uint64_t;
using json = nlohmann::ordered_json;

struct Params {
  std::vector<unsigned> g;
  std::optional<unsigned> n;
  std::optional<unsigned> n_min;
  std::optional<unsigned> n_max;
  std::string variant = "zeros";
  std::vector<u64> m;
  std::optional<u64> a;
  double A = 1.0;
  std::optional<unsigned> s;
  unsigned s_max = 6;
  unsigned m_max = 40;
  unsigned workers = 1;
  u64 seed = PrimalityConfig{}.rng_seed;
  unsigned extra_rounds = 0;
  u64 mem_guard = default_mem_guard();
  std::string out;
  std::string checkpoint;
  std::string resume;
  std::string format = "csv";
  bool top_digit_one = false;
  bool quiet = false;
};

// Raised after partial output has been written; maps to exit code 3.
struct GuardStop {
  std::string message;
};

class Command {
 public:
  Command(const Params& p, std::ostream& out, std::ostream& err, std::string name)
      : p_(p), out_(out), err_(err) {
    header_.command = std::move(name);
    header_.seed = p.seed;
  }

  const Params& p() const { return p_; }
  OutputHeader& header() { return header_; }
  void config(const std::string& key, const std::string& value) { header_.config.emplace_back(key, value); }

  unsigned g() const {
    if (p_.g.empty()) throw DomainError("--g is required");
    if (p_.g.size() != 1) throw DomainError("--g takes a single base for this command");
    return p_.g.front();
  }

  RunOptions options() const {
    RunOptions o;
    o.workers = std::max(1u, p_.workers);
    o.mem_guard = p_.mem_guard;
    o.primality.rng_seed = p_.seed;
    o.primality.extra_rounds = p_.extra_rounds;
    if (!p_.quiet) o.progress = [this](const std::string& line) { err_ << "progress: " << line << std::endl; };
    return o;
  }

  void emit(const std::string& text) const {
    if (p_.out.empty()) {
      out_ << text;
      out_.flush();
      return;
    }
    std::ofstream file(p_.out, std::ios::binary);
    if (!(file << text)) throw ResourceError("cannot write " + p_.out);
  }

  void emit(const CsvTable& table) const { emit(table.str(header_)); }

  void emit(json body) const {
    json doc;
    doc["meta"] = json_meta(header_);
    for (auto& [k, v] : body.items()) doc[k] = v;
    emit(doc.dump(2) + "\n");
  }

 private:
  const Params& p_;
  std::ostream& out_;
  std::ostream& err_;
  OutputHeader header_;
};

std::pair<unsigned, unsigned> n_range(const Params& p, unsigned default_min, unsigned default_max) {
  unsigned lo = p.n_min.value_or(p.n.value_or(default_min));
  unsigned hi = p.n_max.value_or(p.n.value_or(default_max));
  if (lo < 1 || lo > hi) throw DomainError("empty N range");
  return {lo, hi};
}

std::string join(const std::vector<unsigned>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// ---------------------------------------------------------------- chains

void emit_counts(Command& cmd, const CountTable& table, unsigned n_min) {
  const auto& p = cmd.p();
  if (p.format == "json") {
    json counts = json::array();
    for (unsigned N = n_min; N <= table.n_max(); ++N) counts.push_back({{"N", N}, {"count", table.at(N)}});
    json first_zero = nullptr;
    if (auto z = table.first_zero()) first_zero = *z;
    cmd.emit(json{{"g", table.base}, {"variant", to_string(table.variant)}, {"counts", counts},
                  {"first_zero", first_zero}});
  } else if (p.format == "text") {
    std::ostringstream os;
    write_header(os, cmd.header());
    for (unsigned N = n_min; N <= table.n_max(); ++N) os << "N=" << N << " count=" << table.at(N) << '\n';
    cmd.emit(os.str());
  } else {
    CsvTable csv({"g", "variant", "N", "count"});
    for (unsigned N = n_min; N <= table.n_max(); ++N)
      csv.add_row({u64{table.base}, to_string(table.variant), u64{N}, table.at(N)});
    cmd.emit(csv);
  }
}

std::string default_checkpoint(const Frontier& f) {
  return "chainprime-g" + std::to_string(f.base) + "-" + to_string(f.variant) + "-L" +
         std::to_string(f.level) + ".ckpt";
}

// Counts chains; on a guard stop writes the checkpoint, emits the partial
// table and raises GuardStop.
CountTable count_or_checkpoint(Command& cmd, unsigned base, unsigned n_max, Variant variant,
                               unsigned n_min, bool emit_partial) {
  const auto& p = cmd.p();
  try {
    if (!p.resume.empty()) {
      std::ifstream in(p.resume);
      if (!in) throw DomainError("cannot read checkpoint " + p.resume);
      Frontier f = read_checkpoint(in);
      if (f.base != base || f.variant != variant)
        throw DomainError("checkpoint base or variant differs from the command line");
      return resume_chains(std::move(f), n_max, cmd.options());
    }
    return count_chains(base, n_max, variant, cmd.options());
  } catch (FrontierGuardExceeded& e) {
    const Frontier& f = e.frontier();
    const std::string path = p.checkpoint.empty() ? default_checkpoint(f) : p.checkpoint;
    std::ofstream file(path);
    write_checkpoint(file, f);
    if (!file) throw ResourceError("cannot write checkpoint " + path);
    if (emit_partial) emit_counts(cmd, CountTable{f.base, f.variant, f.counts}, std::min(n_min, f.level));
    throw GuardStop{std::string(e.what()) + "; checkpoint written to " + path};
  }
}

void chains_count(Command& cmd) {
  const auto& p = cmd.p();
  const unsigned g = cmd.g();
  const Variant variant = parse_variant(p.variant);
  const auto [lo, hi] = n_range(p, 1, 20);
  cmd.config("g", std::to_string(g));
  cmd.config("variant", to_string(variant));
  cmd.config("n-min", std::to_string(lo));
  cmd.config("n-max", std::to_string(hi));
  if (!p.resume.empty()) cmd.config("resume", p.resume);
  emit_counts(cmd, count_or_checkpoint(cmd, g, hi, variant, lo, true), lo);
}

void chains_oracle(Command& cmd) {
  const auto& p = cmd.p();
  const unsigned g = cmd.g();
  const Variant variant = parse_variant(p.variant);
  const auto [lo, hi] = n_range(p, 1, 1);
  cmd.config("g", std::to_string(g));
  cmd.config("variant", to_string(variant));
  cmd.config("n-min", std::to_string(lo));
  cmd.config("n-max", std::to_string(hi));
  const CountTable table = count_chains(g, hi, variant, cmd.options());
  CsvTable csv({"g", "variant", "N", "brute_force", "count_chains", "match"});
  bool all = true;
  for (unsigned N = lo; N <= hi; ++N) {
    const u64 brute = brute_force_count(g, N, variant);
    const bool match = brute == table.at(N);
    all = all && match;
    csv.add_row({u64{g}, to_string(variant), u64{N}, brute, table.at(N), std::string(match ? "yes" : "no")});
  }
  cmd.emit(csv);
  if (!all) throw InvariantError("count_chains disagrees with the brute-force count");
}

void emit_greedy(Command& cmd, const GreedyTrace& trace) {
  if (cmd.p().format == "json") {
    json milestones = json::array();
    for (const auto& ms : trace.milestones)
      milestones.push_back({{"n", ms.n}, {"varpi", ms.varpi}, {"baseline", greedy_baseline(ms.n)},
                            {"value", ms.value.get_str()}});
    cmd.emit(json{{"g", trace.base}, {"digits", trace.digits.size()},
                  {"sequence", trace.digits.to_string()}, {"candidates_per_step", trace.candidates_per_step},
                  {"milestones", milestones}});
    return;
  }
  CsvTable csv({"n", "varpi", "baseline", "value"});
  for (const auto& ms : trace.milestones)
    csv.add_row({u64{ms.n}, u64{ms.varpi}, u64{greedy_baseline(ms.n)}, ms.value.get_str()});
  cmd.emit(csv);
}

void chains_greedy(Command& cmd) {
  const auto& p = cmd.p();
  const unsigned g = cmd.g();
  const unsigned target = p.n.value_or(p.n_max.value_or(100));
  cmd.config("g", std::to_string(g));
  cmd.config("n", std::to_string(target));
  cmd.config("extra-rounds", std::to_string(p.extra_rounds));
  try {
    emit_greedy(cmd, greedy_sequence(g, target, cmd.options().primality));
  } catch (const GreedyInterrupted& e) {
    emit_greedy(cmd, e.partial());
    throw GuardStop{e.what()};
  }
}

// ---------------------------------------------------------------- mirror

void mirror_count(Command& cmd) {
  const unsigned g = cmd.g();
  const auto [lo, hi] = n_range(cmd.p(), 2, 2);
  cmd.config("g", std::to_string(g));
  cmd.config("n-min", std::to_string(lo));
  cmd.config("n-max", std::to_string(hi));
  CsvTable csv({"g", "N", "total_primes", "M"});
  for (unsigned N = lo; N <= hi; ++N) {
    const auto scan = count_mirror_primes(g, N, cmd.options());
    csv.add_row({u64{g}, u64{N}, scan.total_primes, scan.M});
  }
  cmd.emit(csv);
}

void mirror_residues(Command& cmd) {
  const auto& p = cmd.p();
  const unsigned g = cmd.g();
  const auto [lo, hi] = n_range(p, 2, 2);
  if (p.m.empty()) throw DomainError("--m is required");
  std::vector<unsigned> ms;
  for (u64 m : p.m) ms.push_back(static_cast<unsigned>(m));
  cmd.config("g", std::to_string(g));
  cmd.config("n-min", std::to_string(lo));
  cmd.config("n-max", std::to_string(hi));
  std::string mlist;
  for (std::size_t i = 0; i < p.m.size(); ++i) mlist += (i ? "," : "") + std::to_string(p.m[i]);
  cmd.config("m", mlist);
  if (p.a) cmd.config("a", std::to_string(*p.a));
  CsvTable csv({"g", "N", "m", "a", "count"});
  for (unsigned N = lo; N <= hi; ++N) {
    if (p.a) {
      for (u64 m : p.m)
        csv.add_row({u64{g}, u64{N}, m, *p.a % m, residue_count(g, N, m, *p.a, cmd.options())});
      continue;
    }
    for (const auto& rc : residue_counts(g, N, p.m, cmd.options()))
      for (u64 a = 0; a < rc.modulus; ++a) csv.add_row({u64{g}, u64{N}, rc.modulus, a, rc.counts[a]});
  }
  cmd.emit(csv);
}

void mirror_stats_cmd(Command& cmd) {
  const auto& p = cmd.p();
  const unsigned g = cmd.g();
  const auto [lo, hi] = n_range(p, 2, 2);
  cmd.config("g", std::to_string(g));
  cmd.config("n-min", std::to_string(lo));
  cmd.config("n-max", std::to_string(hi));
  cmd.config("top-digit-one", p.top_digit_one ? "yes" : "no");
  CsvTable csv({"g", "N", "total_primes", "M", "sigma_sum", "omega_product"});
  json rows = json::array();
  for (unsigned N = lo; N <= hi; ++N) {
    const auto scan = count_mirror_primes(g, N, cmd.options());
    const auto st = mirror_stats(g, N, p.top_digit_one, cmd.options());
    csv.add_row({u64{g}, u64{N}, st.total_primes, scan.M, st.sigma_sum(), st.omega_product});
    json row{{"N", N},
             {"total_primes", st.total_primes},
             {"M", scan.M},
             {"sigma_sum", st.sigma_decimal(30)},
             {"sigma_exact", st.sigma_exact ? json(st.sigma_exact->get_str()) : json(nullptr)},
             {"sigma_normalized", round12(st.sigma_sum() * N / std::pow(double(g), N))},
             {"omega_product", st.omega_product}};
    json small = json::array();
    for (const auto& [l, e] : st.nu) {
      if (l > 1000) break;
      small.push_back({l, e});
    }
    row["nu_small"] = small;
    rows.push_back(row);
  }
  if (p.format == "json")
    cmd.emit(json{{"g", g}, {"rows", rows}});
  else
    cmd.emit(csv);
}

// ---------------------------------------------------------------- theory

json gamma_json(const GammaResult& r) {
  return {{"value", round12(r.value)}, {"m_star", r.m_star}, {"search_limit", r.search_limit}};
}

json theta_json(const ThetaWitness& w) {
  return {{"value", round12(w.value)}, {"s", w.s}, {"q", w.q}, {"m", w.m}, {"phi", w.phi}};
}

void theory_constants(Command& cmd) {
  const auto& p = cmd.p();
  cmd.config("g", join(p.g));
  cmd.config("s-max", std::to_string(p.s_max));
  cmd.config("m-max", std::to_string(p.m_max));
  json bases = json::array();
  for (unsigned g : p.g) {
    const TheoryReport r = theory_report(g, p.s_max, p.m_max);
    json entry{{"g", g}, {"gamma", gamma_json(r.gamma)}, {"theta", theta_json(r.theta)},
               {"N_g", r.N_g ? json(*r.N_g) : json(nullptr)}};
    if (p.s) {
      const unsigned m = p.m.empty() ? 1 : static_cast<unsigned>(p.m.front());
      entry["theta_at"] = theta_json(theta_g(g, *p.s, m));
    }
    bases.push_back(entry);
  }
  if (bases.size() == 1)
    cmd.emit(bases.front());
  else
    cmd.emit(json{{"bases", bases}});
}

void theory_alpha(Command& cmd) {
  const auto& p = cmd.p();
  const unsigned g = cmd.g();
  const auto [lo, hi] = n_range(p, 1, 60);
  cmd.config("g", std::to_string(g));
  cmd.config("n-min", std::to_string(lo));
  cmd.config("n-max", std::to_string(hi));
  const CountTable table = count_or_checkpoint(cmd, g, hi, Variant::NonzeroOnly, lo, false);
  CsvTable csv({"g", "N", "Pstar", "alpha"});
  for (const auto& pt : alpha_g(table))
    if (pt.N >= lo) csv.add_row({u64{g}, u64{pt.N}, pt.count, pt.alpha});
  cmd.emit(csv);
}

void theory_heuristics(Command& cmd) {
  const auto& p = cmd.p();
  const unsigned g = cmd.g();
  const auto [lo, hi] = n_range(p, 1, 50);
  cmd.config("g", std::to_string(g));
  cmd.config("n-min", std::to_string(lo));
  cmd.config("n-max", std::to_string(hi));
  cmd.config("A", format_number(p.A));
  CsvTable csv({"g", "N", "A", "approx", "approx_factorial"});
  for (unsigned N = lo; N <= hi; ++N)
    csv.add_row({u64{g}, u64{N}, p.A, approx_pstar(g, N, p.A), approx_pstar_factorial(g, N, p.A)});
  if (p.format == "json") {
    json rows = json::array();
    for (unsigned N = lo; N <= hi; ++N)
      rows.push_back({{"N", N},
                      {"approx", round12(approx_pstar(g, N, p.A))},
                      {"approx_factorial", round12(approx_pstar_factorial(g, N, p.A))}});
    cmd.emit(json{{"g", g},
                  {"A", p.A},
                  {"note", "A is a free parameter; no explicit formula is known"},
                  {"N_g", g >= 3 ? json(n_g(g)) : json(nullptr)},
                  {"rows", rows}});
    return;
  }
  cmd.emit(csv);
}

// ---------------------------------------------------------------- figures

void figure1(Command& cmd) {
  const auto& p = cmd.p();
  const auto [lo, hi] = n_range(p, 1, 50);
  cmd.config("g", join(p.g));
  cmd.config("n-min", std::to_string(lo));
  cmd.config("n-max", std::to_string(hi));
  CsvTable csv({"g", "N", "P"});
  for (unsigned g : p.g) {
    const CountTable table = count_chains(g, hi, Variant::ZerosAllowed, cmd.options());
    for (unsigned N = lo; N <= hi; ++N) csv.add_row({u64{g}, u64{N}, table.at(N)});
  }
  cmd.emit(csv);
}

void figure2(Command& cmd) {
  const auto& p = cmd.p();
  const unsigned hi = p.n_max.value_or(80);
  cmd.config("g", join(p.g));
  cmd.config("n-max", std::to_string(hi));
  CsvTable csv({"g", "N", "alpha"});
  for (unsigned g : p.g) {
    const CountTable table = count_chains(g, hi, Variant::NonzeroOnly, cmd.options());
    const unsigned last = table.first_zero().value_or(hi);
    for (const auto& pt : alpha_g(table))
      if (pt.N <= last) csv.add_row({u64{g}, u64{pt.N}, pt.alpha});
  }
  cmd.emit(csv);
}

void figure3(Command& cmd) {
  const auto [lo, hi] = n_range(cmd.p(), 2, 24);
  cmd.config("n-min", std::to_string(lo));
  cmd.config("n-max", std::to_string(hi));
  CsvTable csv({"N", "ratio"});
  for (unsigned N = std::max(lo, 2u); N <= hi; ++N) csv.add_row({u64{N}, heuristic_m2(N, cmd.options()).ratio});
  cmd.emit(csv);
}

// ---------------------------------------------------------------- wiring

void add_common(CLI::App* app, Params& p) {
  app->add_option("--workers", p.workers, "OpenMP threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", p.seed, "seed for extra primality rounds");
  app->add_option("--mem-guard", p.mem_guard, "sieve cells / frontier bytes allowed")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", p.out, "write data here instead of stdout");
  app->add_flag("--quiet", p.quiet, "no progress lines");
}

void add_g(CLI::App* app, Params& p) { app->add_option("--g", p.g, "base")->delimiter(',')->check(CLI::Range(2u, 1u << 20)); }

void add_n(CLI::App* app, Params& p) {
  app->add_option("--n", p.n, "N");
  app->add_option("--n-min", p.n_min, "first N");
  app->add_option("--n-max", p.n_max, "last N");
}

void add_format(CLI::App* app, Params& p, std::vector<std::string> allowed) {
  app->add_option("--format", p.format, "output format")->check(CLI::IsMember(std::move(allowed)));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Params p;
  CLI::App app{"Prime digit-chains and mirror primes"};
  app.set_version_flag("--version", std::string("chainprime ") + CHAINPRIME_VERSION);
  app.require_subcommand(1);

  std::function<void(Command&)> action;
  std::string name;
  std::vector<unsigned> default_g;
  auto leaf = [&](CLI::App* parent, const std::string& sub, const std::string& help,
                  void (*fn)(Command&), std::vector<unsigned> bases = {}) {
    CLI::App* app_leaf = parent->add_subcommand(sub, help);
    app_leaf->callback([&, fn, bases, full = parent->get_name() + " " + sub] {
      action = fn;
      name = full;
      default_g = bases;
    });
    add_common(app_leaf, p);
    return app_leaf;
  };

  CLI::App* chains = app.add_subcommand("chains", "prime digit-chain counts")->require_subcommand(1);
  CLI::App* mirror = app.add_subcommand("mirror", "mirror-prime scans")->require_subcommand(1);
  CLI::App* theory = app.add_subcommand("theory", "constants and heuristics")->require_subcommand(1);
  CLI::App* figures = app.add_subcommand("figures", "figure data")->require_subcommand(1);

  {
    auto* c = leaf(chains, "count", "P_g(N) or P*_g(N) for a range of N", chains_count);
    add_g(c, p), add_n(c, p), add_format(c, p, {"csv", "json", "text"});
    c->add_option("--variant", p.variant, "zeros | nonzero");
    c->add_option("--checkpoint", p.checkpoint, "where to write the frontier on a guard stop");
    c->add_option("--resume", p.resume, "continue from a checkpoint");
  }
  {
    auto* c = leaf(chains, "oracle", "compare with brute force", chains_oracle);
    add_g(c, p), add_n(c, p);
    c->add_option("--variant", p.variant, "zeros | nonzero");
  }
  {
    auto* c = leaf(chains, "greedy", "greedy prime-rich digit sequence", chains_greedy);
    add_g(c, p), add_n(c, p), add_format(c, p, {"csv", "json"});
    c->add_option("--extra-rounds", p.extra_rounds, "additional strong-test rounds above 2^64");
  }
  {
    auto* c = leaf(mirror, "count", "M_g(N)", mirror_count);
    add_g(c, p), add_n(c, p);
  }
  {
    auto* c = leaf(mirror, "residues", "R_g(N, m, a)", mirror_residues);
    add_g(c, p), add_n(c, p);
    c->add_option("--m", p.m, "moduli")->delimiter(',')->check(CLI::PositiveNumber);
    c->add_option("--a", p.a, "single residue class");
  }
  {
    auto* c = leaf(mirror, "stats", "divisor-sum and prime-factor statistics of mirrors", mirror_stats_cmd);
    add_g(c, p), add_n(c, p), add_format(c, p, {"csv", "json"});
    c->add_flag("--top-digit-one", p.top_digit_one, "only primes below 2 g^(N-1)");
  }
  {
    auto* c = leaf(theory, "constants", "gamma_g, theta_g, N_g", theory_constants);
    add_g(c, p);
    c->add_option("--s", p.s, "evaluate theta at this s (with --m)");
    c->add_option("--m", p.m, "m for --s")->delimiter(',');
    c->add_option("--s-max", p.s_max, "theta search over s");
    c->add_option("--m-max", p.m_max, "theta search over m");
  }
  {
    auto* c = leaf(theory, "alpha", "alpha_g(N) from exact P*_g(N)", theory_alpha);
    add_g(c, p), add_n(c, p);
    c->add_option("--checkpoint", p.checkpoint, "where to write the frontier on a guard stop");
    c->add_option("--resume", p.resume, "continue from a checkpoint");
  }
  {
    auto* c = leaf(theory, "heuristics", "approximation of P*_g(N)", theory_heuristics);
    add_g(c, p), add_n(c, p), add_format(c, p, {"csv", "json"});
    c->add_option("--A", p.A, "the constant A_g")->check(CLI::PositiveNumber);
  }
  {
    auto* c = leaf(figures, "fig1", "P_g(N) for g = 2, 3, 5", figure1, {2, 3, 5});
    add_g(c, p), add_n(c, p);
  }
  {
    auto* c = leaf(figures, "fig2", "alpha_g(N) for g = 16, 17, 18, 20, 22", figure2,
                   {16, 17, 18, 20, 22});
    add_g(c, p), add_n(c, p);
  }
  {
    auto* c = leaf(figures, "fig3", "heuristic / M_2(N)", figure3);
    add_n(c, p);
  }

  std::vector<std::string> argv_store{"chainprime"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "ERROR " << kUsage << ": " << e.what() << '\n';
    return kUsage;
  }

  if (p.g.empty()) p.g = default_g;

  try {
    Command cmd(p, out, err, name);
    action(cmd);
    return kOk;
  } catch (const GuardStop& e) {
    err << "ERROR " << kGuardStop << ": " << e.message << '\n';
    return kGuardStop;
  } catch (const DomainError& e) {
    err << "ERROR " << kUsage << ": " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    err << "ERROR " << kGuardStop << ": " << e.what() << '\n';
    return kGuardStop;
  } catch (const std::out_of_range& e) {
    err << "ERROR " << kUsage << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "ERROR " << kInvariant << ": " << e.what() << '\n';
    return kInvariant;
  }
}

}  // namespace chainprime::cli
