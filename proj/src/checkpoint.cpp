#include <istream>
#include <ostream>
#include <sstream>

#include "chainprime/chains.hpp"

namespace chainprime {

namespace {

[[noreturn]] void bad_checkpoint(const std::string& what) {
  throw DomainError("checkpoint: " + what);
}

std::string field(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) bad_checkpoint("expected '" + key + "=' in header");
  return token.substr(key.size() + 1);
}

std::uint64_t parse_unsigned(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    bad_checkpoint("not a number: '" + s + "'");
  }
  if (used != s.size()) bad_checkpoint("not a number: '" + s + "'");
  return v;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Frontier& frontier) {
  out << "g=" << frontier.base << " variant=" << to_string(frontier.variant)
      << " level=" << frontier.level << " counts=";
  for (std::size_t i = 0; i < frontier.counts.size(); ++i)
    out << (i ? "," : "") << frontier.counts[i];
  out << '\n';
  for (std::size_t i = 0; i < frontier.states(); ++i)
    out << frontier.value(i).get_str() << ' ' << frontier.level << '\n';
  if (!out) throw ResourceError("checkpoint: write failed");
}

Frontier read_checkpoint(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) bad_checkpoint("empty input");
  std::istringstream hs(header);
  std::string tg, tv, tl, tc;
  if (!(hs >> tg >> tv >> tl >> tc)) bad_checkpoint("malformed header");

  Frontier f;
  f.base = static_cast<unsigned>(parse_unsigned(field(tg, "g")));
  f.variant = parse_variant(field(tv, "variant"));
  f.level = static_cast<unsigned>(parse_unsigned(field(tl, "level")));
  require_base(f.base);
  if (f.level < 1) bad_checkpoint("level must be at least 1");
  std::istringstream cs(field(tc, "counts"));
  for (std::string c; std::getline(cs, c, ',');) f.counts.push_back(parse_unsigned(c));
  if (f.counts.size() != f.level) bad_checkpoint("counts do not match the level");

  mpz_class bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), f.base, f.level);
  f.width = std::max<std::size_t>(1, mpz_size(mpz_class(bound - 1).get_mpz_t()));

  std::string line;
  mpz_class v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string value, length;
    if (!(ls >> value >> length)) bad_checkpoint("malformed state line");
    if (v.set_str(value, 10) != 0 || v < 0 || v >= bound) bad_checkpoint("bad value " + value);
    if (parse_unsigned(length) != f.level) bad_checkpoint("state length differs from the level");
    std::size_t at = f.limbs.size();
    f.limbs.resize(at + f.width, 0);
    std::size_t count = 0;
    if (v != 0) mpz_export(f.limbs.data() + at, &count, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
  }
  return f;
}

}  // namespace chainprime
