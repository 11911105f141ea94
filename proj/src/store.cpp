#include "mersdiv/store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include "mersdiv/cyclotomic.hpp"

namespace mersdiv {

namespace {

constexpr std::string_view kHeader = "# mersdiv factor store v1";
constexpr std::string_view kProvenanceDirective = "#@ provenance ";

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

u64 parse_u64(std::string_view s, const std::string& source, std::size_t line, const char* what) {
  if (!all_digits(s) || s.size() > 19) throw ParseError(source, line, std::string("bad ") + what + " '" + std::string(s) + "'");
  return std::stoull(std::string(s));
}

// Certainty follows the primality screen; anything composite is rejected.
void recertify(StoreRecord& record, const FactorPolicy& policy) {
  record.certainty.clear();
  for (const auto& [p, e] : record.factorization.factors()) {
    switch (is_probable_prime(p, policy)) {
      case Primality::Prime:
        record.certainty[p] = Certainty::Proven;
        break;
      case Primality::ProbablePrime:
        record.certainty[p] = Certainty::Probable;
        break;
      case Primality::Composite:
        throw StoreError(record.key, "factor " + p.get_str() + " is composite");
    }
  }
}

void verify(const StoreRecord& record, const Natural& value, const FactorPolicy& policy) {
  try {
    record.factorization.validate(value, policy);
  } catch (const FactorizationError& e) {
    throw StoreError(record.key, e.what());
  }
}

// Combines two valid factorizations of the same value. Every prime either side
// knows survives; each cofactor is used to split the other.
Factorization combine(const Factorization& a, const Factorization& b, const Natural& value,
                      const FactorPolicy& policy) {
  std::set<Natural> primes;
  for (const auto& [p, e] : a.factors()) primes.insert(p);
  for (const auto& [p, e] : b.factors()) primes.insert(p);
  Factorization out;
  Natural rest = value;
  for (const Natural& p : primes) {
    u64 e = 0;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
      ++e;
    }
    out.add(p, e);
  }
  std::vector<Natural> pieces;
  if (rest > 1) pieces.push_back(rest);
  for (const auto* cof : {&a.cofactor(), &b.cofactor()}) {
    if (!*cof) continue;
    std::vector<Natural> next;
    for (const Natural& x : pieces) {
      Natural g;
      mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), (*cof)->get_mpz_t());
      if (g == 1 || g == x) {
        next.push_back(x);
      } else {
        next.push_back(g);
        next.push_back(x / g);
      }
    }
    pieces = std::move(next);
  }
  for (const Natural& x : pieces) {
    if (passes(is_probable_prime(x, policy))) {
      out.add(x);
    } else {
      out.add_cofactor(x);
    }
  }
  out.normalize(policy);
  return out;
}

}  // namespace

std::string_view kind_token(StoreKind kind) {
  switch (kind) {
    case StoreKind::Phi2:
      return "phi2";
    case StoreKind::MersenneMinus:
      return "m-";
    case StoreKind::MersennePlus:
      return "m+";
  }
  return "?";
}

std::optional<StoreKind> parse_kind_token(std::string_view token) {
  if (token == "phi2") return StoreKind::Phi2;
  if (token == "m-") return StoreKind::MersenneMinus;
  if (token == "m+") return StoreKind::MersennePlus;
  return std::nullopt;
}

std::string StoreKey::to_string() const {
  return std::string(kind_token(kind)) + " " + std::to_string(index);
}

Natural key_value(const StoreKey& key) {
  if (key.index == 0) throw DomainError("store key index must be >= 1");
  switch (key.kind) {
    case StoreKind::Phi2:
      return phi2(key.index);
    case StoreKind::MersenneMinus:
      return mersenne_minus(key.index);
    case StoreKind::MersennePlus:
      return mersenne_plus(key.index);
  }
  throw std::logic_error("unknown store kind");
}

StoreRecord StoreRecord::make(StoreKey key, Factorization f, Provenance provenance,
                              const FactorPolicy& policy) {
  StoreRecord r{key, std::move(f), provenance, {}};
  recertify(r, policy);
  return r;
}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

StoreError::StoreError(const StoreKey& key, const std::string& what)
    : std::runtime_error(key.to_string() + ": " + what), key_(key) {}

std::optional<StoreRecord> FactorStore::get(const StoreKey& key) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(key);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void FactorStore::upsert(StoreRecord record) {
  const Natural value = key_value(record.key);
  if (value == 1) return;
  verify(record, value, policy_);
  recertify(record, policy_);

  std::unique_lock lock(mu_);
  auto it = records_.find(record.key);
  if (it == records_.end()) {
    records_.emplace(record.key, std::move(record));
    return;
  }
  StoreRecord& existing = it->second;
  Factorization merged = combine(existing.factorization, record.factorization, value, policy_);
  verify(StoreRecord{record.key, merged, record.provenance, {}}, value, policy_);
  if (merged == existing.factorization) return;
  existing.factorization = std::move(merged);
  existing.provenance = record.provenance;
  recertify(existing, policy_);
}

std::size_t FactorStore::size() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

std::vector<StoreRecord> FactorStore::records() const {
  std::shared_lock lock(mu_);
  std::vector<StoreRecord> out;
  out.reserve(records_.size());
  for (const auto& [k, r] : records_) out.push_back(r);
  return out;
}

std::string format_record(const StoreRecord& record) {
  std::ostringstream os;
  os << kind_token(record.key.kind) << ' ' << record.key.index << " =";
  for (const auto& [p, e] : record.factorization.factors()) {
    os << ' ' << p.get_str();
    if (e > 1) os << '^' << e;
    auto c = record.certainty.find(p);
    if (c != record.certainty.end() && c->second == Certainty::Probable) os << '?';
  }
  if (record.factorization.cofactor()) os << " C:" << record.factorization.cofactor()->get_str();
  return os.str();
}

StoreRecord parse_record(std::string_view text, Provenance provenance, const std::string& source,
                         std::size_t line, const FactorPolicy& policy) {
  const auto tokens = split_ws(text);
  if (tokens.size() < 4) throw ParseError(source, line, "expected '<kind> <index> = <factor>...'");
  auto kind = parse_kind_token(tokens[0]);
  if (!kind) throw ParseError(source, line, "unknown kind '" + std::string(tokens[0]) + "'");
  const u64 index = parse_u64(tokens[1], source, line, "index");
  if (index == 0) throw ParseError(source, line, "index must be >= 1");
  if (tokens[2] != "=") throw ParseError(source, line, "expected '='");

  Factorization f;
  for (std::size_t i = 3; i < tokens.size(); ++i) {
    std::string_view tok = tokens[i];
    if (tok.starts_with("C:")) {
      tok.remove_prefix(2);
      if (!all_digits(tok)) throw ParseError(source, line, "bad cofactor");
      f.add_cofactor(Natural(std::string(tok)));
      continue;
    }
    if (tok.ends_with('?')) tok.remove_suffix(1);
    u64 exponent = 1;
    if (auto caret = tok.find('^'); caret != std::string_view::npos) {
      exponent = parse_u64(tok.substr(caret + 1), source, line, "exponent");
      if (exponent == 0) throw ParseError(source, line, "exponent must be >= 1");
      tok = tok.substr(0, caret);
    }
    if (!all_digits(tok)) throw ParseError(source, line, "bad factor '" + std::string(tokens[i]) + "'");
    f.add(Natural(std::string(tok)), exponent);
  }
  StoreRecord record{StoreKey{*kind, index}, std::move(f), provenance, {}};
  recertify(record, policy);
  return record;
}

void FactorStore::read(std::istream& in, const std::string& source_name) {
  Provenance provenance = Provenance::Imported;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = strip_cr(raw);
    if (is_blank(text)) continue;
    if (text.starts_with(kProvenanceDirective)) {
      std::string_view which = text.substr(kProvenanceDirective.size());
      if (which == "computed") {
        provenance = Provenance::Computed;
      } else if (which == "imported") {
        provenance = Provenance::Imported;
      } else {
        throw ParseError(source_name, line, "unknown provenance '" + std::string(which) + "'");
      }
      continue;
    }
    if (text.front() == '#') continue;
    upsert(parse_record(text, provenance, source_name, line, policy_));
  }
}

void FactorStore::write(std::ostream& out) const {
  out << kHeader << '\n';
  std::shared_lock lock(mu_);
  Provenance current = Provenance::Imported;
  for (const auto& [key, record] : records_) {
    if (record.provenance != current) {
      current = record.provenance;
      out << kProvenanceDirective << (current == Provenance::Computed ? "computed" : "imported") << '\n';
    }
    out << format_record(record) << '\n';
  }
}

void FactorStore::import_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open store file " + path.string());
  read(in, path.string());
}

void FactorStore::export_file(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    write(out);
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string_view bfile_kind_name(BFileKind kind) {
  switch (kind) {
    case BFileKind::TauMersenneMinus:
      return "tau-minus";
    case BFileKind::TauMersennePlus:
      return "tau-plus";
    case BFileKind::OmegaPhi2:
      return "omega-phi2";
  }
  return "?";
}

std::optional<BFileKind> parse_bfile_kind(std::string_view name) {
  for (auto k : {BFileKind::TauMersenneMinus, BFileKind::TauMersennePlus, BFileKind::OmegaPhi2}) {
    if (bfile_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<Natural> BFile::find(u64 index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& e, u64 i) { return e.first < i; });
  if (it == entries.end() || it->first != index) return std::nullopt;
  return it->second;
}

BFile parse_bfile(BFileKind kind, std::istream& in, const std::string& source_name) {
  BFile out;
  out.kind = kind;
  std::string raw;
  std::size_t line = 0;
  bool seen_data = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string text(strip_cr(raw));
    if (is_blank(text) || text.front() == '#') continue;
    std::replace(text.begin(), text.end(), ',', ' ');
    const auto cols = split_ws(text);
    if (!seen_data && !cols.empty() && !all_digits(cols[0])) {
      seen_data = true;  // header row
      continue;
    }
    seen_data = true;
    if (cols.size() < 2) throw ParseError(source_name, line, "expected 'index value'");
    const u64 index = parse_u64(cols[0], source_name, line, "index");
    if (!all_digits(cols[1])) throw ParseError(source_name, line, "bad value '" + std::string(cols[1]) + "'");
    if (!out.entries.empty() && index <= out.entries.back().first) {
      throw ParseError(source_name, line, "indices must be strictly increasing");
    }
    Natural value{std::string(cols[1])};
    if (kind != BFileKind::OmegaPhi2 && value == 0) {
      throw ParseError(source_name, line, "a divisor count cannot be 0");
    }
    out.entries.emplace_back(index, std::move(value));
  }
  return out;
}

BFile import_bfile(BFileKind kind, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open b-file " + path.string());
  return parse_bfile(kind, in, path.string());
}

}  // namespace mersdiv
