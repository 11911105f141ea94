// Persistent cache of factorizations and importers for published sequence tables.
//
// Store file, one record per line:
//
//   phi2 11 = 23 89
//   m- 6 = 3^2 7
//   phi2 360 = 37361 C:<digits>
//   m+ 101 = 3 845100400152152934331135470251?
//
// "?" marks a probable prime, "C:" the unsplit composite cofactor. Lines
// starting with '#' are comments; "#@ provenance computed|imported" sets the
// provenance of the records that follow it (default: imported).
#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mersdiv/factor.hpp"

namespace mersdiv {

enum class StoreKind { Phi2, MersenneMinus, MersennePlus };

std::string_view kind_token(StoreKind kind);
std::optional<StoreKind> parse_kind_token(std::string_view token);

struct StoreKey {
  StoreKind kind = StoreKind::Phi2;
  u64 index = 1;

  friend auto operator<=>(const StoreKey&, const StoreKey&) = default;
  std::string to_string() const;
};

/// Phi_index(2), 2^index - 1 or 2^index + 1.
Natural key_value(const StoreKey& key);

enum class Provenance { Computed, Imported };
enum class Certainty { Proven, Probable };

struct StoreRecord {
  StoreKey key;
  Factorization factorization;
  Provenance provenance = Provenance::Computed;
  std::map<Natural, Certainty> certainty;

  /// Certainty of each prime is taken from the primality screen.
  static StoreRecord make(StoreKey key, Factorization f, Provenance provenance,
                          const FactorPolicy& policy = {});
};

/// Input that does not follow the store or b-file grammar.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A record whose factors do not multiply to its key's value, or that contradicts
/// a stored record.
class StoreError : public std::runtime_error {
 public:
  StoreError(const StoreKey& key, const std::string& what);
  const StoreKey& key() const noexcept { return key_; }

 private:
  StoreKey key_;
};

/// In-memory store, safe for many readers or one writer at a time.
class FactorStore {
 public:
  FactorStore() = default;
  explicit FactorStore(FactorPolicy policy) : policy_(std::move(policy)) {}

  std::optional<StoreRecord> get(const StoreKey& key) const;

  /// Inserts or refines. Known primes of a key never disappear; a record that splits
  /// the stored cofactor refines it. Records for keys whose value is 1 are ignored.
  void upsert(StoreRecord record);

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<StoreRecord> records() const;

  /// Parses, verifies and merges every record. Verification recomputes each key's value.
  void read(std::istream& in, const std::string& source_name = "<stream>");
  /// Canonical form: header, records in key order, primes ascending.
  void write(std::ostream& out) const;

  void import_file(const std::filesystem::path& path);
  /// Writes through a temporary file and renames it into place.
  void export_file(const std::filesystem::path& path) const;

 private:
  FactorPolicy policy_;
  mutable std::shared_mutex mu_;
  std::map<StoreKey, StoreRecord> records_;
};

std::string format_record(const StoreRecord& record);

/// Parses one record line (no comments). Throws ParseError tagged with `line`.
StoreRecord parse_record(std::string_view text, Provenance provenance,
                         const std::string& source = "<string>", std::size_t line = 0,
                         const FactorPolicy& policy = {});

enum class BFileKind { TauMersenneMinus, TauMersennePlus, OmegaPhi2 };

std::string_view bfile_kind_name(BFileKind kind);
std::optional<BFileKind> parse_bfile_kind(std::string_view name);

/// An integer sequence, indices strictly increasing.
struct BFile {
  BFileKind kind = BFileKind::TauMersenneMinus;
  std::vector<std::pair<u64, Natural>> entries;

  std::optional<Natural> find(u64 index) const;
  bool empty() const noexcept { return entries.empty(); }
};

/// Lines "index value" ('#' comments). Commas and tabs also separate columns, one
/// leading header row is skipped and extra columns are ignored, so the integer
/// series this tool emits as CSV read back unchanged.
BFile parse_bfile(BFileKind kind, std::istream& in, const std::string& source_name = "<stream>");
BFile import_bfile(BFileKind kind, const std::filesystem::path& path);

}  // namespace mersdiv
