// Divisor statistics of 2^n - 1 and 2^n + 1 assembled from cyclotomic pieces.
//
//   2^n - 1 = prod_{d | n} Phi_d(2)
//   2^n + 1 = prod_{d | 2n, d does not divide n} Phi_d(2)
//
// 2^n + 1 is never factored directly.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mersdiv/cyclotomic.hpp"
#include "mersdiv/numeric.hpp"
#include "mersdiv/store.hpp"

namespace mersdiv {

enum class Sign { Minus, Plus };

/// A statistic needed data that is neither factored nor imported.
class IncompleteData : public std::runtime_error {
 public:
  IncompleteData(const std::string& what, std::vector<u64> missing, bool budget_exhausted = false);
  const std::vector<u64>& missing() const noexcept { return missing_; }
  /// Some blocking piece was attempted natively and ran out of budget.
  bool budget_exhausted() const noexcept { return budget_exhausted_; }

 private:
  std::vector<u64> missing_;
  bool budget_exhausted_;
};

struct DataOptions {
  FactorPolicy policy;
  /// Phi_d(2) is factored natively only for d up to this.
  u64 native_max_phi = 256;
  unsigned workers = 1;
};

/// Where Mersenne statistics get their numbers. Lookup order for a cyclotomic
/// piece: a Complete store record, native factoring (d <= native_max_phi, no
/// stored record yet), whatever Partial record is stored. Imported b-files fill
/// in tau / omega values the pieces cannot provide.
class MersenneData final : public Phi2Source {
 public:
  explicit MersenneData(FactorStore& store, DataOptions options = {});

  void attach(BFile file);
  const BFile* bfile(BFileKind kind) const;

  Factorization phi2_factorization(u64 d) override;
  std::optional<u64> imported_phi2_omega(u64 d) override;

  /// Whether phi2_factorization(d) can be Complete without an import.
  bool natively_available(u64 d) const;
  /// Whether a native attempt at Phi_d(2) left a Partial record.
  bool budget_exhausted(u64 d) const;

  /// Factors the listed pieces that are not yet stored, options().workers at a time,
  /// then writes the results to the store from the calling thread.
  void prefetch_phi2(std::span<const u64> ds);

  /// Records that a statistic fell back on an imported table.
  void mark_used(BFileKind kind) { used_.insert(kind); }
  const std::set<BFileKind>& used_bfiles() const noexcept { return used_; }

  FactorStore& store() noexcept { return store_; }
  const DataOptions& options() const noexcept { return options_; }

 private:
  FactorStore& store_;
  DataOptions options_;
  std::map<BFileKind, BFile> bfiles_;
  std::set<BFileKind> used_;
};

/// The cyclotomic indices whose product is 2^n - 1 (Minus) or 2^n + 1 (Plus).
std::vector<u64> cyclotomic_indices(u64 n, Sign sign);

struct Assembly {
  Factorization factorization;
  /// Indices d whose piece is still Partial.
  std::vector<u64> incomplete;
};

Assembly assemble_mersenne(u64 n, Sign sign, MersenneData& data);
Factorization factor_mersenne(u64 n, Sign sign, MersenneData& data);

/// Throws IncompleteData naming the blocking d values.
Natural tau_mersenne(u64 n, Sign sign, MersenneData& data);

struct OmegaCount {
  u64 value = 0;
  bool exact = true;  // otherwise a lower bound
};
OmegaCount omega_mersenne(u64 n, Sign sign, MersenneData& data);

/// f(n) = sum_{k <= n} tau(2^k - 1). Missing k are listed in IncompleteData.
Natural f_sum(u64 n, MersenneData& data);
/// f'(n) = sum_{k <= n} 2^tau(k).
Natural f_prime_sum(u64 n);

struct SummarySeries {
  /// f(1..2 max_n) and f'(1..2 max_n); element i holds the value at i + 1.
  std::vector<Natural> f;
  std::vector<Natural> f_prime;
  /// f(2n)/f(n) for n = 1..max_n.
  std::vector<Rational> ratio;
};
SummarySeries ratio_series(u64 max_n, MersenneData& data);

struct HcmRow {
  u64 n = 0;
  Natural tau_minus;
  /// tau(2^N + 1) / N; absent when plus data was not requested.
  std::optional<Rational> ratio_plus;
};

/// N <= limit with tau(2^N - 1) above every smaller index.
std::vector<u64> hcm_index_list(u64 limit, MersenneData& data);
/// The same with the table columns filled in (needs plus data too).
std::vector<HcmRow> hcm_indices(u64 limit, MersenneData& data);

/// Table-style rendering of an HcmRow ratio ("0.25", "0.6667").
std::string ratio_text(const Rational& q);

struct CompareCheck {
  Natural tau;     // tau(2^k - 1)
  u64 omega = 0;   // omega(2^k - 1)
  u64 tau_k = 0;   // tau(k)
  bool holds = false;
};
/// tau(2^k-1) >= 2^omega(2^k-1) >= 2^tau(k) / 4, in integers.
CompareCheck compare_lower_bound(u64 k, MersenneData& data);

struct TauUpperCheck {
  Natural tau;
  u64 omega = 0;
  Natural bound;  // n^omega
  bool holds = false;
};
/// tau(2^n - 1) <= n^omega(2^n - 1); n >= 2.
TauUpperCheck tau_upper_bound_check(u64 n, MersenneData& data);

struct OmegaDecomposition {
  u64 lhs = 0;       // omega(2^n - 1)
  u64 rhs_sum = 0;   // sum over d | n of omega(Phi_d(2))
  /// False when some piece has an unsplit cofactor; lhs and rhs_sum are then lower bounds.
  bool counts_exact = true;
  u64 defect = 0;    // rhs_sum - lhs: repeat appearances of intrinsic primes
  u64 bound = 0;     // Omega(n)
  bool holds = false;
};
/// An intrinsic prime p of Phi_d(2) reappears once per extra power of p dividing
/// n, so the defect is at most Omega(n). Unsplit cofactors of distinct pieces are
/// coprime (checked), so the defect is exact even for partial data.
OmegaDecomposition omega_decomposition_check(u64 n, MersenneData& data);

/// (N, tau(2^N + 1) / N) over the HCM indices up to limit.
std::vector<HcmRow> conjecture1_table(u64 limit, MersenneData& data);

struct Conjecture2Scan {
  std::vector<u64> exceptions;  // d with omega(Phi_d(2)) > c log d
  Real sup_ratio = 0;
  u64 argmax_d = 0;
};
/// Over 2 <= d <= max_d. Every omega must be exact; otherwise IncompleteData lists the d.
Conjecture2Scan conjecture2_scan(u64 max_d, const Real& c, MersenneData& data);

struct Theorem3Check {
  Natural tau_plus;  // tau(2^N + 1)
  u64 odd_part = 0;  // M in N = 2^a M
  u64 tau_odd_part = 0;
  Natural bound;     // 2^(tau(M) - 2), floored at 1
  bool holds = false;
};
Theorem3Check theorem3_bound_check(u64 n, MersenneData& data);

}  // namespace mersdiv
