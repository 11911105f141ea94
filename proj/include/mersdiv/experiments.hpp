// Table and figure emitters, heuristic experiments and the invariant suite
// behind the command-line tool.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mersdiv/hcn.hpp"
#include "mersdiv/stats.hpp"

namespace mersdiv {

enum class OutputFormat { Csv, Tsv };

/// A header row plus data rows. Notes are written first as "# " lines.
struct Table {
  std::vector<std::string> notes;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// LF line endings; fields containing the separator or quotes are quoted.
void write_table(std::ostream& out, const Table& table, OutputFormat format = OutputFormat::Csv);
std::string render_table(const Table& table, OutputFormat format = OutputFormat::Csv);

/// N, tau(2^N - 1), tau(2^N + 1)/N over the HCM indices up to limit.
Table table1(u64 limit, MersenneData& data);
/// d, omega(Phi_d(2)), omega / log d for 1 <= d <= max_d. Lower bounds print as ">=k".
Table table2(u64 max_d, MersenneData& data);
/// n, tau(2^n - 1).
Table figure1(u64 max_n, MersenneData& data);
/// n, f(2n)/f(n) to four decimals, and the exact ratio.
Table figure2(u64 max_n, MersenneData& data);
/// d, omega(Phi_d(2)) for 1 <= d <= max_d.
Table figure3(u64 max_d, MersenneData& data);
/// N, tau(2^N + 1)/N exact and to four decimals.
Table conjecture1_report(u64 limit, MersenneData& data);
/// One row: max_d, c, the exceptions, sup omega/log d and where it occurs.
Table conjecture2_report(u64 max_d, const Real& c, MersenneData& data);
/// N, tau(N), exponents, log2 tau(N) log log N / log N for every HCN <= limit.
Table hcn_report(const Natural& limit);

/// sum_{k <= n} log(2^k - 1) against n(n+1) log 2 / 2. The residual equals
/// sum_{k <= n} log(1 - 2^-k), which lies in [-2 sum 2^-k, 0).
struct LogSumCheck {
  u64 n = 0;
  Real sum;
  Real main_term;
  Real residual;
  Real lower_bound;  // -2 sum_{k <= n} 2^-k
  bool holds = false;
};
LogSumCheck log_sum_check(u64 n);
Table log_sum_report(u64 n);

inline constexpr u64 kOmegaSieveLimit = 100'000'000;

/// counts[K] = #{n <= x : Omega(n) = K}, K = 0..k_max. Throws DomainError
/// unless 1 <= x <= kOmegaSieveLimit.
std::vector<u64> omega_distribution(u64 x, u64 k_max);
/// K, count, count 2^K / (x K log x); the ratio is blank for K = 0 or x = 1.
Table omega_distribution_report(u64 x, u64 k_max);

struct InvariantLimits {
  u64 product_identity = 512;
  u64 phi_bound = 512;
  u64 bang = 300;
  u64 compare = 100;
  u64 tau_upper = 100;
  u64 omega_decomposition = 200;
  u64 tau_doubling = 100;
  u64 summatory = 100;
  u64 theorem3 = 100;
  u64 hcn_jump = 1'000'000;
  u64 hcn_half = 100'000;
  u64 dirichlet = 10'000;
};

struct InvariantResult {
  std::string name;
  u64 limit = 0;
  u64 checked = 0;
  /// Indices skipped for lack of data.
  std::vector<u64> skipped;
  std::vector<u64> failures;
};

std::vector<InvariantResult> check_invariants(const InvariantLimits& limits, MersenneData& data);
Table invariants_report(const std::vector<InvariantResult>& results);

}  // namespace mersdiv
