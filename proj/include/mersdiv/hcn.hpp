// Highly composite numbers: N with more divisors than every smaller positive integer.
#pragma once

#include <vector>

#include "mersdiv/numeric.hpp"

namespace mersdiv {

/// N = 2^e1 3^e2 ... p_t^et with e1 >= e2 >= ... >= et >= 1.
struct HcnRecord {
  Natural n;
  std::vector<u64> exponents;
  Natural tau;

  /// Checks the exponent shape and fills n and tau.
  static HcnRecord from_exponents(std::vector<u64> exponents);
};

/// Every HCN <= limit, ascending. Candidates are the nonincreasing exponent
/// vectors on consecutive primes (every tau value is first reached by one of
/// them), filtered to strict tau records.
std::vector<HcnRecord> enumerate_hcn(const Natural& limit);

/// The largest HCN <= n; always exceeds n / 2.
HcnRecord largest_hcn_leq(const Natural& n);

/// tau(2N) - tau(N), checked against tau(N) / (e1 + 1).
Natural tau_jump(const HcnRecord& record);

/// log2 tau(N) * log log N / log N. Throws DomainError for N <= 2.
Real hcn_tau_exponent(const HcnRecord& record);

}  // namespace mersdiv
