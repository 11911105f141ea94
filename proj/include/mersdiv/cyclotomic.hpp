// Values of cyclotomic polynomials at 2, their intrinsic primes and primitive parts.
//
// Every prime factor of Phi_d(2) has multiplicative order of 2 exactly d,
// except possibly the largest prime factor of d (the intrinsic prime). The
// primitive part is what is left after dividing the intrinsic prime out.
#pragma once

#include <optional>
#include <string>

#include "mersdiv/factor.hpp"

namespace mersdiv {

struct CyclotomicValue {
  u64 d = 0;
  Natural value;
  std::optional<u64> intrinsic_prime;
  u64 intrinsic_multiplicity = 0;
  Natural primitive_part;
};

/// Phi_d(2), as the exact quotient of prod (2^e - 1)^{mu(d/e)} over e | d.
Natural phi2(u64 d);

/// prod over d | n of Phi_d(2) equals 2^n - 1.
bool product_identity_check(u64 n);

/// Largest prime factor p of d when p divides Phi_d(2). d <= 1 gives nullopt.
std::optional<u64> intrinsic_prime(u64 d);

/// Phi_d(2) with the intrinsic prime removed to full multiplicity.
Natural primitive_part(u64 d);

CyclotomicValue cyclotomic_value(u64 d);

/// Primitive primes of Phi_d(2) are 1 modulo this (d, doubled when d is odd).
u64 primitive_residue_modulus(u64 d);

/// `base` with the residue hint for d installed and the trial bound raised to 10^6.
FactorPolicy primitive_policy(u64 d, FactorPolicy base);

/// Full factorization of Phi_d(2): the intrinsic prime, then the primitive part
/// factored under primitive_policy().
Factorization factor_phi2(u64 d, const FactorPolicy& policy = {});

/// A divisor of 2^m - 1 coprime to every 2^l - 1 with l < m. `prime` is false when
/// the primitive part could not be split within the policy budget; the value is
/// then a composite made only of primitive primes.
struct PrimitiveDivisor {
  Natural value;
  bool prime = false;
};

/// Exact and cheap: whether Phi_m(2) has anything beyond its intrinsic prime.
bool has_primitive_divisor(u64 m);

/// nullopt exactly for m in {1, 6}. Otherwise the smallest primitive prime found.
std::optional<PrimitiveDivisor> bang_primitive_divisor(u64 m, const FactorPolicy& policy = {});

/// Where factorizations of Phi_d(2) come from (a store, native factoring, imports).
class Phi2Source {
 public:
  virtual ~Phi2Source() = default;
  /// Best factorization available for Phi_d(2); may be Partial.
  virtual Factorization phi2_factorization(u64 d) = 0;
  /// omega(Phi_d(2)) from an imported table, when one covers d.
  virtual std::optional<u64> imported_phi2_omega(u64 /*d*/) { return std::nullopt; }
};

struct OmegaPhi2 {
  u64 d = 0;
  /// Exact count, or a lower bound when `exact` is false.
  u64 omega = 0;
  bool exact = true;
  /// omega / log d to four decimals; empty for d = 1.
  std::string ratio;
};

OmegaPhi2 omega_phi2(u64 d, Phi2Source& source);

}  // namespace mersdiv
