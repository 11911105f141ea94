#include "mersdiv/cyclotomic.hpp"

#include <algorithm>

#include "mersdiv/numeric.hpp"

namespace mersdiv {

Natural phi2(u64 d) {
  if (d == 0) throw DomainError("phi2: d must be >= 1");
  Natural numerator = 1, denominator = 1;
  for (u64 e : divisors(d)) {
    const int mu = moebius(d / e);
    if (mu == 1) numerator *= mersenne_minus(e);
    if (mu == -1) denominator *= mersenne_minus(e);
  }
  Natural q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
  if (r != 0) throw std::logic_error("phi2: inexact division for d = " + std::to_string(d));
  return q;
}

bool product_identity_check(u64 n) {
  if (n == 0) throw DomainError("product_identity_check: n must be >= 1");
  Natural product = 1;
  for (u64 d : divisors(n)) product *= phi2(d);
  return product == mersenne_minus(n);
}

namespace {

std::optional<u64> intrinsic_of(u64 d, const Natural& value) {
  if (d <= 1) return std::nullopt;
  const u64 p = largest_prime_factor(d);
  if (!mpz_divisible_ui_p(value.get_mpz_t(), p)) return std::nullopt;
  // d / ord_p(2) must be a power of p.
  u64 ratio = d / multiplicative_order(2, p);
  while (ratio % p == 0) ratio /= p;
  if (ratio != 1) throw std::logic_error("intrinsic prime of " + std::to_string(d) + " has unexpected order");
  return p;
}

}  // namespace

std::optional<u64> intrinsic_prime(u64 d) {
  if (d <= 1) return std::nullopt;
  return intrinsic_of(d, phi2(d));
}

CyclotomicValue cyclotomic_value(u64 d) {
  CyclotomicValue out;
  out.d = d;
  out.value = phi2(d);
  out.intrinsic_prime = intrinsic_of(d, out.value);
  out.primitive_part = out.value;
  if (out.intrinsic_prime) {
    const unsigned long p = static_cast<unsigned long>(*out.intrinsic_prime);
    while (mpz_divisible_ui_p(out.primitive_part.get_mpz_t(), p)) {
      mpz_divexact_ui(out.primitive_part.get_mpz_t(), out.primitive_part.get_mpz_t(), p);
      ++out.intrinsic_multiplicity;
    }
  }
  return out;
}

Natural primitive_part(u64 d) { return cyclotomic_value(d).primitive_part; }

u64 primitive_residue_modulus(u64 d) { return d % 2 == 1 ? 2 * d : d; }

FactorPolicy primitive_policy(u64 d, FactorPolicy base) {
  const u64 m = primitive_residue_modulus(d);
  if (m >= 2) {
    base.residue_modulus = m;
    base.trial_bound = std::max<u64>(base.trial_bound, 1'000'000);
  }
  return base;
}

Factorization factor_phi2(u64 d, const FactorPolicy& policy) {
  const CyclotomicValue cv = cyclotomic_value(d);
  Factorization out;
  if (cv.intrinsic_prime) {
    out.add(Natural(static_cast<unsigned long>(*cv.intrinsic_prime)), cv.intrinsic_multiplicity);
  }
  out.merge(factor(cv.primitive_part, primitive_policy(d, policy)));
  return out;
}

bool has_primitive_divisor(u64 m) {
  if (m <= 1) return false;
  return primitive_part(m) > 1;
}

std::optional<PrimitiveDivisor> bang_primitive_divisor(u64 m, const FactorPolicy& policy) {
  if (m <= 1) return std::nullopt;
  const Natural part = primitive_part(m);
  if (part == 1) return std::nullopt;
  const Factorization f = factor(part, primitive_policy(m, policy));
  if (!f.factors().empty()) return PrimitiveDivisor{f.factors().begin()->first, true};
  return PrimitiveDivisor{*f.cofactor(), false};
}

OmegaPhi2 omega_phi2(u64 d, Phi2Source& source) {
  if (d == 0) throw DomainError("omega_phi2: d must be >= 1");
  OmegaPhi2 out;
  out.d = d;
  if (d == 1) return out;
  const Factorization f = source.phi2_factorization(d);
  if (f.complete()) {
    out.omega = f.omega();
  } else if (auto imported = source.imported_phi2_omega(d)) {
    out.omega = *imported;
  } else {
    out.omega = f.omega_lower_bound();
    out.exact = false;
  }
  out.ratio = fixed_half_even(Real(out.omega) / natural_log(d), 4);
  return out;
}

}  // namespace mersdiv
