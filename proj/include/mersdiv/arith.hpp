// Machine-range number theory: sieve, divisor functions, multiplicative order.
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace mersdiv {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Exact arbitrary-precision natural number.
using Natural = mpz_class;
/// Exact rational, always kept in lowest terms.
using Rational = mpq_class;

/// Raised when an argument lies outside an operation's domain (n = 0, gcd(a, m) != 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PrimePower {
  u64 prime = 0;
  u64 exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

inline constexpr u64 kDefaultPrimeBound = 1'000'000;

/// All primes up to `bound`. Immutable once built; see prime_table() for the shared instance.
class PrimeTable {
 public:
  explicit PrimeTable(u64 bound);

  u64 bound() const noexcept { return bound_; }
  const std::vector<u64>& primes() const noexcept { return primes_; }

  /// Requires n <= bound().
  bool is_prime(u64 n) const;
  /// Number of primes <= x. Requires x <= bound().
  u64 count_upto(u64 x) const;

 private:
  u64 bound_;
  std::vector<bool> composite_;
  std::vector<u64> primes_;
};

/// Shared table covering at least `at_least`. Extension builds a fresh table under a lock;
/// callers keep whatever snapshot they were handed.
std::shared_ptr<const PrimeTable> prime_table(u64 at_least = kDefaultPrimeBound);

u64 mulmod64(u64 a, u64 b, u64 m);
u64 powmod64(u64 base, u64 exp, u64 m);
/// Deterministic for all 64-bit inputs.
bool is_prime64(u64 n);

/// Prime factorization of a machine-range integer, primes ascending.
std::vector<PrimePower> factor_small(u64 n);

u64 tau_small(u64 n);
u64 omega_small(u64 n);
u64 big_omega_small(u64 n);
u64 euler_phi(u64 n);
int moebius(u64 n);
std::vector<u64> divisors(u64 n);
u64 largest_prime_factor(u64 n);

/// Exponent of the unit group modulo m.
u64 carmichael_lambda(u64 m);
/// Least e >= 1 with a^e = 1 (mod m).
u64 multiplicative_order(u64 a, u64 m);

struct DirichletMean {
  u64 floor_sum = 0;  // sum over l <= n of floor(n / l)
  Rational mean;      // floor_sum / n
};
DirichletMean dirichlet_mean(u64 n);

u64 prime_pi(u64 x);
/// Sum of log p over primes p <= x.
long double chebyshev_theta(u64 x);
/// Product of the first t primes; primorial(0) = 1.
Natural primorial(u64 t);

/// 2^n - 1 and 2^n + 1.
Natural mersenne_minus(u64 n);
Natural mersenne_plus(u64 n);

/// Multiplication that throws DomainError instead of wrapping.
u64 checked_mul(u64 a, u64 b);

}  // namespace mersdiv
