// Budgeted factorization of arbitrary-precision naturals.
//
// The pipeline is trial division (optionally restricted to one residue class),
// a primality screen, perfect-power extraction, then Pollard p-1 and Brent's
// rho on whatever composite parts remain. When a budget runs out the result
// is a Partial factorization carrying the unsplit composite cofactor; budget
// exhaustion is never an exception.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mersdiv/arith.hpp"

namespace mersdiv {

enum class Primality { Composite, ProbablePrime, Prime };

constexpr bool passes(Primality v) { return v != Primality::Composite; }

struct FactorPolicy {
  u64 trial_bound = 100'000;
  /// When set, trial division only tries primes p = 1 (mod residue_modulus).
  std::optional<u64> residue_modulus;
  /// Total rho iterations allowed per composite part.
  u64 rho_budget = 100'000'000;
  u64 p_minus_1_bound = 100'000;
  u64 rng_seed = 1;
  u64 mr_rounds = 64;
  /// Wall-clock soft limit for a single factor() call; 0 disables it.
  double time_limit_secs = 0;
};

/// Largest n below which the 13 smallest prime bases decide primality exactly.
Natural deterministic_mr_threshold();

enum class FactorStatus { Complete, Partial };

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// prime -> exponent, plus an optional composite cofactor.
///
/// Status is Complete exactly when there is no cofactor. The product of all
/// prime powers times the cofactor reproduces the factored value; validate()
/// checks that together with primality of every key.
class Factorization {
 public:
  using FactorMap = std::map<Natural, u64>;

  Factorization() = default;

  void add(const Natural& prime, u64 exponent = 1);
  /// Multiplies a composite part into the cofactor.
  void add_cofactor(const Natural& composite);

  const FactorMap& factors() const noexcept { return factors_; }
  const std::optional<Natural>& cofactor() const noexcept { return cofactor_; }
  FactorStatus status() const noexcept {
    return cofactor_ ? FactorStatus::Partial : FactorStatus::Complete;
  }
  bool complete() const noexcept { return !cofactor_; }

  Natural value() const;
  /// Number of divisors; throws FactorizationError when Partial.
  Natural tau() const;
  /// Distinct known primes. When Partial this is a lower bound for the true count
  /// minus whatever hides in the cofactor.
  u64 omega() const noexcept { return factors_.size(); }
  /// Lower bound on the true distinct-prime count (exact when Complete).
  u64 omega_lower_bound() const;
  u64 exponent_of(const Natural& prime) const;

  /// Product of two factorizations; exponents of shared primes add.
  void merge(const Factorization& other);

  /// Pulls known primes out of the cofactor and drops a cofactor of 1. A prime
  /// cofactor is moved into the map.
  void normalize(const FactorPolicy& policy = {});

  /// Throws FactorizationError unless the product equals `expected`, every key
  /// passes the primality screen and the cofactor (if any) is composite.
  void validate(const Natural& expected, const FactorPolicy& policy = {}) const;

  std::string to_string() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  FactorMap factors_;
  std::optional<Natural> cofactor_;
};

Primality is_probable_prime(const Natural& n, const FactorPolicy& policy = {});

struct TrialDivisionResult {
  std::vector<std::pair<Natural, u64>> found;
  Natural remaining;
};

TrialDivisionResult trial_division(const Natural& n, const FactorPolicy& policy);

/// Brent's variant. n must be odd and composite; throws std::invalid_argument
/// on a prime input. Returns nullopt when the iteration budget is spent.
std::optional<Natural> pollard_rho(const Natural& n, const FactorPolicy& policy);

/// Stage-1 p-1 with base 3. The residue_modulus hint, when present, is folded
/// into the exponent since every target prime is 1 modulo it.
std::optional<Natural> pollard_p_minus_1(const Natural& n, const FactorPolicy& policy);

/// (root, k) with root^k = n and k prime, when n is a perfect power.
std::optional<std::pair<Natural, u64>> perfect_power(const Natural& n);

/// Throws DomainError for n = 0.
Factorization factor(const Natural& n, const FactorPolicy& policy = {});

/// Re-runs factor() on the cofactor and merges the result back.
Factorization refine(const Factorization& partial, const FactorPolicy& policy = {});

}  // namespace mersdiv
