#include <cmath>
#include <numeric>

#include "doctest.h"
#include "mersdiv/arith.hpp"

using namespace mersdiv;

namespace {

u64 brute_tau(u64 n) {
  u64 c = 0;
  for (u64 d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

bool brute_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

u64 brute_order(u64 a, u64 m) {
  u64 x = a % m;
  for (u64 e = 1;; ++e) {
    if (x == 1 % m) return e;
    x = x * a % m;
  }
}

}  // namespace

TEST_SUITE("arith") {

TEST_CASE("tau, omega and Omega on small values") {
  CHECK(tau_small(1) == 1);
  CHECK(tau_small(12) == 6);
  CHECK(tau_small(60) == 12);
  CHECK(omega_small(1) == 0);
  CHECK(big_omega_small(1) == 0);
  CHECK(omega_small(12) == 2);
  CHECK(big_omega_small(12) == 3);
  CHECK(omega_small(2047) == 2);
  CHECK(big_omega_small(2047) == 2);
  CHECK_THROWS_AS(tau_small(0), DomainError);
  CHECK_THROWS_AS(omega_small(0), DomainError);
  CHECK_THROWS_AS(big_omega_small(0), DomainError);
}

TEST_CASE("tau agrees with divisor enumeration") {
  for (u64 n = 1; n <= 2000; ++n) {
    REQUIRE(tau_small(n) == brute_tau(n));
    REQUIRE(divisors(n).size() == tau_small(n));
  }
}

TEST_CASE("2^omega <= tau <= 2^Omega") {
  for (u64 n = 1; n <= 10'000; ++n) {
    const u64 t = tau_small(n);
    REQUIRE((u64{1} << omega_small(n)) <= t);
    REQUIRE(t <= (u64{1} << big_omega_small(n)));
  }
}

TEST_CASE("factor_small on large 64-bit inputs") {
  const u64 n = 18446744073709551557ull;  // largest 64-bit prime
  CHECK(factor_small(n) == std::vector<PrimePower>{{n, 1}});
  const u64 semi = 4294967291ull * 4294967279ull;
  CHECK(factor_small(semi) == std::vector<PrimePower>{{4294967279ull, 1}, {4294967291ull, 1}});
  CHECK(factor_small(u64{1} << 63) == std::vector<PrimePower>{{2, 63}});
  CHECK(factor_small(1).empty());
}

TEST_CASE("euler_phi, moebius, divisors") {
  CHECK(euler_phi(1) == 1);
  CHECK(moebius(1) == 1);
  CHECK(euler_phi(12) == 4);
  CHECK(moebius(12) == 0);
  CHECK(moebius(30) == -1);
  CHECK(divisors(12) == std::vector<u64>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(1) == std::vector<u64>{1});
  CHECK_THROWS_AS(euler_phi(0), DomainError);
  CHECK_THROWS_AS(moebius(0), DomainError);
  CHECK_THROWS_AS(divisors(0), DomainError);
  for (u64 n = 1; n <= 500; ++n) {
    u64 coprime = 0;
    for (u64 k = 1; k <= n; ++k) coprime += std::gcd(k, n) == 1;
    REQUIRE(euler_phi(n) == coprime);
  }
}

TEST_CASE("moebius is multiplicative on coprime pairs") {
  for (u64 a = 1; a <= 1000; ++a) {
    for (u64 b = 1; b <= 1000; ++b) {
      if (std::gcd(a, b) != 1) continue;
      REQUIRE(moebius(a * b) == moebius(a) * moebius(b));
    }
  }
}

TEST_CASE("moebius sums to zero over divisors") {
  for (u64 n = 2; n <= 2000; ++n) {
    int s = 0;
    for (u64 d : divisors(n)) s += moebius(d);
    REQUIRE(s == 0);
  }
}

TEST_CASE("multiplicative order") {
  CHECK(multiplicative_order(2, 7) == 3);
  CHECK(multiplicative_order(2, 23) == 11);
  CHECK(multiplicative_order(1, 5) == 1);
  CHECK_THROWS_AS(multiplicative_order(2, 10), DomainError);
  CHECK_THROWS_AS(multiplicative_order(3, 1), DomainError);
  for (u64 m = 2; m <= 10'000; m += (m < 600 ? 1 : 37)) {
    const u64 lambda = carmichael_lambda(m);
    for (u64 a : {u64{2}, u64{3}, u64{5}, u64{7}, m - 1}) {
      if (std::gcd(a, m) != 1) continue;
      const u64 e = multiplicative_order(a, m);
      REQUIRE(e == brute_order(a, m));
      REQUIRE(lambda % e == 0);
      REQUIRE(euler_phi(m) % e == 0);
    }
  }
}

TEST_CASE("dirichlet floor sum equals the divisor-count sum") {
  CHECK(dirichlet_mean(1).floor_sum == 1);
  CHECK(dirichlet_mean(3).floor_sum == 5);
  CHECK(dirichlet_mean(3).mean == Rational(5, 3));
  CHECK_THROWS_AS(dirichlet_mean(0), DomainError);
  u64 sum = 0;
  for (u64 n = 1; n <= 10'000; ++n) {
    sum += brute_tau(n);
    REQUIRE(dirichlet_mean(n).floor_sum == sum);
  }
}

TEST_CASE("prime table, prime_pi, theta, primorial") {
  CHECK(prime_pi(10) == 4);
  CHECK(prime_pi(0) == 0);
  CHECK(prime_pi(1) == 0);
  CHECK(prime_pi(2) == 1);
  CHECK(prime_pi(1'000'000) == 78498);
  CHECK(primorial(0) == 1);
  CHECK(primorial(4) == 210);
  CHECK(chebyshev_theta(1) == 0);
  CHECK(std::abs(chebyshev_theta(10) - std::log(210.0L)) < 1e-12L);

  const PrimeTable table(1000);
  u64 count = 0;
  for (u64 n = 0; n <= 1000; ++n) {
    REQUIRE(table.is_prime(n) == brute_prime(n));
    count += brute_prime(n);
    REQUIRE(table.count_upto(n) == count);
  }
  CHECK(std::is_sorted(table.primes().begin(), table.primes().end()));
  CHECK(prime_table(2'000'000)->bound() >= 2'000'000);
  CHECK(prime_pi(1'500'000) == 114155);
}

TEST_CASE("deterministic 64-bit primality") {
  for (u64 n = 0; n <= 20'000; ++n) REQUIRE(is_prime64(n) == brute_prime(n));
  CHECK(is_prime64(18446744073709551557ull));
  CHECK_FALSE(is_prime64(3825123056546413051ull));  // strong pseudoprime to bases 2..23
}

TEST_CASE("checked arithmetic and Mersenne values") {
  CHECK(checked_mul(u64{1} << 31, u64{1} << 32) == u64{1} << 63);
  CHECK_THROWS_AS(checked_mul(u64{1} << 32, u64{1} << 32), DomainError);
  CHECK(mersenne_minus(11) == 2047);
  CHECK(mersenne_plus(6) == 65);
  CHECK(mersenne_minus(0) == 0);
  CHECK(mulmod64(~u64{0}, ~u64{0}, 1'000'000'007ull) ==
        static_cast<u64>((static_cast<u128>(~u64{0}) * (~u64{0})) % 1'000'000'007ull));
  CHECK(powmod64(2, 11, 2047) == 1);
}

}  // TEST_SUITE
