#include <map>

#include "doctest.h"
#include "mersdiv/factor.hpp"

using namespace mersdiv;

namespace {

std::map<Natural, u64> naive_factor(u64 n) {
  std::map<Natural, u64> out;
  for (u64 p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[Natural(static_cast<unsigned long>(p))];
      n /= p;
    }
  }
  if (n > 1) ++out[Natural(static_cast<unsigned long>(n))];
  return out;
}

Natural pow2m1(unsigned long e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r - 1;
}

const Natural kP10a("1000000007");
const Natural kP10b("1000000009");

}  // namespace

TEST_SUITE("factor") {

TEST_CASE("primality verdicts") {
  CHECK(is_probable_prime(8191) == Primality::Prime);
  CHECK(is_probable_prime(2047) == Primality::Composite);
  CHECK(is_probable_prime(1) == Primality::Composite);
  CHECK(is_probable_prime(0) == Primality::Composite);
  CHECK(is_probable_prime(2) == Primality::Prime);
  CHECK(is_probable_prime(561) == Primality::Composite);
  CHECK(is_probable_prime(pow2m1(61)) == Primality::Prime);
  CHECK(is_probable_prime(Natural("3825123056546413051")) == Primality::Composite);
  CHECK(is_probable_prime(Natural("318665857834031151167461")) == Primality::Composite);
  CHECK(is_probable_prime(Natural("3317044064679887385961981")) == Primality::Composite);
  CHECK(is_probable_prime(pow2m1(89)) == Primality::ProbablePrime);
  CHECK(is_probable_prime(pow2m1(127)) == Primality::ProbablePrime);
  CHECK(is_probable_prime(kP10a * kP10b) == Primality::Composite);
  CHECK(deterministic_mr_threshold() == Natural("3317044064679887385961981"));
  CHECK(passes(Primality::ProbablePrime));
  CHECK_FALSE(passes(Primality::Composite));
}

TEST_CASE("trial division, plain and residue-restricted") {
  FactorPolicy p;
  p.trial_bound = 10;
  auto r = trial_division(7, p);
  REQUIRE(r.found.size() == 1);
  CHECK(r.found[0] == std::pair<Natural, u64>{7, 1});
  CHECK(r.remaining == 1);

  p.trial_bound = 10'000;
  p.residue_modulus = 11;
  r = trial_division(2047, p);
  REQUIRE(r.found.size() == 2);
  CHECK(r.found[0].first == 23);
  CHECK(r.found[1].first == 89);
  CHECK(r.remaining == 1);

  p.trial_bound = 20'000;
  p.residue_modulus = 97 * 2;
  r = trial_division(pow2m1(97), p);
  REQUIRE(r.found.size() == 1);
  CHECK(r.found[0].first == 11447);
  CHECK(r.remaining == pow2m1(97) / 11447);

  FactorPolicy q;
  q.trial_bound = 100;
  r = trial_division(Natural(1) << 10, q);
  CHECK(r.found[0] == std::pair<Natural, u64>{2, 10});
}

TEST_CASE("pollard rho") {
  FactorPolicy p;
  auto d = pollard_rho(2047, p);
  REQUIRE(d);
  CHECK((*d == 23 || *d == 89));
  d = pollard_rho(536870911, p);
  REQUIRE(d);
  CHECK(*d > 1);
  CHECK(*d < 536870911);
  CHECK(536870911 % *d == 0);
  d = pollard_rho(kP10a * kP10b, p);
  REQUIRE(d);
  CHECK((*d == kP10a || *d == kP10b));

  FactorPolicy tiny;
  tiny.rho_budget = 1;
  CHECK_FALSE(pollard_rho(kP10a * kP10b, tiny));
  CHECK_THROWS_AS(pollard_rho(8191, p), std::invalid_argument);
}

TEST_CASE("pollard p-1") {
  FactorPolicy p;
  p.p_minus_1_bound = 11;
  auto d = pollard_p_minus_1(2047, p);
  REQUIRE(d);
  CHECK(*d == 23);
  d = pollard_p_minus_1(15, p);
  REQUIRE(d);
  CHECK((*d == 3 || *d == 5));
  p.p_minus_1_bound = 2;
  CHECK_FALSE(pollard_p_minus_1(2047, p));
}

TEST_CASE("perfect powers") {
  const Natural n = Natural(3) * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3;
  auto pp = perfect_power(n);
  REQUIRE(pp);
  Natural back;
  mpz_pow_ui(back.get_mpz_t(), pp->first.get_mpz_t(), pp->second);
  CHECK(back == n);
  CHECK((pp->second == 2 || pp->second == 5));
  CHECK_FALSE(perfect_power(2047));
  pp = perfect_power(kP10a * kP10a * kP10a);
  REQUIRE(pp);
  CHECK(pp->first == kP10a);
  CHECK(pp->second == 3);
}

TEST_CASE("factor: examples") {
  CHECK(factor(1).complete());
  CHECK(factor(1).factors().empty());
  Factorization f = factor(63);
  CHECK(f.complete());
  CHECK(f.factors() == Factorization::FactorMap{{3, 2}, {7, 1}});
  CHECK(f.tau() == 6);
  f = factor(2047);
  CHECK(f.factors() == Factorization::FactorMap{{23, 1}, {89, 1}});
  CHECK_THROWS_AS(factor(0), DomainError);
  CHECK(factor(kP10a * kP10a * kP10b).factors() == Factorization::FactorMap{{kP10a, 2}, {kP10b, 1}});
  f = factor(pow2m1(97));
  CHECK(f.factors() == Factorization::FactorMap{{11447, 1}, {Natural("13842607235828485645766393"), 1}});
}

TEST_CASE("factor agrees with naive trial division up to 1e5") {
  for (u64 n = 1; n <= 100'000; ++n) {
    const Factorization f = factor(Natural(static_cast<unsigned long>(n)));
    REQUIRE(f.complete());
    REQUIRE(f.factors() == naive_factor(n));
  }
}

TEST_CASE("budget exhaustion gives a Partial factorization") {
  FactorPolicy p;
  p.rho_budget = 1000;
  p.p_minus_1_bound = 10;
  const Natural n = kP10a * kP10b * 12;
  const Factorization f = factor(n, p);
  CHECK_FALSE(f.complete());
  CHECK(f.status() == FactorStatus::Partial);
  REQUIRE(f.cofactor());
  CHECK(*f.cofactor() == kP10a * kP10b);
  CHECK(f.factors() == Factorization::FactorMap{{2, 2}, {3, 1}});
  CHECK(f.value() == n);
  CHECK_THROWS_AS(f.tau(), FactorizationError);
  CHECK(f.omega() == 2);
  CHECK(f.omega_lower_bound() == 3);
  CHECK_NOTHROW(f.validate(n, p));
  CHECK(f.to_string() == "2^2 3 C:" + Natural(kP10a * kP10b).get_str());

  const Factorization g = refine(f);
  CHECK(g.complete());
  CHECK(g.value() == n);
  CHECK(g.tau() == 3 * 2 * 2 * 2);
  CHECK_NOTHROW(g.validate(n));
}

TEST_CASE("wall-clock limit") {
  FactorPolicy p;
  p.time_limit_secs = 1e-9;
  p.p_minus_1_bound = 10;
  const Factorization f = factor(kP10a * kP10b, p);
  CHECK_FALSE(f.complete());
  CHECK(f.value() == kP10a * kP10b);
}

TEST_CASE("fixed seed reproduces the run") {
  FactorPolicy p;
  p.rng_seed = 7;
  const Natural n = pow2m1(67);
  CHECK(factor(n, p) == factor(n, p));
  CHECK(factor(n, p).factors() ==
        Factorization::FactorMap{{Natural("193707721"), 1}, {Natural("761838257287"), 1}});
  FactorPolicy other;
  other.rng_seed = 99;
  CHECK(factor(n, other) == factor(n, p));
}

TEST_CASE("Factorization bookkeeping") {
  Factorization a;
  a.add(3);
  a.add(7);
  Factorization b;
  b.add(3);
  a.merge(b);
  CHECK(a.exponent_of(3) == 2);
  CHECK(a.exponent_of(5) == 0);
  CHECK(a.value() == 63);
  CHECK_NOTHROW(a.validate(63));
  CHECK_THROWS_AS(a.validate(64), FactorizationError);

  Factorization bad;
  bad.add(9);
  CHECK_THROWS_AS(bad.validate(9), FactorizationError);

  Factorization c;
  c.add(23);
  c.add_cofactor(89);
  c.normalize();
  CHECK(c.complete());
  CHECK(c.factors() == Factorization::FactorMap{{23, 1}, {89, 1}});

  Factorization d;
  d.add(3);
  d.add_cofactor(3 * 3 * kP10a * kP10b);
  d.normalize();
  CHECK(d.exponent_of(3) == 3);
  REQUIRE(d.cofactor());
  CHECK(*d.cofactor() == kP10a * kP10b);
}

}  // TEST_SUITE
