#include "mersdiv/factor.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <sstream>

namespace mersdiv {

namespace {

class Deadline {
 public:
  explicit Deadline(double secs)
      : enabled_(secs > 0),
        end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(secs))) {}

  bool expired() const { return enabled_ && std::chrono::steady_clock::now() >= end_; }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point end_;
};

constexpr u64 kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

bool fits_u64(const Natural& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

u64 to_u64(const Natural& n) {
  u64 v = 0;
  mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, n.get_mpz_t());
  return v;
}

Natural from_u64(u64 v) {
  Natural r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

// Strong probable-prime test to base a; n odd and > a.
bool strong_probable_prime(const Natural& n, const Natural& a) {
  Natural d = n - 1;
  const mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Natural x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Natural n1 = n - 1;
  if (x == 1 || x == n1) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
    if (x == n1) return true;
    if (x == 1) return false;
  }
  return false;
}

std::optional<u64> rho_u64(u64 n, u64 budget, std::mt19937_64& rng, const Deadline& deadline,
                           u64& used) {
  constexpr u64 kBatch = 128;
  while (used < budget) {
    const u64 c = 1 + rng() % (n - 1);
    u64 y = rng() % n, x = y, ys = y, q = 1, g = 1;
    auto f = [&](u64 v) { return static_cast<u64>((static_cast<u128>(v) * v + c) % n); };
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      used += r;
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        const u64 lim = std::min(kBatch, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = f(y);
          q = mulmod64(q, x > y ? x - y : y - x, n);
        }
        used += lim;
        g = std::gcd(q, n);
        if (g == 1 && (used >= budget || deadline.expired())) return std::nullopt;
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return std::nullopt;
}

std::optional<Natural> rho_mpz(const Natural& n, u64 budget, std::mt19937_64& rng,
                               const Deadline& deadline) {
  if (fits_u64(n)) {
    u64 used = 0;
    auto d = rho_u64(to_u64(n), budget, rng, deadline, used);
    if (!d) return std::nullopt;
    return from_u64(*d);
  }
  constexpr u64 kBatch = 128;
  const mpz_srcptr N = n.get_mpz_t();
  Natural xv, yv, ysv, qv, tv, gv, cv;
  mpz_ptr x = xv.get_mpz_t(), y = yv.get_mpz_t(), ys = ysv.get_mpz_t();
  mpz_ptr q = qv.get_mpz_t(), t = tv.get_mpz_t(), g = gv.get_mpz_t(), c = cv.get_mpz_t();
  auto step = [&](mpz_ptr v) {
    mpz_mul(t, v, v);
    mpz_add(t, t, c);
    mpz_tdiv_r(v, t, N);
  };
  u64 used = 0;
  while (used < budget) {
    cv = from_u64(1 + rng() % (1ULL << 62));
    yv = from_u64(rng());
    mpz_tdiv_r(y, y, N);
    mpz_set_ui(q, 1);
    mpz_set_ui(g, 1);
    for (u64 r = 1; mpz_cmp_ui(g, 1) == 0; r <<= 1) {
      mpz_set(x, y);
      for (u64 i = 0; i < r; ++i) step(y);
      used += r;
      for (u64 k = 0; k < r && mpz_cmp_ui(g, 1) == 0; k += kBatch) {
        mpz_set(ys, y);
        const u64 lim = std::min(kBatch, r - k);
        for (u64 i = 0; i < lim; ++i) {
          step(y);
          mpz_sub(t, x, y);
          mpz_mul(q, q, t);
          mpz_tdiv_r(q, q, N);
        }
        used += lim;
        mpz_gcd(g, q, N);
        if (mpz_cmp_ui(g, 1) == 0 && (used >= budget || deadline.expired())) return std::nullopt;
      }
    }
    if (mpz_cmp(g, N) == 0) {
      do {
        step(ys);
        mpz_sub(t, x, ys);
        mpz_gcd(g, t, N);
      } while (mpz_cmp_ui(g, 1) == 0);
    }
    if (mpz_cmp(g, N) != 0) return gv;
  }
  return std::nullopt;
}

}  // namespace

Natural deterministic_mr_threshold() { return Natural("3317044064679887385961981"); }

void Factorization::add(const Natural& prime, u64 exponent) {
  if (exponent == 0) return;
  factors_[prime] += exponent;
}

void Factorization::add_cofactor(const Natural& composite) {
  if (composite == 1) return;
  if (cofactor_) {
    *cofactor_ *= composite;
  } else {
    cofactor_ = composite;
  }
}

Natural Factorization::value() const {
  Natural v = cofactor_.value_or(Natural(1));
  Natural pk;
  for (const auto& [p, e] : factors_) {
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), e);
    v *= pk;
  }
  return v;
}

Natural Factorization::tau() const {
  if (cofactor_) throw FactorizationError("tau of a partial factorization");
  Natural t = 1;
  for (const auto& [p, e] : factors_) t *= static_cast<unsigned long>(e + 1);
  return t;
}

u64 Factorization::omega_lower_bound() const { return factors_.size() + (cofactor_ ? 1 : 0); }

u64 Factorization::exponent_of(const Natural& prime) const {
  auto it = factors_.find(prime);
  return it == factors_.end() ? 0 : it->second;
}

void Factorization::merge(const Factorization& other) {
  for (const auto& [p, e] : other.factors_) add(p, e);
  if (other.cofactor_) add_cofactor(*other.cofactor_);
}

void Factorization::normalize(const FactorPolicy& policy) {
  if (!cofactor_) return;
  Natural& c = *cofactor_;
  for (auto& [p, e] : factors_) {
    while (mpz_divisible_p(c.get_mpz_t(), p.get_mpz_t())) {
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t());
      ++e;
    }
  }
  if (c == 1) {
    cofactor_.reset();
  } else if (passes(is_probable_prime(c, policy))) {
    Natural p = c;
    cofactor_.reset();
    add(p);
  }
}

void Factorization::validate(const Natural& expected, const FactorPolicy& policy) const {
  if (value() != expected) {
    throw FactorizationError("factorization product " + value().get_str() + " does not equal " +
                             expected.get_str());
  }
  for (const auto& [p, e] : factors_) {
    if (e == 0) throw FactorizationError("zero exponent for " + p.get_str());
    if (!passes(is_probable_prime(p, policy))) {
      throw FactorizationError("factor " + p.get_str() + " is not prime");
    }
  }
  if (cofactor_) {
    if (*cofactor_ <= 1 || passes(is_probable_prime(*cofactor_, policy))) {
      throw FactorizationError("cofactor " + cofactor_->get_str() + " is not composite");
    }
  }
}

std::string Factorization::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, e] : factors_) {
    if (!first) os << ' ';
    first = false;
    os << p.get_str();
    if (e > 1) os << '^' << e;
  }
  if (cofactor_) os << (first ? "" : " ") << "C:" << cofactor_->get_str();
  return os.str();
}

Primality is_probable_prime(const Natural& n, const FactorPolicy& policy) {
  if (n < 2) return Primality::Composite;
  if (fits_u64(n)) return is_prime64(to_u64(n)) ? Primality::Prime : Primality::Composite;
  for (u64 p = 2; p < 1000; ++p) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::Composite;
  }
  for (u64 a : kSmallPrimes) {
    if (!strong_probable_prime(n, Natural(static_cast<unsigned long>(a)))) return Primality::Composite;
  }
  if (n < deterministic_mr_threshold()) return Primality::Prime;
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(static_cast<unsigned long>(policy.rng_seed));
  const Natural span = n - 3;
  for (u64 i = 0; i < policy.mr_rounds; ++i) {
    Natural a = rng.get_z_range(span) + 2;
    if (!strong_probable_prime(n, a)) return Primality::Composite;
  }
  return Primality::ProbablePrime;
}

TrialDivisionResult trial_division(const Natural& n, const FactorPolicy& policy) {
  if (n < 1) throw DomainError("trial_division: n must be >= 1");
  TrialDivisionResult out;
  out.remaining = n;
  Natural& rem = out.remaining;
  auto take = [&](u64 p) {
    if (!mpz_divisible_ui_p(rem.get_mpz_t(), p)) return;
    u64 e = 0;
    while (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
      mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
      ++e;
    }
    out.found.emplace_back(Natural(static_cast<unsigned long>(p)), e);
  };
  auto table = prime_table(policy.trial_bound);
  const u64 modulus = policy.residue_modulus.value_or(1);
  if (modulus >= 2) {
    for (u64 p = modulus + 1; p <= policy.trial_bound && rem > 1; p += modulus) {
      if (table->is_prime(p)) take(p);
    }
    return out;
  }
  for (u64 p : table->primes()) {
    if (p > policy.trial_bound || rem == 1) break;
    if (rem < Natural(static_cast<unsigned long>(p)) * p) {
      // What is left has no factor below p, so it is prime.
      if (rem <= policy.trial_bound) {
        out.found.emplace_back(rem, 1);
        rem = 1;
      }
      break;
    }
    take(p);
  }
  return out;
}

std::optional<Natural> pollard_rho(const Natural& n, const FactorPolicy& policy) {
  if (n < 4 || passes(is_probable_prime(n, policy))) {
    throw std::invalid_argument("pollard_rho: argument must be composite");
  }
  if (mpz_even_p(n.get_mpz_t())) return Natural(2);
  std::mt19937_64 rng(policy.rng_seed);
  return rho_mpz(n, policy.rho_budget, rng, Deadline(policy.time_limit_secs));
}

std::optional<Natural> pollard_p_minus_1(const Natural& n, const FactorPolicy& policy) {
  if (n < 4 || passes(is_probable_prime(n, policy))) {
    throw std::invalid_argument("pollard_p_minus_1: argument must be composite");
  }
  const mpz_srcptr N = n.get_mpz_t();
  Natural a = 3, g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), N);
  if (g != 1) return g;
  if (policy.residue_modulus && *policy.residue_modulus > 1) {
    mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), *policy.residue_modulus, N);
  }
  const u64 bound = policy.p_minus_1_bound;
  auto table = prime_table(bound);

  // Prime powers are applied level by level (all q, then all q with q^2 <= B, ...)
  // so that two primes whose p-1 share the largest prime can still be separated.
  std::vector<u64> steps;
  for (u64 level = 1;; ++level) {
    bool any = false;
    for (u64 q : table->primes()) {
      if (q > bound) break;
      u128 qk = 1;
      for (u64 i = 0; i < level && qk <= bound; ++i) qk *= q;
      if (qk > bound) break;
      steps.push_back(q);
      any = true;
    }
    if (!any) break;
  }

  auto gcd_minus_one = [&](const Natural& v) {
    Natural t = v - 1, r;
    mpz_gcd(r.get_mpz_t(), t.get_mpz_t(), N);
    return r;
  };
  constexpr std::size_t kCheckEvery = 64;
  Natural checkpoint = a;
  std::size_t checkpoint_at = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), steps[i], N);
    if ((i + 1) % kCheckEvery != 0 && i + 1 != steps.size()) continue;
    g = gcd_minus_one(a);
    if (g == 1) {
      checkpoint = a;
      checkpoint_at = i + 1;
      continue;
    }
    if (g != n) return g;
    // Overshot: replay from the last checkpoint one step at a time.
    Natural b = checkpoint;
    for (std::size_t j = checkpoint_at; j <= i; ++j) {
      mpz_powm_ui(b.get_mpz_t(), b.get_mpz_t(), steps[j], N);
      g = gcd_minus_one(b);
      if (g == 1) continue;
      if (g != n) return g;
      return std::nullopt;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::pair<Natural, u64>> perfect_power(const Natural& n) {
  if (n < 4) return std::nullopt;
  const u64 bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  auto table = prime_table();
  Natural root;
  for (u64 k : table->primes()) {
    if (k > bits) break;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) return std::make_pair(root, k);
  }
  return std::nullopt;
}

Factorization factor(const Natural& n, const FactorPolicy& policy) {
  if (n < 1) throw DomainError("factor: n must be >= 1");
  Factorization out;
  if (n == 1) return out;

  const Deadline deadline(policy.time_limit_secs);
  std::mt19937_64 rng(policy.rng_seed);

  auto trial = trial_division(n, policy);
  for (const auto& [p, e] : trial.found) out.add(p, e);

  std::vector<std::pair<Natural, u64>> work;
  if (trial.remaining > 1) work.emplace_back(trial.remaining, 1);
  while (!work.empty()) {
    auto [m, mult] = std::move(work.back());
    work.pop_back();
    if (m == 1) continue;
    if (passes(is_probable_prime(m, policy))) {
      out.add(m, mult);
      continue;
    }
    if (auto pp = perfect_power(m)) {
      work.emplace_back(pp->first, mult * pp->second);
      continue;
    }
    std::optional<Natural> d;
    if (mpz_even_p(m.get_mpz_t())) {
      d = Natural(2);
    } else if (!deadline.expired()) {
      d = pollard_p_minus_1(m, policy);
      if (!d) d = rho_mpz(m, policy.rho_budget, rng, deadline);
    }
    if (!d) {
      Natural power;
      mpz_pow_ui(power.get_mpz_t(), m.get_mpz_t(), mult);
      out.add_cofactor(power);
      continue;
    }
    Natural rest = m / *d;
    work.emplace_back(std::move(rest), mult);
    work.emplace_back(std::move(*d), mult);
  }
  out.normalize(policy);
  if (out.value() != n) throw std::logic_error("factor: product reconstruction failed for " + n.get_str());
  return out;
}

Factorization refine(const Factorization& partial, const FactorPolicy& policy) {
  if (!partial.cofactor()) return partial;
  Factorization out;
  for (const auto& [p, e] : partial.factors()) out.add(p, e);
  out.merge(factor(*partial.cofactor(), policy));
  out.normalize(policy);
  return out;
}

}  // namespace mersdiv
