#include "mersdiv/arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace mersdiv {

PrimeTable::PrimeTable(u64 bound) : bound_(bound), composite_(bound + 1, false) {
  composite_[0] = true;
  if (bound >= 1) composite_[1] = true;
  for (u64 i = 2; i * i <= bound; ++i) {
    if (composite_[i]) continue;
    for (u64 j = i * i; j <= bound; j += i) composite_[j] = true;
  }
  for (u64 i = 2; i <= bound; ++i) {
    if (!composite_[i]) primes_.push_back(i);
  }
}

bool PrimeTable::is_prime(u64 n) const {
  if (n > bound_) throw DomainError("PrimeTable::is_prime: argument exceeds table bound");
  return !composite_[n];
}

u64 PrimeTable::count_upto(u64 x) const {
  if (x > bound_) throw DomainError("PrimeTable::count_upto: argument exceeds table bound");
  return static_cast<u64>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

std::shared_ptr<const PrimeTable> prime_table(u64 at_least) {
  static std::mutex mu;
  static std::shared_ptr<const PrimeTable> table;
  std::lock_guard lock(mu);
  if (!table || table->bound() < at_least) {
    u64 bound = std::max(at_least, kDefaultPrimeBound);
    if (table) bound = std::max(bound, 2 * table->bound());
    table = std::make_shared<const PrimeTable>(bound);
  }
  return table;
}

u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError("64-bit overflow");
  return r;
}

u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod64(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod64(result, base, m);
    base = mulmod64(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // The first twelve prime bases are a proven witness set below 3.18e23.
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace {

// Brent's cycle search; n is odd, composite and not a prime power of a tiny prime.
u64 rho64(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 64;
    u64 r = 1;
    auto f = [&](u64 v) { return (mulmod64(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split64(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime64(n)) {
    out.push_back(n);
    return;
  }
  u64 d = rho64(n);
  split64(d, out);
  split64(n / d, out);
}

}  // namespace

std::vector<PrimePower> factor_small(u64 n) {
  if (n == 0) throw DomainError("factor_small: n must be >= 1");
  std::vector<PrimePower> out;
  auto table = prime_table();
  for (u64 p : table->primes()) {
    if (p * p > n) break;
    if (n % p != 0) continue;
    u64 e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n == 1) return out;
  const u64 last = table->primes().back();
  if (static_cast<u128>(last) * last >= n) {
    out.push_back({n, 1});
    return out;
  }
  std::vector<u64> rest;
  split64(n, rest);
  std::sort(rest.begin(), rest.end());
  for (u64 p : rest) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().exponent;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

u64 tau_small(u64 n) {
  u64 t = 1;
  for (auto [p, e] : factor_small(n)) t *= e + 1;
  return t;
}

u64 omega_small(u64 n) { return factor_small(n).size(); }

u64 big_omega_small(u64 n) {
  u64 k = 0;
  for (auto [p, e] : factor_small(n)) k += e;
  return k;
}

u64 euler_phi(u64 n) {
  u64 r = n;
  for (auto [p, e] : factor_small(n)) r = r / p * (p - 1);
  return r;
}

int moebius(u64 n) {
  auto f = factor_small(n);
  for (auto [p, e] : f) {
    if (e > 1) return 0;
  }
  return f.size() % 2 == 0 ? 1 : -1;
}

std::vector<u64> divisors(u64 n) {
  std::vector<u64> out{1};
  for (auto [p, e] : factor_small(n)) {
    const std::size_t base = out.size();
    u64 pk = 1;
    for (u64 k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

u64 largest_prime_factor(u64 n) {
  auto f = factor_small(n);
  return f.empty() ? 1 : f.back().prime;
}

u64 carmichael_lambda(u64 m) {
  if (m == 0) throw DomainError("carmichael_lambda: m must be >= 1");
  u64 lambda = 1;
  for (auto [p, e] : factor_small(m)) {
    u64 pk1 = 1;
    for (u64 i = 1; i < e; ++i) pk1 *= p;
    u64 l = pk1 * (p - 1);
    if (p == 2 && e >= 3) l /= 2;
    lambda = std::lcm(lambda, l);
  }
  return lambda;
}

u64 multiplicative_order(u64 a, u64 m) {
  if (m < 2) throw DomainError("multiplicative_order: modulus must be >= 2");
  if (std::gcd(a, m) != 1) throw DomainError("multiplicative_order: gcd(a, m) != 1");
  u64 order = carmichael_lambda(m);
  for (auto [q, e] : factor_small(order)) {
    for (u64 i = 0; i < e; ++i) {
      if (powmod64(a, order / q, m) != 1) break;
      order /= q;
    }
  }
  return order;
}

DirichletMean dirichlet_mean(u64 n) {
  if (n == 0) throw DomainError("dirichlet_mean: n must be >= 1");
  u64 sum = 0;
  // Blocks of equal quotient n / l.
  for (u64 l = 1; l <= n;) {
    const u64 q = n / l;
    const u64 last = n / q;
    if (__builtin_add_overflow(sum, checked_mul(q, last - l + 1), &sum)) {
      throw DomainError("dirichlet_mean: floor sum exceeds 64 bits");
    }
    l = last + 1;
  }
  DirichletMean out;
  out.floor_sum = sum;
  out.mean = Rational(Natural(static_cast<unsigned long>(sum)), Natural(static_cast<unsigned long>(n)));
  out.mean.canonicalize();
  return out;
}

u64 prime_pi(u64 x) { return prime_table(x)->count_upto(x); }

long double chebyshev_theta(u64 x) {
  auto table = prime_table(x);
  long double s = 0;
  for (u64 p : table->primes()) {
    if (p > x) break;
    s += std::log(static_cast<long double>(p));
  }
  return s;
}

Natural primorial(u64 t) {
  Natural r = 1;
  u64 bound = kDefaultPrimeBound;
  auto table = prime_table(bound);
  while (table->primes().size() < t) {
    bound *= 2;
    table = prime_table(bound);
  }
  for (u64 i = 0; i < t; ++i) r *= static_cast<unsigned long>(table->primes()[i]);
  return r;
}

Natural mersenne_minus(u64 n) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, n);
  return r - 1;
}

Natural mersenne_plus(u64 n) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, n);
  return r + 1;
}

}  // namespace mersdiv
