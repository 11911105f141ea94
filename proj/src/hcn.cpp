#include "mersdiv/hcn.hpp"

#include <algorithm>
#include <stdexcept>

namespace mersdiv {

HcnRecord HcnRecord::from_exponents(std::vector<u64> exponents) {
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) throw DomainError("HcnRecord: exponents must be positive");
    if (i > 0 && exponents[i] > exponents[i - 1]) {
      throw DomainError("HcnRecord: exponents must be nonincreasing");
    }
  }
  auto table = prime_table();
  if (exponents.size() > table->primes().size()) throw DomainError("HcnRecord: too many primes");
  HcnRecord r;
  r.n = 1;
  r.tau = 1;
  Natural pk;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    mpz_ui_pow_ui(pk.get_mpz_t(), table->primes()[i], exponents[i]);
    r.n *= pk;
    r.tau *= static_cast<unsigned long>(exponents[i] + 1);
  }
  r.exponents = std::move(exponents);
  return r;
}

namespace {

struct Candidate {
  Natural n;
  Natural tau;
  std::vector<u64> exponents;
};

void extend(const std::vector<u64>& primes, std::size_t i, const Natural& n, const Natural& tau,
            u64 max_exponent, std::vector<u64>& exps, const Natural& limit, std::vector<Candidate>& out) {
  out.push_back({n, tau, exps});
  if (i >= primes.size()) return;
  Natural m = n;
  for (u64 e = 1; e <= max_exponent; ++e) {
    m *= static_cast<unsigned long>(primes[i]);
    if (m > limit) break;
    exps.push_back(e);
    extend(primes, i + 1, m, tau * static_cast<unsigned long>(e + 1), e, exps, limit, out);
    exps.pop_back();
  }
}

}  // namespace

std::vector<HcnRecord> enumerate_hcn(const Natural& limit) {
  if (limit < 1) throw DomainError("enumerate_hcn: limit must be >= 1");
  // Only as many primes as fit in the primorial below the limit.
  std::vector<u64> primes;
  {
    auto table = prime_table();
    Natural primorial = 1;
    for (u64 p : table->primes()) {
      primorial *= static_cast<unsigned long>(p);
      if (primorial > limit) break;
      primes.push_back(p);
    }
  }
  const u64 max_e1 = mpz_sizeinbase(limit.get_mpz_t(), 2);
  std::vector<Candidate> candidates;
  std::vector<u64> exps;
  extend(primes, 0, Natural(1), Natural(1), max_e1, exps, limit, candidates);
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.n < b.n; });

  std::vector<HcnRecord> out;
  Natural best = 0;
  for (auto& c : candidates) {
    if (c.tau <= best) continue;
    best = c.tau;
    out.push_back(HcnRecord{std::move(c.n), std::move(c.exponents), std::move(c.tau)});
  }
  return out;
}

HcnRecord largest_hcn_leq(const Natural& n) {
  auto all = enumerate_hcn(n);
  HcnRecord r = std::move(all.back());
  if (2 * r.n <= n) throw std::logic_error("largest_hcn_leq: N > n/2 violated for n = " + n.get_str());
  return r;
}

Natural tau_jump(const HcnRecord& record) {
  auto doubled = record.exponents;
  if (doubled.empty()) {
    doubled.push_back(1);
  } else {
    ++doubled[0];
  }
  const Natural jump = HcnRecord::from_exponents(doubled).tau - record.tau;
  const Natural e1_plus_1 = record.exponents.empty() ? 1 : record.exponents[0] + 1;
  if (jump * e1_plus_1 != record.tau) {
    throw std::logic_error("tau_jump: tau(2N) - tau(N) != tau(N)/(e1+1) for N = " + record.n.get_str());
  }
  return jump;
}

Real hcn_tau_exponent(const HcnRecord& record) {
  if (record.n <= 2) throw DomainError("hcn_tau_exponent: N must be >= 3");
  const Real log_n = natural_log(record.n);
  return natural_log(record.tau) / natural_log(u64{2}) * boost::multiprecision::log(log_n) / log_n;
}

}  // namespace mersdiv
