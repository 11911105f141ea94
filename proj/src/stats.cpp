#include "mersdiv/stats.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <sstream>
#include <thread>

namespace mersdiv {

namespace {

std::string join(const std::vector<u64>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

BFileKind tau_kind(Sign sign) {
  return sign == Sign::Minus ? BFileKind::TauMersenneMinus : BFileKind::TauMersennePlus;
}

StoreKind store_kind(Sign sign) {
  return sign == Sign::Minus ? StoreKind::MersenneMinus : StoreKind::MersennePlus;
}

const char* sign_text(Sign sign) { return sign == Sign::Minus ? "-" : "+"; }

Natural pow2(u64 e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

// Full factorization from pieces or from a stored whole-number record.
Factorization complete_factorization(u64 n, Sign sign, MersenneData& data) {
  const auto ds = cyclotomic_indices(n, sign);
  std::vector<u64> missing;
  for (u64 d : ds) {
    if (!data.natively_available(d)) missing.push_back(d);
  }
  Assembly a;
  if (missing.empty()) {
    a = assemble_mersenne(n, sign, data);
    if (a.factorization.complete()) return a.factorization;
    missing = a.incomplete;
  }
  if (auto rec = data.store().get({store_kind(sign), n}); rec && rec->factorization.complete()) {
    return rec->factorization;
  }
  const bool budget = std::any_of(missing.begin(), missing.end(), [&](u64 d) { return data.budget_exhausted(d); });
  throw IncompleteData("2^" + std::to_string(n) + sign_text(sign) + "1 needs Phi_d(2) for d = " + join(missing),
                       missing, budget);
}

void prefetch_for(u64 max_n, Sign sign, MersenneData& data) {
  std::set<u64> ds;
  for (u64 n = 1; n <= max_n; ++n) {
    for (u64 d : cyclotomic_indices(n, sign)) ds.insert(d);
  }
  std::vector<u64> list(ds.begin(), ds.end());
  data.prefetch_phi2(list);
}

}  // namespace

IncompleteData::IncompleteData(const std::string& what, std::vector<u64> missing, bool budget_exhausted)
    : std::runtime_error(what), missing_(std::move(missing)), budget_exhausted_(budget_exhausted) {}

MersenneData::MersenneData(FactorStore& store, DataOptions options)
    : store_(store), options_(std::move(options)) {}

void MersenneData::attach(BFile file) {
  const BFileKind kind = file.kind;
  bfiles_[kind] = std::move(file);
}

const BFile* MersenneData::bfile(BFileKind kind) const {
  auto it = bfiles_.find(kind);
  return it == bfiles_.end() ? nullptr : &it->second;
}

bool MersenneData::natively_available(u64 d) const {
  if (d <= 1) return true;
  auto rec = store_.get({StoreKind::Phi2, d});
  if (rec) return rec->factorization.complete();
  return d <= options_.native_max_phi;
}

bool MersenneData::budget_exhausted(u64 d) const {
  auto rec = store_.get({StoreKind::Phi2, d});
  return rec && rec->provenance == Provenance::Computed && !rec->factorization.complete();
}

Factorization MersenneData::phi2_factorization(u64 d) {
  if (d <= 1) return {};
  const StoreKey key{StoreKind::Phi2, d};
  auto rec = store_.get(key);
  if (!rec && d <= options_.native_max_phi) {
    store_.upsert(StoreRecord::make(key, factor_phi2(d, options_.policy), Provenance::Computed, options_.policy));
    rec = store_.get(key);
  }
  if (rec) return rec->factorization;
  // Nothing known beyond the value itself.
  const Natural value = phi2(d);
  Factorization f;
  if (passes(is_probable_prime(value, options_.policy))) {
    f.add(value);
  } else {
    f.add_cofactor(value);
  }
  return f;
}

std::optional<u64> MersenneData::imported_phi2_omega(u64 d) {
  const BFile* b = bfile(BFileKind::OmegaPhi2);
  if (!b) return std::nullopt;
  auto v = b->find(d);
  if (!v) return std::nullopt;
  mark_used(BFileKind::OmegaPhi2);
  return v->get_ui();
}

void MersenneData::prefetch_phi2(std::span<const u64> ds) {
  std::vector<u64> todo;
  for (u64 d : ds) {
    if (d <= 1 || d > options_.native_max_phi) continue;
    if (store_.get({StoreKind::Phi2, d})) continue;
    todo.push_back(d);
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
  if (todo.empty()) return;

  std::vector<Factorization> results(todo.size());
  std::vector<std::exception_ptr> errors(todo.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      try {
        results[i] = factor_phi2(todo[i], options_.policy);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::clamp<unsigned>(options_.workers, 1, static_cast<unsigned>(todo.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    store_.upsert(StoreRecord::make({StoreKind::Phi2, todo[i]}, std::move(results[i]), Provenance::Computed,
                                    options_.policy));
  }
}

std::vector<u64> cyclotomic_indices(u64 n, Sign sign) {
  if (n == 0) throw DomainError("cyclotomic_indices: n must be >= 1");
  if (sign == Sign::Minus) return divisors(n);
  std::vector<u64> out;
  for (u64 d : divisors(2 * n)) {
    if (n % d != 0) out.push_back(d);
  }
  return out;
}

Assembly assemble_mersenne(u64 n, Sign sign, MersenneData& data) {
  Assembly a;
  for (u64 d : cyclotomic_indices(n, sign)) {
    const Factorization piece = data.phi2_factorization(d);
    if (!piece.complete()) a.incomplete.push_back(d);
    a.factorization.merge(piece);
  }
  return a;
}

Factorization factor_mersenne(u64 n, Sign sign, MersenneData& data) {
  return assemble_mersenne(n, sign, data).factorization;
}

Natural tau_mersenne(u64 n, Sign sign, MersenneData& data) {
  try {
    return complete_factorization(n, sign, data).tau();
  } catch (const IncompleteData& e) {
    if (const BFile* b = data.bfile(tau_kind(sign))) {
      if (auto v = b->find(n)) {
        data.mark_used(tau_kind(sign));
        return *v;
      }
    }
    throw IncompleteData("tau(2^" + std::to_string(n) + sign_text(sign) + "1) unavailable: " + e.what(),
                         e.missing(), e.budget_exhausted());
  }
}

OmegaCount omega_mersenne(u64 n, Sign sign, MersenneData& data) {
  try {
    return {complete_factorization(n, sign, data).omega(), true};
  } catch (const IncompleteData&) {
  }
  // Cofactors of distinct pieces are coprime, so each contributes a new prime.
  OmegaCount out{0, false};
  Factorization known;
  u64 partial_pieces = 0;
  for (u64 d : cyclotomic_indices(n, sign)) {
    Factorization piece;
    if (data.natively_available(d)) {
      piece = data.phi2_factorization(d);
    } else if (auto rec = data.store().get({StoreKind::Phi2, d})) {
      piece = rec->factorization;
    } else {
      ++partial_pieces;
      continue;
    }
    if (!piece.complete()) ++partial_pieces;
    for (const auto& [p, e] : piece.factors()) known.add(p, e);
  }
  out.value = known.omega() + partial_pieces;
  return out;
}

Natural f_sum(u64 n, MersenneData& data) {
  prefetch_for(n, Sign::Minus, data);
  Natural total = 0;
  std::vector<u64> missing;
  bool budget = false;
  for (u64 k = 1; k <= n; ++k) {
    try {
      total += tau_mersenne(k, Sign::Minus, data);
    } catch (const IncompleteData& e) {
      budget = budget || e.budget_exhausted();
      missing.push_back(k);
    }
  }
  if (!missing.empty()) {
    throw IncompleteData("f(" + std::to_string(n) + ") needs tau(2^k-1) for k = " + join(missing), missing, budget);
  }
  return total;
}

Natural f_prime_sum(u64 n) {
  Natural total = 0;
  for (u64 k = 1; k <= n; ++k) total += pow2(tau_small(k));
  return total;
}

SummarySeries ratio_series(u64 max_n, MersenneData& data) {
  prefetch_for(2 * max_n, Sign::Minus, data);
  SummarySeries s;
  std::vector<u64> missing;
  bool budget = false;
  Natural f = 0, fp = 0;
  for (u64 k = 1; k <= 2 * max_n; ++k) {
    try {
      f += tau_mersenne(k, Sign::Minus, data);
    } catch (const IncompleteData& e) {
      budget = budget || e.budget_exhausted();
      missing.push_back(k);
    }
    fp += pow2(tau_small(k));
    s.f.push_back(f);
    s.f_prime.push_back(fp);
  }
  if (!missing.empty()) {
    throw IncompleteData("f(2n)/f(n) needs tau(2^k-1) for k = " + join(missing), missing, budget);
  }
  for (u64 n = 1; n <= max_n; ++n) {
    Rational q(s.f[2 * n - 1], s.f[n - 1]);
    q.canonicalize();
    s.ratio.push_back(q);
  }
  return s;
}

std::vector<u64> hcm_index_list(u64 limit, MersenneData& data) {
  prefetch_for(limit, Sign::Minus, data);
  std::vector<u64> out;
  std::vector<u64> missing;
  bool budget = false;
  Natural best = 0;
  for (u64 k = 1; k <= limit; ++k) {
    Natural t;
    try {
      t = tau_mersenne(k, Sign::Minus, data);
    } catch (const IncompleteData& e) {
      budget = budget || e.budget_exhausted();
      missing.push_back(k);
      continue;
    }
    if (t > best) {
      best = t;
      out.push_back(k);
    }
  }
  if (!missing.empty()) {
    throw IncompleteData("record scan needs tau(2^k-1) for k = " + join(missing), missing, budget);
  }
  return out;
}

std::vector<HcmRow> hcm_indices(u64 limit, MersenneData& data) {
  const auto indices = hcm_index_list(limit, data);
  std::vector<u64> plus_pieces;
  for (u64 n : indices) {
    for (u64 d : cyclotomic_indices(n, Sign::Plus)) plus_pieces.push_back(d);
  }
  data.prefetch_phi2(plus_pieces);
  std::vector<HcmRow> rows;
  std::vector<u64> missing;
  bool budget = false;
  for (u64 n : indices) {
    HcmRow row;
    row.n = n;
    row.tau_minus = tau_mersenne(n, Sign::Minus, data);
    try {
      Rational q(tau_mersenne(n, Sign::Plus, data), Natural(static_cast<unsigned long>(n)));
      q.canonicalize();
      row.ratio_plus = q;
    } catch (const IncompleteData& e) {
      budget = budget || e.budget_exhausted();
      missing.push_back(n);
    }
    rows.push_back(std::move(row));
  }
  if (!missing.empty()) {
    throw IncompleteData("tau(2^N+1) unavailable for N = " + join(missing), missing, budget);
  }
  return rows;
}

std::string ratio_text(const Rational& q) { return table_decimal(q, 4); }

CompareCheck compare_lower_bound(u64 k, MersenneData& data) {
  const Factorization f = complete_factorization(k, Sign::Minus, data);
  CompareCheck c;
  c.tau = f.tau();
  c.omega = f.omega();
  c.tau_k = tau_small(k);
  c.holds = c.tau >= pow2(c.omega) && 4 * pow2(c.omega) >= pow2(c.tau_k);
  return c;
}

TauUpperCheck tau_upper_bound_check(u64 n, MersenneData& data) {
  if (n < 2) throw DomainError("tau_upper_bound_check: n must be >= 2");
  const Factorization f = complete_factorization(n, Sign::Minus, data);
  TauUpperCheck c;
  c.tau = f.tau();
  c.omega = f.omega();
  mpz_ui_pow_ui(c.bound.get_mpz_t(), n, c.omega);
  c.holds = c.tau <= c.bound;
  return c;
}

OmegaDecomposition omega_decomposition_check(u64 n, MersenneData& data) {
  OmegaDecomposition c;
  std::set<Natural> known;
  std::vector<Natural> cofactors;
  u64 known_sum = 0;
  for (u64 d : divisors(n)) {
    const Factorization piece = data.phi2_factorization(d);
    for (const auto& [p, e] : piece.factors()) known.insert(p);
    known_sum += piece.omega();
    if (piece.cofactor()) cofactors.push_back(*piece.cofactor());
  }
  for (std::size_t i = 0; i < cofactors.size(); ++i) {
    for (std::size_t j = i + 1; j < cofactors.size(); ++j) {
      if (gcd(cofactors[i], cofactors[j]) != 1) {
        throw std::logic_error("omega_decomposition_check: cofactors of 2^" + std::to_string(n) +
                               "-1 share a factor");
      }
    }
  }
  c.counts_exact = cofactors.empty();
  c.lhs = known.size() + cofactors.size();
  c.rhs_sum = known_sum + cofactors.size();
  c.defect = c.rhs_sum - c.lhs;
  c.bound = n == 1 ? 0 : big_omega_small(n);
  c.holds = c.rhs_sum >= c.lhs && c.defect <= c.bound;
  return c;
}

std::vector<HcmRow> conjecture1_table(u64 limit, MersenneData& data) { return hcm_indices(limit, data); }

Conjecture2Scan conjecture2_scan(u64 max_d, const Real& c, MersenneData& data) {
  std::vector<u64> ds;
  for (u64 d = 2; d <= max_d; ++d) ds.push_back(d);
  data.prefetch_phi2(ds);
  Conjecture2Scan scan;
  std::vector<u64> missing;
  for (u64 d : ds) {
    const OmegaPhi2 o = omega_phi2(d, data);
    if (!o.exact) {
      missing.push_back(d);
      continue;
    }
    const Real log_d = natural_log(d);
    const Real ratio = Real(o.omega) / log_d;
    if (Real(o.omega) > c * log_d) scan.exceptions.push_back(d);
    if (scan.argmax_d == 0 || ratio > scan.sup_ratio) {
      scan.sup_ratio = ratio;
      scan.argmax_d = d;
    }
  }
  if (!missing.empty()) {
    const bool budget = std::any_of(missing.begin(), missing.end(), [&](u64 d) { return data.budget_exhausted(d); });
    throw IncompleteData("omega(Phi_d(2)) unknown for d = " + join(missing), missing, budget);
  }
  return scan;
}

Theorem3Check theorem3_bound_check(u64 n, MersenneData& data) {
  if (n == 0) throw DomainError("theorem3_bound_check: N must be >= 1");
  Theorem3Check c;
  c.odd_part = n;
  while (c.odd_part % 2 == 0) c.odd_part /= 2;
  c.tau_odd_part = tau_small(c.odd_part);
  c.tau_plus = tau_mersenne(n, Sign::Plus, data);
  c.bound = c.tau_odd_part >= 2 ? pow2(c.tau_odd_part - 2) : Natural(1);
  c.holds = c.tau_plus >= c.bound;
  return c;
}

}  // namespace mersdiv
