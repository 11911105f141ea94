#include "mersdiv/experiments.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

namespace mersdiv {

namespace {

std::string field(const std::string& s, char sep) {
  if (s.find_first_of(std::string{sep, '"', '\n', '\r'}) == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string str(u64 v) { return std::to_string(v); }

std::string join(const std::vector<u64>& xs, const char* sep = " ") {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? sep : "") << xs[i];
  return os.str();
}

void add_source_notes(Table& t, const MersenneData& data) {
  t.notes.push_back("source: cyclotomic factorizations (computed or from the factor store)");
  for (BFileKind kind : data.used_bfiles()) {
    t.notes.push_back("source: imported " + std::string(bfile_kind_name(kind)) + " b-file");
  }
}

std::vector<u64> range_1(u64 n) {
  std::vector<u64> ds;
  for (u64 d = 1; d <= n; ++d) ds.push_back(d);
  return ds;
}

Natural pow2(u64 e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

}  // namespace

void write_table(std::ostream& out, const Table& table, OutputFormat format) {
  const char sep = format == OutputFormat::Csv ? ',' : '\t';
  for (const auto& note : table.notes) out << "# " << note << '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << sep;
      out << field(cells[i], sep);
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

std::string render_table(const Table& table, OutputFormat format) {
  std::ostringstream os;
  write_table(os, table, format);
  return os.str();
}

Table table1(u64 limit, MersenneData& data) {
  Table t;
  t.header = {"N", "tau_minus", "tau_plus_over_N"};
  for (const HcmRow& row : hcm_indices(limit, data)) {
    t.rows.push_back({str(row.n), row.tau_minus.get_str(), ratio_text(*row.ratio_plus)});
  }
  add_source_notes(t, data);
  return t;
}

Table table2(u64 max_d, MersenneData& data) {
  data.prefetch_phi2(range_1(max_d));
  Table t;
  t.header = {"d", "omega", "ratio"};
  for (u64 d = 1; d <= max_d; ++d) {
    const OmegaPhi2 o = omega_phi2(d, data);
    if (o.exact) {
      t.rows.push_back({str(d), str(o.omega), o.ratio});
    } else {
      t.rows.push_back({str(d), ">=" + str(o.omega), ""});
    }
  }
  add_source_notes(t, data);
  return t;
}

Table figure1(u64 max_n, MersenneData& data) {
  std::vector<u64> ds;
  for (u64 n = 1; n <= max_n; ++n) {
    if (data.natively_available(n)) ds.push_back(n);
  }
  data.prefetch_phi2(ds);
  Table t;
  t.header = {"n", "tau"};
  std::vector<u64> missing;
  bool budget = false;
  for (u64 n = 1; n <= max_n; ++n) {
    try {
      t.rows.push_back({str(n), tau_mersenne(n, Sign::Minus, data).get_str()});
    } catch (const IncompleteData& e) {
      missing.push_back(n);
      budget = budget || e.budget_exhausted();
    }
  }
  if (!missing.empty()) {
    throw IncompleteData("tau(2^n-1) unavailable for n = " + join(missing, ","), missing, budget);
  }
  add_source_notes(t, data);
  return t;
}

Table figure2(u64 max_n, MersenneData& data) {
  const SummarySeries s = ratio_series(max_n, data);
  Table t;
  t.header = {"n", "ratio", "ratio_exact"};
  for (u64 n = 1; n <= max_n; ++n) {
    const Rational& q = s.ratio[n - 1];
    t.rows.push_back({str(n), fixed_half_even(q, 4), rational_string(q)});
  }
  add_source_notes(t, data);
  return t;
}

Table figure3(u64 max_d, MersenneData& data) {
  data.prefetch_phi2(range_1(max_d));
  Table t;
  t.header = {"d", "omega"};
  for (u64 d = 1; d <= max_d; ++d) {
    const OmegaPhi2 o = omega_phi2(d, data);
    t.rows.push_back({str(d), (o.exact ? "" : ">=") + str(o.omega)});
  }
  add_source_notes(t, data);
  return t;
}

Table conjecture1_report(u64 limit, MersenneData& data) {
  Table t;
  t.header = {"N", "tau_plus_over_N", "exact"};
  for (const HcmRow& row : conjecture1_table(limit, data)) {
    t.rows.push_back({str(row.n), ratio_text(*row.ratio_plus), rational_string(*row.ratio_plus)});
  }
  add_source_notes(t, data);
  return t;
}

Table conjecture2_report(u64 max_d, const Real& c, MersenneData& data) {
  const Conjecture2Scan scan = conjecture2_scan(max_d, c, data);
  Table t;
  t.header = {"max_d", "c", "exception_count", "exceptions", "sup_ratio", "argmax_d"};
  t.rows.push_back({str(max_d), c.str(), str(scan.exceptions.size()), join(scan.exceptions),
                    fixed_half_even(scan.sup_ratio, 4), str(scan.argmax_d)});
  add_source_notes(t, data);
  return t;
}

Table hcn_report(const Natural& limit) {
  Table t;
  t.header = {"N", "tau", "exponents", "tau_exponent"};
  for (const HcnRecord& r : enumerate_hcn(limit)) {
    std::string exponent = r.n > 2 ? fixed_half_even(hcn_tau_exponent(r), 6) : "";
    t.rows.push_back({r.n.get_str(), r.tau.get_str(), join(r.exponents), exponent});
  }
  return t;
}

LogSumCheck log_sum_check(u64 n) {
  if (n == 0) throw DomainError("log_sum_check: n must be >= 1");
  LogSumCheck c;
  c.n = n;
  const Real ln2 = natural_log(u64{2});
  Real power = 1;  // 2^-k
  for (u64 k = 1; k <= n; ++k) {
    power /= 2;
    c.sum += Real(k) * ln2 + boost::multiprecision::log(1 - power);
    c.lower_bound -= 2 * power;
  }
  c.main_term = Real(n) * Real(n + 1) / 2 * ln2;
  c.residual = c.sum - c.main_term;
  c.holds = c.residual < 0 && c.residual >= c.lower_bound;
  return c;
}

Table log_sum_report(u64 n) {
  const LogSumCheck c = log_sum_check(n);
  Table t;
  t.header = {"n", "sum", "main_term", "residual", "lower_bound", "holds"};
  t.rows.push_back({str(n), fixed_half_even(c.sum, 20), fixed_half_even(c.main_term, 20),
                    fixed_half_even(c.residual, 20), fixed_half_even(c.lower_bound, 20),
                    c.holds ? "true" : "false"});
  return t;
}

std::vector<u64> omega_distribution(u64 x, u64 k_max) {
  if (x < 1 || x > kOmegaSieveLimit) {
    throw DomainError("omega_distribution: x must be in [1, " + str(kOmegaSieveLimit) + "]");
  }
  std::vector<std::uint8_t> big_omega(x + 1, 0);
  std::vector<bool> composite(x + 1, false);
  for (u64 p = 2; p <= x; ++p) {
    if (composite[p]) continue;
    for (u64 m = p * p; m <= x; m += p) composite[m] = true;
    for (u64 q = p; q <= x; q *= p) {
      for (u64 m = q; m <= x; m += q) ++big_omega[m];
      if (q > x / p) break;
    }
  }
  std::vector<u64> counts(k_max + 1, 0);
  for (u64 m = 1; m <= x; ++m) {
    if (big_omega[m] <= k_max) ++counts[big_omega[m]];
  }
  return counts;
}

Table omega_distribution_report(u64 x, u64 k_max) {
  const auto counts = omega_distribution(x, k_max);
  Table t;
  t.header = {"K", "count", "normalized"};
  const Real log_x = natural_log(x);
  for (u64 k = 0; k <= k_max; ++k) {
    std::string normalized;
    if (k > 0 && x > 1) {
      const Real v = Real(counts[k]) * to_real(pow2(k)) / (Real(x) * Real(k) * log_x);
      normalized = fixed_half_even(v, 6);
    }
    t.rows.push_back({str(k), str(counts[k]), normalized});
  }
  return t;
}

std::vector<InvariantResult> check_invariants(const InvariantLimits& lim, MersenneData& data) {
  std::vector<InvariantResult> out;
  auto run = [&](const std::string& name, u64 first, u64 limit, auto&& check) {
    InvariantResult r;
    r.name = name;
    r.limit = limit;
    for (u64 i = first; i <= limit; ++i) {
      try {
        if (!check(i)) r.failures.push_back(i);
        ++r.checked;
      } catch (const IncompleteData&) {
        r.skipped.push_back(i);
      }
    }
    out.push_back(std::move(r));
  };

  const u64 minus_reach = std::max({lim.compare, lim.tau_upper, lim.omega_decomposition,
                                    2 * lim.tau_doubling, lim.summatory, 2 * lim.theorem3});
  std::vector<u64> ds;
  for (u64 d = 2; d <= minus_reach; ++d) {
    if (d <= data.options().native_max_phi) ds.push_back(d);
  }
  data.prefetch_phi2(ds);

  run("cyclotomic-product", 1, lim.product_identity, [](u64 n) { return product_identity_check(n); });
  run("phi-bound", 1, lim.phi_bound, [](u64 d) {
    Natural bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), 3, euler_phi(d));
    return phi2(d) <= bound;
  });
  run("bang-exceptions", 1, lim.bang, [](u64 m) { return has_primitive_divisor(m) == (m != 1 && m != 6); });
  run("compare-lower-bound", 1, lim.compare, [&](u64 k) { return compare_lower_bound(k, data).holds; });
  run("tau-upper-bound", 2, lim.tau_upper, [&](u64 n) { return tau_upper_bound_check(n, data).holds; });
  run("omega-decomposition", 1, lim.omega_decomposition,
      [&](u64 n) { return omega_decomposition_check(n, data).holds; });
  run("tau-doubling", 1, lim.tau_doubling, [&](u64 m) {
    return tau_mersenne(2 * m, Sign::Minus, data) > tau_mersenne(m, Sign::Minus, data);
  });
  {
    InvariantResult r;
    r.name = "summatory-lower-bound";
    r.limit = lim.summatory;
    Natural f = 0, fp = 0;
    for (u64 n = 1; n <= lim.summatory; ++n) {
      if (!r.skipped.empty()) {
        r.skipped.push_back(n);
        continue;
      }
      try {
        f += tau_mersenne(n, Sign::Minus, data);
      } catch (const IncompleteData&) {
        r.skipped.push_back(n);
        continue;
      }
      fp += pow2(tau_small(n));
      if (4 * f < fp) r.failures.push_back(n);
      ++r.checked;
    }
    out.push_back(std::move(r));
  }
  run("theorem3-bound", 1, lim.theorem3, [&](u64 n) { return theorem3_bound_check(n, data).holds; });
  {
    InvariantResult r;
    r.name = "hcn-tau-jump";
    r.limit = lim.hcn_jump;
    for (const HcnRecord& h : enumerate_hcn(Natural(static_cast<unsigned long>(lim.hcn_jump)))) {
      try {
        tau_jump(h);
      } catch (const std::logic_error&) {
        r.failures.push_back(h.n.get_ui());
      }
      ++r.checked;
    }
    out.push_back(std::move(r));
  }
  {
    InvariantResult r;
    r.name = "hcn-half";
    r.limit = lim.hcn_half;
    const auto hcn = enumerate_hcn(Natural(static_cast<unsigned long>(lim.hcn_half)));
    std::size_t j = 0;
    for (u64 n = 1; n <= lim.hcn_half; ++n) {
      while (j + 1 < hcn.size() && hcn[j + 1].n <= n) ++j;
      if (!(2 * hcn[j].n > n)) r.failures.push_back(n);
      ++r.checked;
    }
    out.push_back(std::move(r));
  }
  {
    InvariantResult r;
    r.name = "dirichlet-floor-sum";
    r.limit = lim.dirichlet;
    u64 tau_sum = 0;
    for (u64 n = 1; n <= lim.dirichlet; ++n) {
      tau_sum += tau_small(n);
      if (dirichlet_mean(n).floor_sum != tau_sum) r.failures.push_back(n);
      ++r.checked;
    }
    out.push_back(std::move(r));
  }
  return out;
}

Table invariants_report(const std::vector<InvariantResult>& results) {
  Table t;
  t.header = {"check", "limit", "checked", "skipped", "failures", "status"};
  for (const auto& r : results) {
    std::string status = !r.failures.empty() ? "FAIL " + join(r.failures) : r.skipped.empty() ? "ok" : "ok (partial)";
    t.rows.push_back({r.name, str(r.limit), str(r.checked), str(r.skipped.size()), str(r.failures.size()), status});
  }
  return t;
}

}  // namespace mersdiv
