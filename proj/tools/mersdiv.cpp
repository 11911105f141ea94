// mersdiv: reproduce the divisor tables for 2^n - 1 and 2^n + 1, run the
// conjecture scans, and manage the factor store.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mersdiv/experiments.hpp"

namespace fs = std::filesystem;
using namespace mersdiv;

namespace {

enum Exit { kOk = 0, kGeneric = 1, kParse = 2, kIncomplete = 3, kBudget = 4 };

struct Globals {
  std::string store_path;
  std::vector<std::string> imports;
  double budget_secs = 60;
  u64 seed = 1;
  unsigned workers = 1;
  std::string format = "csv";
  std::string out_path;
  u64 native_max_d = 256;
};

struct Session {
  FactorStore store;
  std::optional<MersenneData> data;
};

FactorPolicy policy_from(const Globals& g) {
  FactorPolicy p;
  p.rng_seed = g.seed;
  p.time_limit_secs = g.budget_secs;
  return p;
}

// "tau-minus:PATH" attaches a b-file; anything else is a store file.
void load(const Globals& g, Session& s) {
  if (!g.store_path.empty() && fs::exists(g.store_path)) s.store.import_file(g.store_path);
  DataOptions opts;
  opts.policy = policy_from(g);
  opts.native_max_phi = g.native_max_d;
  opts.workers = g.workers;
  s.data.emplace(s.store, opts);
  for (const std::string& spec : g.imports) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
      if (auto kind = parse_bfile_kind(spec.substr(0, colon))) {
        s.data->attach(import_bfile(*kind, spec.substr(colon + 1)));
        continue;
      }
    }
    s.store.import_file(spec);
  }
}

void save(const Globals& g, const Session& s) {
  if (!g.store_path.empty()) s.store.export_file(g.store_path);
}

void emit(const Globals& g, const Table& t) {
  const OutputFormat f = g.format == "tsv" ? OutputFormat::Tsv : OutputFormat::Csv;
  if (g.out_path.empty()) {
    write_table(std::cout, t, f);
    return;
  }
  std::ofstream out(g.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + g.out_path);
  write_table(out, t, f);
}

StoreKey parse_target(const std::vector<std::string>& words) {
  if (words.size() == 1) return {StoreKind::MersenneMinus, 0};
  if (words.size() != 2) throw std::invalid_argument("expected 'phi2 D', 'm- N', 'm+ N' or a number");
  auto kind = parse_kind_token(words[0]);
  if (!kind) throw std::invalid_argument("unknown kind '" + words[0] + "'");
  const u64 index = std::stoull(words[1]);
  if (index == 0) throw std::invalid_argument("index must be >= 1");
  return {*kind, index};
}

int cmd_factor(const Globals& g, Session& s, const std::vector<std::string>& words) {
  const auto start = std::chrono::steady_clock::now();
  const StoreKey key = parse_target(words);
  Factorization f;
  if (key.index == 0) {
    const Natural n(words[0]);
    if (n <= 0) throw std::invalid_argument("expected a positive integer");
    std::cerr << "factoring " << n.get_str().size() << "-digit number\n";
    f = factor(n, policy_from(g));
  } else {
    std::cerr << "factoring " << key.to_string() << " (" << key_value(key).get_str().size() << " digits)\n";
    if (key.kind == StoreKind::Phi2) {
      s.data->prefetch_phi2(std::vector<u64>{key.index});
      f = s.data->phi2_factorization(key.index);
    } else {
      const Sign sign = key.kind == StoreKind::MersenneMinus ? Sign::Minus : Sign::Plus;
      const auto ds = cyclotomic_indices(key.index, sign);
      s.data->prefetch_phi2(ds);
      f = factor_mersenne(key.index, sign, *s.data);
    }
  }
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  std::cerr << (f.complete() ? "complete" : "partial") << " after " << took.count() << " s\n";
  std::cout << f.to_string() << '\n';
  return f.complete() ? kOk : kBudget;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divisor statistics of Mersenne numbers 2^n - 1 and 2^n + 1"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--store", g.store_path, "Factor store file (read at start, rewritten at exit)")
      ->envname("MERSDIV_STORE");
  app.add_option("--import", g.imports,
                 "Store file to merge, or KIND:PATH b-file with KIND tau-minus, tau-plus or omega-phi2")
      ->envname("MERSDIV_IMPORT");
  app.add_option("--budget-secs", g.budget_secs, "Wall-clock limit per factoring job")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber)
      ->envname("MERSDIV_BUDGET_SECS");
  app.add_option("--seed", g.seed, "Random seed for rho and Miller-Rabin")->capture_default_str()->envname("MERSDIV_SEED");
  app.add_option("--workers", g.workers, "Parallel factoring jobs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("MERSDIV_WORKERS");
  app.add_option("--format", g.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "tsv"}))
      ->envname("MERSDIV_FORMAT");
  app.add_option("--out", g.out_path, "Write output here instead of stdout")->envname("MERSDIV_OUT");
  app.add_option("--native-max-d", g.native_max_d, "Largest d for which Phi_d(2) is factored natively")
      ->capture_default_str()
      ->envname("MERSDIV_NATIVE_MAX_D");

  u64 limit = 120, max_d = 40, max_n = 100, log_n = 50, x = 1'000'000, k_max = 20;
  std::string c_text = "10";
  std::string hcn_limit = "1000000";
  std::vector<std::string> target;
  std::vector<std::string> import_paths;
  std::string export_path;

  auto* t1 = app.add_subcommand("table1", "Indices of highly composite Mersenne numbers");
  t1->add_option("--limit", limit, "Largest N")->capture_default_str()->check(CLI::PositiveNumber);
  auto* t2 = app.add_subcommand("table2", "omega(Phi_d(2)) and omega / log d");
  t2->add_option("--max-d", max_d, "Largest d")->capture_default_str()->check(CLI::PositiveNumber);
  auto* f1 = app.add_subcommand("figure1", "tau(2^n - 1)");
  f1->add_option("--max-n", max_n, "Largest n")->capture_default_str()->check(CLI::PositiveNumber);
  auto* f2 = app.add_subcommand("figure2", "f(2n) / f(n)");
  f2->add_option("--max-n", max_n, "Largest n")->capture_default_str()->check(CLI::PositiveNumber);
  auto* f3 = app.add_subcommand("figure3", "omega(Phi_d(2))");
  f3->add_option("--max-d", max_d, "Largest d")->capture_default_str()->check(CLI::PositiveNumber);
  auto* ls = app.add_subcommand("log-sum", "sum log(2^k - 1) against n(n+1) log 2 / 2");
  ls->add_option("n", log_n, "Number of terms")->capture_default_str()->check(CLI::PositiveNumber);
  auto* od = app.add_subcommand("omega-dist", "Counts of n <= x with Omega(n) = K");
  od->add_option("--x", x, "Sieve limit")->capture_default_str()->check(CLI::Range(u64{1}, kOmegaSieveLimit));
  od->add_option("--k-max", k_max, "Largest K")->capture_default_str();
  auto* fa = app.add_subcommand("factor", "Factor 'phi2 D', 'm- N', 'm+ N' or a plain number");
  fa->add_option("target", target, "What to factor")->required()->expected(1, 2);
  auto* im = app.add_subcommand("import", "Merge store files into --store");
  im->add_option("paths", import_paths, "Store files")->required();
  auto* ex = app.add_subcommand("export", "Write the store in canonical form");
  ex->add_option("path", export_path, "Destination")->required();
  auto* c1 = app.add_subcommand("check-conj1", "tau(2^N + 1)/N over the HCM indices");
  c1->add_option("--limit", limit, "Largest N")->capture_default_str()->check(CLI::PositiveNumber);
  auto* c2 = app.add_subcommand("check-conj2", "omega(Phi_d(2)) <= c log d");
  c2->add_option("--max-d", max_d, "Largest d")->capture_default_str()->check(CLI::Range(u64{2}, ~u64{0}));
  c2->add_option("--c", c_text, "Constant c")->capture_default_str();
  auto* ci = app.add_subcommand("check-invariants", "Finite identities and inequalities");
  auto* hc = app.add_subcommand("hcn", "Highly composite numbers with their tau exponent");
  hc->add_option("--limit", hcn_limit, "Largest N")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kParse;
  }

  Session s;
  try {
    load(g, s);
    MersenneData& data = *s.data;
    int rc = kOk;
    if (*t1) {
      emit(g, table1(limit, data));
    } else if (*t2) {
      emit(g, table2(max_d, data));
    } else if (*f1) {
      emit(g, figure1(max_n, data));
    } else if (*f2) {
      emit(g, figure2(max_n, data));
    } else if (*f3) {
      emit(g, figure3(max_d, data));
    } else if (*ls) {
      const Table t = log_sum_report(log_n);
      emit(g, t);
      if (t.rows.front().back() != "true") rc = kGeneric;
    } else if (*od) {
      emit(g, omega_distribution_report(x, k_max));
    } else if (*fa) {
      rc = cmd_factor(g, s, target);
    } else if (*im) {
      if (g.store_path.empty()) throw std::invalid_argument("import needs --store");
      for (const auto& p : import_paths) s.store.import_file(p);
      std::cerr << s.store.size() << " records\n";
    } else if (*ex) {
      s.store.export_file(export_path);
    } else if (*c1) {
      emit(g, conjecture1_report(limit, data));
    } else if (*c2) {
      const Table t = conjecture2_report(max_d, Real(c_text), data);
      emit(g, t);
      if (t.rows.front()[2] != "0") rc = kGeneric;
    } else if (*ci) {
      const auto results = check_invariants({}, data);
      emit(g, invariants_report(results));
      for (const auto& r : results) {
        if (!r.failures.empty()) rc = kGeneric;
      }
    } else if (*hc) {
      emit(g, hcn_report(Natural(hcn_limit)));
    }
    save(g, s);
    return rc;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const IncompleteData& e) {
    std::cerr << "incomplete data: " << e.what() << '\n';
    try {
      save(g, s);
    } catch (const std::exception& se) {
      std::cerr << "error: " << se.what() << '\n';
    }
    return e.budget_exhausted() ? kBudget : kIncomplete;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGeneric;
  }
}
