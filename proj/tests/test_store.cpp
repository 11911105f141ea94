#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "mersdiv/cyclotomic.hpp"
#include "mersdiv/store.hpp"

using namespace mersdiv;
namespace fs = std::filesystem;

namespace {

Factorization of(std::initializer_list<Natural> primes, std::optional<Natural> cofactor = std::nullopt) {
  Factorization f;
  for (const auto& p : primes) f.add(p);
  if (cofactor) f.add_cofactor(*cofactor);
  return f;
}

StoreRecord imported(StoreKey key, Factorization f) {
  return StoreRecord::make(key, std::move(f), Provenance::Imported);
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("mersdiv_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string dump(const FactorStore& s) {
  std::ostringstream os;
  s.write(os);
  return os.str();
}

}  // namespace

TEST_SUITE("store") {

TEST_CASE("kind tokens and key values") {
  CHECK(kind_token(StoreKind::Phi2) == "phi2");
  CHECK(parse_kind_token("m-") == StoreKind::MersenneMinus);
  CHECK(parse_kind_token("m+") == StoreKind::MersennePlus);
  CHECK_FALSE(parse_kind_token("phi"));
  CHECK(key_value({StoreKind::Phi2, 11}) == 2047);
  CHECK(key_value({StoreKind::MersennePlus, 6}) == 65);
  CHECK(StoreKey{StoreKind::MersenneMinus, 6}.to_string() == "m- 6");
  CHECK(StoreKey{StoreKind::Phi2, 3} < StoreKey{StoreKind::Phi2, 4});
}

TEST_CASE("get and upsert") {
  FactorStore s;
  CHECK_FALSE(s.get({StoreKind::Phi2, 11}));
  CHECK(s.empty());

  s.upsert(imported({StoreKind::Phi2, 11}, of({}, 2047)));
  CHECK_FALSE(s.get({StoreKind::Phi2, 11})->factorization.complete());
  s.upsert(imported({StoreKind::Phi2, 11}, of({23, 89})));
  auto r = s.get({StoreKind::Phi2, 11});
  REQUIRE(r);
  CHECK(r->factorization.complete());
  CHECK(r->factorization.factors() == Factorization::FactorMap{{23, 1}, {89, 1}});
}

TEST_CASE("a split of the cofactor refines a Partial record") {
  const StoreKey key{StoreKind::Phi2, 29};  // 2^29 - 1 = 233 * 1103 * 2089
  FactorStore s;
  s.upsert(imported(key, of({}, phi2(29))));
  CHECK_FALSE(s.get(key)->factorization.complete());
  s.upsert(imported(key, of({233}, Natural(1103 * 2089))));
  CHECK_FALSE(s.get(key)->factorization.complete());
  CHECK(s.get(key)->factorization.exponent_of(233) == 1);
  s.upsert(imported(key, of({233, 1103, 2089})));
  const auto r = s.get(key);
  CHECK(r->factorization.complete());
  CHECK(r->factorization.omega() == 3);
  // Partial data never replaces Complete data.
  s.upsert(imported(key, of({}, phi2(29))));
  CHECK(s.get(key)->factorization.complete());
  s.upsert(imported({StoreKind::MersenneMinus, 1}, of({})));
  CHECK_FALSE(s.get({StoreKind::MersenneMinus, 1}));  // value 1 keys are not stored
}

TEST_CASE("cofactors from two sources split each other") {
  const StoreKey key{StoreKind::Phi2, 29};
  FactorStore s;
  s.upsert(imported(key, of({233}, Natural(1103 * 2089))));
  FactorStore t;
  t.upsert(imported(key, of({2089}, Natural(233 * 1103))));
  s.upsert(*t.get(key));
  const auto r = s.get(key);
  CHECK(r->factorization.complete());
  CHECK(r->factorization.factors() == Factorization::FactorMap{{233, 1}, {1103, 1}, {2089, 1}});
}

TEST_CASE("bad records are rejected") {
  FactorStore s;
  CHECK_THROWS_AS(s.upsert(imported({StoreKind::Phi2, 11}, of({23, 83}))), StoreError);
  CHECK_THROWS_AS(s.upsert(imported({StoreKind::Phi2, 11}, of({2047}))), StoreError);
  try {
    s.upsert(imported({StoreKind::Phi2, 11}, of({23})));
    FAIL("expected StoreError");
  } catch (const StoreError& e) {
    CHECK(e.key() == StoreKey{StoreKind::Phi2, 11});
  }
  CHECK(s.empty());
}

TEST_CASE("record grammar") {
  StoreRecord r = parse_record("phi2 11 = 23 89", Provenance::Imported);
  CHECK(r.key == StoreKey{StoreKind::Phi2, 11});
  CHECK(r.factorization.complete());
  CHECK(format_record(r) == "phi2 11 = 23 89");

  r = parse_record("m- 6 = 3^2 7", Provenance::Imported);
  CHECK(r.factorization.exponent_of(3) == 2);
  CHECK(format_record(r) == "m- 6 = 3^2 7");

  const Natural m89 = (Natural(1) << 89) - 1;
  r = parse_record("m- 89 = " + m89.get_str(), Provenance::Imported);
  CHECK(r.certainty.at(m89) == Certainty::Probable);
  CHECK(format_record(r) == "m- 89 = " + m89.get_str() + "?");

  r = parse_record("phi2 360 = 37361 C:12345", Provenance::Imported);
  CHECK_FALSE(r.factorization.complete());
  CHECK(format_record(r) == "phi2 360 = 37361 C:12345");

  CHECK_THROWS_AS(parse_record("phi2 11 23 89", Provenance::Imported), ParseError);
  CHECK_THROWS_AS(parse_record("phi3 11 = 23 89", Provenance::Imported), ParseError);
  CHECK_THROWS_AS(parse_record("phi2 0 = 1", Provenance::Imported), ParseError);
  CHECK_THROWS_AS(parse_record("phi2 11 = 23 8x9", Provenance::Imported), ParseError);
  CHECK_THROWS_AS(parse_record("phi2 11 = 23^0 89", Provenance::Imported), ParseError);
  CHECK_THROWS_AS(parse_record("phi2 11 = 23 C:", Provenance::Imported), ParseError);
}

TEST_CASE("read: comments, provenance, line numbers") {
  std::istringstream in(
      "# a comment\n"
      "\n"
      "phi2 11 = 23 89\n"
      "#@ provenance computed\n"
      "phi2 20 = 5 41\n");
  FactorStore s;
  s.read(in);
  CHECK(s.size() == 2);
  CHECK(s.get({StoreKind::Phi2, 11})->provenance == Provenance::Imported);
  CHECK(s.get({StoreKind::Phi2, 20})->provenance == Provenance::Computed);

  std::istringstream bad("phi2 11 = 23 89\n# fine\nphi2 12 = 14\n");
  FactorStore t;
  try {
    t.read(bad, "bad.txt");
    FAIL("expected an error");
  } catch (const StoreError& e) {
    CHECK(e.key() == StoreKey{StoreKind::Phi2, 12});
  }
  std::istringstream garbled("phi2 11 = 23 89\nphi2 x = 3\n");
  try {
    FactorStore().read(garbled, "g.txt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).starts_with("g.txt:2:"));
  }
  std::istringstream directive("#@ provenance guessed\n");
  CHECK_THROWS_AS(FactorStore().read(directive), ParseError);

  std::istringstream empty("");
  FactorStore e;
  e.read(empty);
  CHECK(e.empty());
}

TEST_CASE("export and import round-trip byte for byte") {
  FactorStore s;
  for (u64 d : {3, 11, 20, 29, 36}) {
    s.upsert(StoreRecord::make({StoreKind::Phi2, d}, factor_phi2(d), Provenance::Computed));
  }
  s.upsert(imported({StoreKind::Phi2, 67}, of({}, phi2(67))));
  s.upsert(imported({StoreKind::MersenneMinus, 89}, of({(Natural(1) << 89) - 1})));
  const fs::path p = temp_path("roundtrip.txt");
  s.export_file(p);
  FactorStore t;
  t.import_file(p);
  CHECK(dump(t) == dump(s));
  const fs::path q = temp_path("roundtrip2.txt");
  t.export_file(q);
  std::ifstream a(p), b(q);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().starts_with("# mersdiv factor store v1\n"));
  fs::remove(p);
  fs::remove(q);
  CHECK_FALSE(fs::exists(fs::path(p.string() + ".tmp")));
}

TEST_CASE("empty store exports a header-only file") {
  const fs::path p = temp_path("empty.txt");
  FactorStore().export_file(p);
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "# mersdiv factor store v1\n");
  fs::remove(p);
  CHECK_THROWS(FactorStore().import_file(p));
}

TEST_CASE("b-file parsing") {
  std::istringstream in("# tau(2^n-1)\n1 1\n2 2\n4 4\n");
  BFile b = parse_bfile(BFileKind::TauMersenneMinus, in);
  CHECK(b.entries.size() == 3);
  CHECK(b.find(4) == Natural(4));
  CHECK_FALSE(b.find(3));

  std::istringstream omega("29 3\n");
  b = parse_bfile(BFileKind::OmegaPhi2, omega);
  CHECK(b.find(29) == Natural(3));

  std::istringstream comments("# nothing\n#\n");
  CHECK(parse_bfile(BFileKind::OmegaPhi2, comments).empty());

  std::istringstream csv("n,tau\n1,1\n2,2\n3,2\n");
  b = parse_bfile(BFileKind::TauMersenneMinus, csv);
  CHECK(b.entries.size() == 3);
  std::istringstream tsv("1\t1\textra\n2\t2\n");
  CHECK(parse_bfile(BFileKind::TauMersenneMinus, tsv).entries.size() == 2);

  std::istringstream decreasing("1 1\n3 2\n2 2\n");
  try {
    parse_bfile(BFileKind::TauMersenneMinus, decreasing, "x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream repeated("1 1\n1 1\n");
  CHECK_THROWS_AS(parse_bfile(BFileKind::TauMersenneMinus, repeated), ParseError);
  std::istringstream malformed("1 1\n2 x\n");
  CHECK_THROWS_AS(parse_bfile(BFileKind::TauMersenneMinus, malformed), ParseError);
  std::istringstream single("1\n");
  CHECK_THROWS_AS(parse_bfile(BFileKind::TauMersenneMinus, single), ParseError);
  std::istringstream zero_tau("1 0\n");
  CHECK_THROWS_AS(parse_bfile(BFileKind::TauMersenneMinus, zero_tau), ParseError);

  CHECK(bfile_kind_name(BFileKind::TauMersennePlus) == "tau-plus");
  CHECK(parse_bfile_kind("omega-phi2") == BFileKind::OmegaPhi2);
  CHECK_FALSE(parse_bfile_kind("tau"));
}

TEST_CASE("b-file fixtures load") {
  const BFile b = import_bfile(BFileKind::TauMersenneMinus, std::string(MERSDIV_TEST_DATA) + "/tau_minus.txt");
  CHECK(b.entries.size() == 100);
  CHECK(b.find(12) == Natural(24));
  CHECK_THROWS(import_bfile(BFileKind::TauMersenneMinus, temp_path("missing.txt")));
}

}  // TEST_SUITE
