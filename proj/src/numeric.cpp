#include "mersdiv/numeric.hpp"

#include <boost/multiprecision/number.hpp>

namespace mersdiv {

namespace {

Natural pow10(int places) {
  Natural p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(places));
  return p;
}

// Inserts a decimal point `places` digits from the right of |scaled|.
std::string place_point(Natural scaled, int places, bool negative) {
  std::string digits = Natural(abs(scaled)).get_str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  return (negative && scaled != 0 ? "-" : "") + digits;
}

}  // namespace

Real to_real(const Natural& n) { return Real(n.get_str()); }

Real to_real(const Rational& q) { return to_real(q.get_num()) / to_real(q.get_den()); }

Real natural_log(u64 n) { return boost::multiprecision::log(Real(n)); }

Real natural_log(const Natural& n) { return boost::multiprecision::log(to_real(n)); }

std::string fixed_half_even(const Rational& q, int places) {
  const bool negative = sgn(q) < 0;
  Rational scaled = abs(q) * Rational(pow10(places));
  Natural whole;
  mpz_fdiv_q(whole.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  const Rational frac = scaled - Rational(whole);
  const int cmp_half = cmp(frac, Rational(1, 2));
  if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(whole.get_mpz_t()))) whole += 1;
  return place_point(whole, places, negative);
}

std::string fixed_half_even(const Real& x, int places) {
  const bool negative = x < 0;
  Real scaled = boost::multiprecision::abs(x) * boost::multiprecision::pow(Real(10), places);
  Real whole_r = boost::multiprecision::floor(scaled);
  const Real frac = scaled - whole_r;
  std::string digits = whole_r.str(0, std::ios_base::fixed);
  digits = digits.substr(0, digits.find('.'));
  Natural whole(digits);
  if (frac > Real(0.5) || (frac == Real(0.5) && mpz_odd_p(whole.get_mpz_t()))) whole += 1;
  return place_point(whole, places, negative);
}

std::string table_decimal(const Rational& q, int places) {
  Rational scaled = q * Rational(pow10(places));
  if (scaled.get_den() != 1) return fixed_half_even(q, places);
  std::string s = place_point(scaled.get_num(), places, sgn(q) < 0);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

std::string rational_string(const Rational& q) {
  Rational r = q;
  r.canonicalize();
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace mersdiv
