// High-precision reals and the decimal renderings used by every table.
#pragma once

#include <string>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "mersdiv/arith.hpp"

namespace mersdiv {

/// 50 significant decimal digits.
using Real = boost::multiprecision::cpp_dec_float_50;

Real to_real(const Natural& n);
Real to_real(const Rational& q);
Real natural_log(u64 n);
Real natural_log(const Natural& n);

/// Rounds q to `places` decimals, ties to even, keeping trailing zeros ("0.3810").
std::string fixed_half_even(const Rational& q, int places);
std::string fixed_half_even(const Real& x, int places);

/// Exact decimal when q terminates within `places` digits ("2", "0.25"), otherwise
/// fixed_half_even. This is how table ratios are printed.
std::string table_decimal(const Rational& q, int places = 4);

/// "p/q", or "p" when q = 1.
std::string rational_string(const Rational& q);

}  // namespace mersdiv
