#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace apc {

/// Arbitrary precision signed integer used by the exact counting domains.
using BigInt = mpz_class;

using int128 = __int128;

BigInt to_bigint(int128 x);

/// Converts when |x| fits in a signed 128-bit integer.
bool fits_int128(const BigInt& x);
int128 to_int128(const BigInt& x);

inline std::string to_string(const BigInt& x) { return x.get_str(); }
std::string to_string(int128 x);

/// Exact double -> BigInt for integral doubles (throws otherwise).
BigInt bigint_from_integral_double(double x);

}  // namespace apc
