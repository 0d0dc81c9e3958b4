#include "apc/bigint.hpp"

#include <cmath>
#include <stdexcept>

namespace apc {

BigInt to_bigint(int128 x) {
    const bool negative = x < 0;
    // Magnitude as unsigned so that INT128_MIN is handled.
    auto mag = negative ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
    BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
    BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
    BigInt out = (hi << 64) + lo;
    return negative ? BigInt(-out) : out;
}

bool fits_int128(const BigInt& x) { return mpz_sizeinbase(x.get_mpz_t(), 2) <= 126; }

int128 to_int128(const BigInt& x) {
    if (!fits_int128(x)) throw std::overflow_error("integer does not fit 128 bits");
    BigInt mag = abs(x);
    BigInt hi = mag >> 64;
    BigInt lo = mag - (hi << 64);
    const auto h = static_cast<unsigned __int128>(hi.get_ui());
    const auto l = static_cast<unsigned __int128>(lo.get_ui());
    const auto value = static_cast<int128>((h << 64) | l);
    return sgn(x) < 0 ? -value : value;
}

std::string to_string(int128 x) {
    if (x == 0) return "0";
    const bool negative = x < 0;
    auto mag = negative ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
    std::string digits;
    while (mag != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
        mag /= 10;
    }
    if (negative) digits.push_back('-');
    return {digits.rbegin(), digits.rend()};
}

BigInt bigint_from_integral_double(double x) {
    if (!std::isfinite(x) || std::trunc(x) != x) {
        throw std::domain_error("value is not an integral double");
    }
    BigInt out;
    mpz_set_d(out.get_mpz_t(), x);
    return out;
}

}  // namespace apc
