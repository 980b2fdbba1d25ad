#pragma once

// Exact integer helpers shared by every module. Overflow is always an error,
// never wraparound.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lefkit {

using Coord = std::int64_t;

// Dimension counts (Ext dimensions, binomials). 128 bits so that C(d+n, n)
// for |d| <= 4n, n <= 32 always fits.
using Count = unsigned __int128;

class ArithmeticError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

inline Coord checked_add(Coord a, Coord b) {
    Coord r;
    if (__builtin_add_overflow(a, b, &r))
        throw ArithmeticError("coordinate overflow in addition");
    return r;
}

inline Coord checked_sub(Coord a, Coord b) {
    Coord r;
    if (__builtin_sub_overflow(a, b, &r))
        throw ArithmeticError("coordinate overflow in subtraction");
    return r;
}

template <typename U>
U checked_mul(U a, U b) {
    U r;
    if (__builtin_mul_overflow(a, b, &r))
        throw ArithmeticError("overflow in multiplication");
    return r;
}

template <typename U>
U checked_plus(U a, U b) {
    U r;
    if (__builtin_add_overflow(a, b, &r))
        throw ArithmeticError("overflow in addition");
    return r;
}

inline Count gcd128(Count a, Count b) {
    while (b != 0) {
        Count t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Reduced fraction accumulator for products that are known to be integral
// at the end (hook formulas). Cancels before multiplying so intermediates
// stay as small as the final value allows.
class ExactQuotient {
public:
    void multiply(Count x) {
        Count g = gcd128(x, den_);
        den_ /= g;
        x /= g;
        num_ = checked_mul(num_, x);
    }
    void divide(Count y) {
        if (y == 0) throw std::domain_error("division by zero");
        Count g = gcd128(y, num_);
        num_ /= g;
        y /= g;
        den_ = checked_mul(den_, y);
    }
    bool integral() const { return den_ == 1; }
    Count value() const {
        if (den_ != 1) throw ArithmeticError("quotient is not an integer");
        return num_;
    }

private:
    Count num_ = 1;
    Count den_ = 1;
};

// C(n, r); zero outside 0 <= r <= n.
inline Count binomial(std::int64_t n, std::int64_t r) {
    if (n < 0 || r < 0 || r > n) return 0;
    if (r > n - r) r = n - r;
    Count result = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        // result * (n - r + i) is divisible by i since result = C(n-r+i-1, i-1).
        Count top = static_cast<Count>(n - r + i);
        Count g = gcd128(result, static_cast<Count>(i));
        Count rest = static_cast<Count>(i) / g;
        result = checked_mul(result / g, top / rest);
    }
    return result;
}

inline std::string to_string(Count v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

inline std::uint64_t narrow_u64(Count v) {
    if (v > static_cast<Count>(UINT64_MAX))
        throw ArithmeticError("value exceeds 64 bits: " + to_string(v));
    return static_cast<std::uint64_t>(v);
}

}  // namespace lefkit
