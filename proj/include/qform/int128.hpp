#ifndef QFORM_INT128_HPP
#define QFORM_INT128_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qform {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Widened arithmetic with overflow detection. Coefficient-level work stays in
// i128; anything that could exceed that range is a fatal input-range error.

inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("int128 addition overflow");
    return r;
}

inline i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r))
        throw std::overflow_error("int128 subtraction overflow");
    return r;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("int128 multiplication overflow");
    return r;
}

inline i128 abs128(i128 x) { return x < 0 ? -x : x; }

inline i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Floor/ceil division for possibly negative numerators.
inline i128 floor_div(i128 a, i128 b) {
    i128 q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

// Non-negative residue a mod m, m > 0.
inline i128 mod_floor(i128 a, i128 m) {
    i128 r = a % m;
    if (r < 0) r += m;
    return r;
}

inline i64 to_i64(i128 x) {
    if (x > i128(INT64_MAX) || x < i128(INT64_MIN))
        throw std::overflow_error("value does not fit in 64 bits");
    return static_cast<i64>(x);
}

inline std::string to_string(i128 x) {
    if (x == 0) return "0";
    bool neg = x < 0;
    u128 u = neg ? u128(-(x + 1)) + 1 : u128(x);
    char buf[48];
    int n = 0;
    while (u > 0) {
        buf[n++] = char('0' + int(u % 10));
        u /= 10;
    }
    std::string s;
    if (neg) s.push_back('-');
    while (n > 0) s.push_back(buf[--n]);
    return s;
}

inline std::string to_string(u128 u) {
    if (u == 0) return "0";
    char buf[48];
    int n = 0;
    while (u > 0) {
        buf[n++] = char('0' + int(u % 10));
        u /= 10;
    }
    std::string s;
    while (n > 0) s.push_back(buf[--n]);
    return s;
}

inline i128 parse_i128(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("bad integer literal: " + s);
    i128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("bad integer literal: " + s);
        v = checked_add(checked_mul(v, 10), s[i] - '0');
    }
    return neg ? -v : v;
}

inline u128 parse_u128(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    u128 v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9')
            throw std::invalid_argument("bad integer literal: " + s);
        u128 next = v * 10 + u128(ch - '0');
        if (next / 10 != v) throw std::overflow_error("u128 literal overflow");
        v = next;
    }
    return v;
}

// Floor of sqrt for 64-bit-range inputs.
inline u64 isqrt64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    if (r > 0 && (u128(r) * r > n)) --r;
    while (u128(r) * r > n) --r;
    while (u128(r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace qform

#endif
