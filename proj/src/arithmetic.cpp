#include "qform/arithmetic.hpp"

#include <stdexcept>

#include "qform/composition.hpp"

namespace qform {

int kronecker(i128 a, i128 n) {
    if (n == 0) return abs128(a) == 1 ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        // (a|2) = (2|a) = (-1)^((a^2-1)/8)
        int t = 0;
        while (n % 2 == 0) {
            n /= 2;
            ++t;
        }
        i128 am = mod_floor(a, 8);
        if (t % 2 == 1 && (am == 3 || am == 5)) sign = -sign;
    }
    a = mod_floor(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i128 nm = n % 8;
            if (nm == 3 || nm == 5) sign = -sign;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) sign = -sign;
        a = mod_floor(a, n);
    }
    return n == 1 ? sign : 0;
}

i64 rho_enumerate(u64 d, const Form& F) {
    if (d == 0) throw std::invalid_argument("rho: modulus must be positive");
    i64 count = 0;
    i128 m = i128(d);
    // F(1, nu) = alpha + beta*nu + gamma*nu^2 mod d, evaluated incrementally.
    i128 val = mod_floor(F.a, m);
    i128 step = mod_floor(F.b + F.c, m);  // F(1,nu+1)-F(1,nu) at nu=0
    i128 inc = mod_floor(2 * F.c, m);
    for (u64 nu = 0; nu < d; ++nu) {
        if (val == 0) ++count;
        val = (val + step) % m;
        step = (step + inc) % m;
    }
    return count;
}

i64 rho_prime_power(u64 p, int k, const Form& F) {
    i128 delta = -discriminant(F);
    bool obstructed = mod_floor(2 * F.c * delta, p) == 0;
    if (!obstructed) {
        // Simple roots: the quadratic F(1,nu) has discriminant -Delta, which
        // is a unit mod p, so every root mod p lifts uniquely to p^k.
        return 1 + kronecker(-delta, i128(p));
    }
    u64 q = 1;
    for (int i = 0; i < k; ++i) {
        if (q > 1000000 / p)
            throw std::domain_error(
                "rho: obstructed prime power beyond the 10^6 enumeration bound");
        q *= p;
    }
    return rho_enumerate(q, F);
}

i64 rho(u64 d, const Form& F, const SieveTables& tables) {
    if (d == 0) throw std::invalid_argument("rho: modulus must be positive");
    if (d == 1) return 1;
    i64 result = 1;
    for (auto [p, k] : tables.factor(d)) {
        i64 r = rho_prime_power(p, k, F);
        if (r == 0) return 0;
        result *= r;
    }
    return result;
}

namespace {

i64 rho_ab_prime_power(u64 q, i128 a, i128 b, const Form& F) {
    i128 m = i128(q);
    i64 count = 0;
    // F(b, nu) = alpha*b^2 + beta*b*nu + gamma*nu^2, incrementally mod q.
    i128 val = mod_floor(F.a * b * b - a, m);
    i128 step = mod_floor(F.b * b + F.c, m);
    i128 inc = mod_floor(2 * F.c, m);
    for (u64 nu = 0; nu < q; ++nu) {
        if (val == 0) ++count;
        val = (val + step) % m;
        step = (step + inc) % m;
    }
    return count;
}

}  // namespace

i64 rho_ab(u64 d, i128 a, i128 b, const Form& F, const SieveTables& tables) {
    if (d == 0) throw std::invalid_argument("rho_ab: modulus must be positive");
    if (d == 1) return 1;
    i64 result = 1;
    for (auto [p, k] : tables.factor(d)) {
        u64 q = 1;
        for (int i = 0; i < k; ++i) {
            if (q > 100000000 / p)
                throw std::domain_error("rho_ab: prime power too large to enumerate");
            q *= p;
        }
        i64 r = rho_ab_prime_power(q, a, b, F);
        if (r == 0) return 0;
        result *= r;
    }
    return result;
}

std::pair<double, double> euler_product(
    u64 P_max, const SieveTables& tables,
    const std::function<bool(u64)>& is_exceptional,
    const std::function<i64(u64)>& local_density) {
    if (P_max < 1000)
        throw std::invalid_argument("euler product cutoff must be >= 10^3");
    if (P_max > tables.limit)
        throw std::invalid_argument("euler product cutoff beyond sieve limit");
    long double prod = 1.0L;
    long double half_point = 0.0L;
    u64 half = P_max / 2;
    bool have_half = false;
    for (std::uint32_t p : tables.primes) {
        if (u64(p) > P_max) break;
        if (!have_half && u64(p) > half) {
            half_point = prod;
            have_half = true;
        }
        long double lp = static_cast<long double>(p);
        if (is_exceptional(p)) {
            prod *= lp / (lp - 1.0L);
        } else {
            i64 r = local_density(p);
            if (r == i64(p)) return {0.0, 0.0};  // vanishing factor, exact zero
            prod *= (lp - static_cast<long double>(r)) / (lp - 1.0L);
        }
    }
    if (!have_half) half_point = prod;
    return {static_cast<double>(prod),
            static_cast<double>(std::abs(prod - half_point))};
}

std::pair<double, double> h_fq(const Form& F, u64 q,
                               const CompositionContext& ctx, u64 P_max,
                               const SieveTables& tables) {
    return euler_product(
        P_max, tables,
        [&](u64 p) { return q % p == 0 || ctx.divides_pf(p); },
        [&](u64 p) { return rho_prime_power(p, 1, F); });
}

std::pair<double, double> h_q(const Form& F, u64 q, u64 P_max,
                              const SieveTables& tables) {
    return euler_product(
        P_max, tables, [&](u64 p) { return q % p == 0; },
        [&](u64 p) { return rho_prime_power(p, 1, F); });
}

}  // namespace qform
