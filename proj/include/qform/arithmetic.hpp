#ifndef QFORM_ARITHMETIC_HPP
#define QFORM_ARITHMETIC_HPP

#include <functional>

#include "qform/form.hpp"
#include "qform/sieve.hpp"

namespace qform {

struct CompositionContext;

// Kronecker symbol (a | n), fully general.
int kronecker(i128 a, i128 n);

// rho(d) = #{ nu mod d : F(1, nu) = 0 mod d }. Multiplicative over prime
// powers; simple roots are lifted, obstructed primes (p | 2*gamma*Delta) fall
// back to direct enumeration, which is limited to prime powers <= 10^6.
i64 rho(u64 d, const Form& F, const SieveTables& tables);

// Single prime-power value rho(p^k).
i64 rho_prime_power(u64 p, int k, const Form& F);

// Brute-force oracle: literal enumeration of nu mod d. Test/reference use.
i64 rho_enumerate(u64 d, const Form& F);

// rho(d; a, b) = #{ nu mod d : F(b, nu) = a mod d }, assembled over prime
// powers with direct enumeration per factor.
i64 rho_ab(u64 d, i128 a, i128 b, const Form& F, const SieveTables& tables);

// Partial Euler products for the main-term constants. Factors are accumulated
// in 80-bit extended precision in ascending prime order; a vanishing factor
// short-circuits to an exact 0. Returns {value, empirical tail estimate},
// the tail being |partial(P_max) - partial(P_max/2)|.
//
// H_{F,q}: the factor at p | q*P_F is (1-1/p)^{-1}; elsewhere
// (1-rho(p)/p)(1-1/p)^{-1}.
std::pair<double, double> h_fq(const Form& F, u64 q,
                               const CompositionContext& ctx, u64 P_max,
                               const SieveTables& tables);

// H_q: exceptional set p | q only.
std::pair<double, double> h_q(const Form& F, u64 q, u64 P_max,
                              const SieveTables& tables);

// Shared kernel, exposed so tests can inject a local-density function.
std::pair<double, double> euler_product(
    u64 P_max, const SieveTables& tables,
    const std::function<bool(u64)>& is_exceptional,
    const std::function<i64(u64)>& local_density);

}  // namespace qform

#endif
