#ifndef QFORM_SIEVE_HPP
#define QFORM_SIEVE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qform/int128.hpp"

namespace qform {

// Precomputed multiplicative-function tables on [1, limit]: smallest prime
// factor, Mobius mu, and the von Mangoldt function as double-precision logs.
struct SieveTables {
    u64 limit = 0;
    std::vector<std::uint32_t> spf;  // spf[n] for n >= 2; spf[0] = spf[1] = 0
    std::vector<std::int8_t> mu;     // mu[n]; mu[0] = 0
    std::vector<double> lambda_vm;   // Lambda(n); 0 outside prime powers
    std::vector<std::uint32_t> primes;

    bool is_prime(u64 n) const { return n >= 2 && spf[n] == n; }
    double vm(u64 n) const { return n <= limit ? lambda_vm[n] : throw_range(n); }

    // Distinct prime factors of n <= limit, with exponents.
    std::vector<std::pair<u64, int>> factor(u64 n) const;

private:
    [[noreturn]] double throw_range(u64 n) const;
};

// Deterministic single-pass construction. X outside [2, 2^34] or beyond the
// memory budget is an explicit failure.
SieveTables build_sieve(u64 X);

// Little-endian binary layout (documented in the README):
//   magic "QFSV" (4 bytes) | version u32 | limit u64 |
//   spf u32[limit+1] | mu i8[limit+1] | lambda f64[limit+1]
void save_sieve(const SieveTables& t, const std::string& path);
SieveTables load_sieve(const std::string& path);

}  // namespace qform

#endif
