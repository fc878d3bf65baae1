#include <random>

#include "doctest.h"
#include "qform/arithmetic.hpp"
#include "qform/composition.hpp"

using namespace qform;

namespace {
const SieveTables& small_tables() {
    static SieveTables t = build_sieve(200000);
    return t;
}
}  // namespace

TEST_CASE("sieve table values") {
    const auto& t = small_tables();
    std::vector<int> mu_expect = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    for (int n = 1; n <= 10; ++n) CHECK(t.mu[n] == mu_expect[size_t(n - 1)]);
    CHECK(t.lambda_vm[8] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(t.lambda_vm[12] == 0.0);
    CHECK(t.spf[91] == 7);
    CHECK(t.is_prime(9973));
    CHECK(!t.is_prime(9975));
    CHECK_THROWS_AS(build_sieve(1), std::invalid_argument);
}

TEST_CASE("mu and Lambda agree with direct factorization on random n") {
    const auto& t = small_tables();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<u64> dist(2, t.limit);
    for (int it = 0; it < 10000; ++it) {
        u64 n = dist(rng);
        u64 rest = n;
        int omega = 0;
        bool squarefree = true;
        u64 pcount = 0, plast = 0;
        for (u64 p = 2; p * p <= rest; ++p)
            while (rest % p == 0) {
                rest /= p;
                if (plast == p)
                    squarefree = false;
                else
                    ++omega;
                plast = p;
                ++pcount;
            }
        if (rest > 1) {
            ++pcount;
            if (plast == rest)
                squarefree = false;
            else
                ++omega;
            plast = rest;
        }
        int want_mu = squarefree ? (omega % 2 == 0 ? 1 : -1) : 0;
        CHECK(int(t.mu[n]) == want_mu);
        // Lambda(n) != 0 iff n is a prime power.
        u64 p0 = t.spf[n], m = n;
        while (m % p0 == 0) m /= p0;
        if (m == 1)
            CHECK(t.lambda_vm[n] == doctest::Approx(std::log(double(p0))));
        else
            CHECK(t.lambda_vm[n] == 0.0);
    }
}

TEST_CASE("sieve binary round trip") {
    SieveTables t = build_sieve(5000);
    std::string path = "/tmp/qform_test_tables.bin";
    save_sieve(t, path);
    SieveTables u = load_sieve(path);
    CHECK(u.limit == t.limit);
    CHECK(u.spf == t.spf);
    CHECK(u.mu == t.mu);
    CHECK(u.lambda_vm == t.lambda_vm);
    CHECK(u.primes == t.primes);
}

TEST_CASE("rho examples") {
    const auto& t = small_tables();
    Form F{1, 0, 1};
    CHECK(rho(5, F, t) == 2);
    CHECK(rho(2, F, t) == 1);
    CHECK(rho(9, F, t) == 0);
    CHECK(rho(1, F, t) == 1);
    CHECK(rho(2, Form{2, 1, 1}, t) == 2);
}

TEST_CASE("rho equals enumeration and is multiplicative") {
    const auto& t = small_tables();
    std::vector<Form> forms = {{1, 0, 1}, {1, 1, 1}, {1, 1, 6}, {2, 1, 1},
                               {2, 1, 3}};
    for (const Form& F : forms) {
        for (u64 d = 1; d <= 300; ++d) CHECK(rho(d, F, t) == rho_enumerate(d, F));
        for (u64 m = 2; m <= 50; ++m)
            for (u64 n = 2; n <= 50; ++n) {
                if (std::gcd(m, n) != 1) continue;
                CHECK(rho(m * n, F, t) == rho(m, F, t) * rho(n, F, t));
            }
    }
}

TEST_CASE("rho via Kronecker at unobstructed primes") {
    const auto& t = small_tables();
    for (const Form& F :
         {Form{1, 0, 1}, Form{1, 1, 1}, Form{1, 1, 6}, Form{2, 1, 1}}) {
        i128 delta = -discriminant(F);
        for (std::uint32_t p : t.primes) {
            if (p > 3000) break;
            if (mod_floor(2 * F.c * delta, p) == 0) continue;
            CHECK(rho(p, F, t) == 1 + kronecker(-delta, i128(p)));
        }
    }
}

TEST_CASE("rho_ab examples") {
    const auto& t = small_tables();
    Form F{1, 0, 1};
    CHECK(rho_ab(5, 0, 1, F, t) == 2);
    CHECK(rho_ab(1, 7, 3, F, t) == 1);
    CHECK(rho_ab(4, 1, 1, F, t) == 2);
    // Brute-force agreement across small moduli and residues.
    for (u64 d = 1; d <= 60; ++d)
        for (i64 a = 0; a < i64(d); ++a) {
            i64 direct = 0;
            for (i64 nu = 0; nu < i64(d); ++nu)
                if (mod_floor(F.eval(1, nu) - a, i128(d)) == 0) ++direct;
            CHECK(rho_ab(d, a, 1, F, t) == direct);
        }
}

TEST_CASE("Euler product degeneracy and injection") {
    const auto& t = small_tables();
    // rho(2) = 2 zeroes the p = 2 factor of H_q exactly (2 is never in the
    // p | q exceptional set for odd q). H_{F,q} keeps its exceptional factor
    // at p = 2 because 2 always divides P_F, so it stays positive.
    auto [vq, tailq] = h_q(Form{2, 1, 1}, 1, 100000, t);
    CHECK(vq == 0.0);
    CHECK(tailq == 0.0);
    CompositionContext ctx = build_context(Form{2, 1, 1});
    CHECK(h_fq(Form{2, 1, 1}, 1, ctx, 100000, t).first > 0.0);

    // rho identically 1 gives the constant product 1, exactly.
    auto [one, one_tail] = euler_product(
        100000, t, [](u64) { return false; }, [](u64) { return i64(1); });
    CHECK(one == 1.0);
    CHECK(one_tail == 0.0);
}

TEST_CASE("H_q variants") {
    const auto& t = small_tables();
    // q odd keeps the vanishing p = 2 factor; q = 2 removes it.
    CHECK(h_q(Form{2, 1, 1}, 1, 10000, t).first == 0.0);
    CHECK(h_q(Form{2, 1, 1}, 3, 10000, t).first == 0.0);
    CHECK(h_q(Form{2, 1, 1}, 2, 10000, t).first > 0.0);
    // For q = 1 and F = x^2 + y^2, H_q is H_{F,q} with the PF factor swapped:
    // H_Fq carries (1 - 1/2)^{-1} = 2 at p = 2, H_q carries (1 - rho(2)/2) * 2 = 1.
    CompositionContext ctx = build_context(Form{1, 0, 1});
    double hfq_v = h_fq(Form{1, 0, 1}, 1, ctx, 100000, t).first;
    double hq_v = h_q(Form{1, 0, 1}, 1, 100000, t).first;
    CHECK(hfq_v == doctest::Approx(2.0 * hq_v).epsilon(1e-12));
}

TEST_CASE("Euler product partial values shrink under doubling") {
    const auto& t = small_tables();
    CompositionContext ctx = build_context(Form{1, 0, 1});
    double t1 = h_fq(Form{1, 0, 1}, 1, ctx, 25000, t).second;
    double t2 = h_fq(Form{1, 0, 1}, 1, ctx, 100000, t).second;
    CHECK(t2 < t1);
}

TEST_CASE("kronecker symbol spot values") {
    CHECK(kronecker(-4, 5) == 1);
    CHECK(kronecker(-4, 3) == -1);
    CHECK(kronecker(-4, 2) == 0);
    CHECK(kronecker(-23, 2) == 1);
    CHECK(kronecker(-23, 23) == 0);
    CHECK(kronecker(-3, 7) == 1);
    // Quadratic reciprocity sanity against Euler's criterion.
    const auto& t = small_tables();
    for (std::uint32_t p : t.primes) {
        if (p > 500 || p == 2) continue;
        for (i64 a = -30; a <= 30; ++a) {
            if (a % p == 0) continue;
            i64 e = 1, b = i64(mod_floor(a, p));
            for (u64 k = 0; k < (p - 1) / 2; ++k) e = e * b % p;
            i64 euler = e == 1 ? 1 : e == i64(p) - 1 ? -1 : 0;
            CHECK(kronecker(a, i128(p)) == euler);
        }
    }
}
