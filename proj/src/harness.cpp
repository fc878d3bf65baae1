#include "qform/harness.hpp"

#include <atomic>
#include <numeric>
#include <thread>

namespace qform {

std::vector<double> a_n_table(const Form& F, i64 X, const LambdaSpec& lambda,
                              const SieveTables* tables) {
    std::vector<double> a(size_t(X) + 1, 0.0);
    i128 gamma = F.c;
    lattice_iterate(F, X, [&](i64 l, i64 m, i64 N) {
        if (l <= 0) return;  // lambda vanishes off the naturals
        if (gcd128(l, gamma * m) != 1) return;
        a[size_t(N)] += lambda.eval(l, tables);
    });
    return a;
}

std::vector<double> a_n_table_striped(const Form& F, i64 X,
                                      const LambdaSpec& lambda,
                                      const SieveTables* tables,
                                      unsigned stripes, unsigned threads) {
    if (stripes == 0) throw std::invalid_argument("stripes must be positive");
    if (!is_positive_definite(F))
        throw std::invalid_argument("lattice: form must be positive definite");
    i128 delta = -discriminant(F);
    i64 lmax = i64(isqrt64(u64((4 * F.c * i128(X)) / delta)));

    // Each stripe owns a contiguous l-interval and a private table; stripes
    // merge in index order, so any thread assignment gives the same bits.
    std::vector<std::vector<double>> partial(stripes);
    i64 span = 2 * lmax + 1;
    auto run_stripe = [&](unsigned s) {
        i64 lo = -lmax + i64(span * s / stripes);
        i64 hi = -lmax + i64(span * (s + 1) / stripes) - 1;
        auto& a = partial[s];
        a.assign(size_t(X) + 1, 0.0);
        i128 gamma = F.c;
        for (i64 l = std::max<i64>(lo, 1); l <= hi; ++l) {
            i128 rem = 4 * F.c * i128(X) - delta * i128(l) * i128(l);
            if (rem < 0) continue;
            i128 sq = i128(isqrt64(u64(rem)));
            i64 mlo = i64(ceil_div(-F.b * i128(l) - sq, 2 * F.c));
            i64 mhi = i64(floor_div(-F.b * i128(l) + sq, 2 * F.c));
            for (i64 m = mlo; m <= mhi; ++m) {
                i128 N = F.eval(l, m);
                if (N < 1 || N > X) continue;
                if (gcd128(l, gamma * m) != 1) continue;
                a[size_t(N)] += lambda.eval(l, tables);
            }
        }
    };

    if (threads <= 1) {
        for (unsigned s = 0; s < stripes; ++s) run_stripe(s);
    } else {
        std::vector<std::thread> pool;
        std::atomic<unsigned> next{0};
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    unsigned s = next.fetch_add(1);
                    if (s >= stripes) return;
                    run_stripe(s);
                }
            });
        for (auto& th : pool) th.join();
    }

    std::vector<double> a(size_t(X) + 1, 0.0);
    for (unsigned s = 0; s < stripes; ++s)
        for (size_t i = 0; i <= size_t(X); ++i) a[i] += partial[s][i];
    return a;
}

SieveHarness::SieveHarness(const Form& F, const CompositionContext& ctx,
                           const SieveTables& tables, i64 X, LambdaSpec lambda)
    : F_(F), ctx_(ctx), tables_(tables), X_(X), lambda_(std::move(lambda)) {
    if (X_ < 1) throw std::invalid_argument("harness: X must be >= 1");
    if (u64(X_) > tables_.limit)
        throw std::invalid_argument("harness: X exceeds the sieve table limit");
    aN_ = a_n_table(F_, X_, lambda_, &tables_);
    pf_ok_.assign(size_t(X_) + 1, false);
    for (i64 N = 1; N <= X_; ++N)
        pf_ok_[size_t(N)] = ctx_.coprime_to_pf(u128(N));
    i128 delta = -discriminant(F_);
    lmax_ = i64(isqrt64(u64((4 * F_.c * i128(X_)) / delta)));
}

std::complex<double> SieveHarness::A_d(u64 d,
                                       const DirichletCharacter& chi) const {
    if (d == 0) throw std::invalid_argument("A_d: d must be positive");
    u64 q = chi.modulus();
    if (std::gcd(d, q) > 1 || !ctx_.coprime_to_pf(u128(d))) return {0.0, 0.0};
    auto chi_table = chi.value_table();
    KahanComplex sum;
    for (i64 N = i64(d); N <= X_; N += i64(d)) {
        if (!pf_ok_[size_t(N)]) continue;
        double a = aN_[size_t(N)];
        if (a == 0.0) continue;
        sum.add(a * chi_table[size_t(N % i64(q))]);
    }
    return sum.value();
}

std::vector<std::complex<double>> SieveHarness::w_table(
    const DirichletCharacter& chi) const {
    auto chi_table = chi.value_table();
    u64 q = chi.modulus();
    std::vector<KahanComplex> acc(size_t(lmax_) + 1);
    i128 gamma = F_.c;
    lattice_iterate(F_, X_, [&](i64 l, i64 m, i64 N) {
        if (l <= 0) return;
        if (!pf_ok_[size_t(N)]) return;
        if (gcd128(l, gamma * m) != 1) return;
        acc[size_t(l)].add(chi_table[size_t(N % i64(q))]);
    });
    std::vector<std::complex<double>> W(size_t(lmax_) + 1, {0.0, 0.0});
    for (i64 l = 1; l <= lmax_; ++l) {
        double lv = lambda_.eval(l, &tables_);
        if (lv != 0.0) W[size_t(l)] = lv * acc[size_t(l)].value();
    }
    return W;
}

std::complex<double> SieveHarness::M_d(
    u64 d, const DirichletCharacter& chi,
    const std::vector<std::complex<double>>& W) const {
    if (d == 0) throw std::invalid_argument("M_d: d must be positive");
    u64 q = chi.modulus();
    if (std::gcd(d, q) > 1 || !ctx_.coprime_to_pf(u128(d))) return {0.0, 0.0};
    i64 r = rho(d, F_, tables_);
    if (r == 0) return {0.0, 0.0};
    KahanComplex sum;
    for (i64 l = 1; l <= lmax_; ++l) {
        if (W[size_t(l)] == std::complex<double>{0.0, 0.0}) continue;
        if (std::gcd(u64(l), d) != 1) continue;
        sum.add(W[size_t(l)]);
    }
    return (double(r) / double(d)) * sum.value();
}

std::complex<double> SieveHarness::M_d(u64 d,
                                       const DirichletCharacter& chi) const {
    return M_d(d, chi, w_table(chi));
}

double SieveHarness::R_total(u64 D, const DirichletCharacter& chi,
                             unsigned threads,
                             std::vector<double>* out_rd) const {
    if (i64(D) > X_) throw std::invalid_argument("R_total: D must be <= X");
    auto W = w_table(chi);
    std::vector<double> rd(D + 1, 0.0);
    auto run = [&](u64 lo, u64 hi) {
        for (u64 d = lo; d <= hi; ++d) {
            std::complex<double> r = A_d(d, chi) - M_d(d, chi, W);
            rd[d] = std::abs(r);
        }
    };
    if (threads <= 1 || D < 16) {
        run(1, D);
    } else {
        std::vector<std::thread> pool;
        u64 chunk = (D + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            u64 lo = 1 + t * chunk;
            u64 hi = std::min(D, lo + chunk - 1);
            if (lo > D) break;
            pool.emplace_back(run, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    KahanSum total;
    for (u64 d = 1; d <= D; ++d) total.add(rd[d]);
    if (out_rd) *out_rd = std::move(rd);
    return total.value();
}

std::complex<double> SieveHarness::P_chi(const DirichletCharacter& chi) const {
    auto chi_table = chi.value_table();
    u64 q = chi.modulus();
    KahanComplex sum;
    for (i64 N = 1; N <= X_; ++N) {
        if (!pf_ok_[size_t(N)]) continue;
        double a = aN_[size_t(N)];
        if (a == 0.0) continue;
        double vm = tables_.lambda_vm[size_t(N)];
        if (vm == 0.0) continue;
        sum.add(a * vm * chi_table[size_t(N % i64(q))]);
    }
    return sum.value();
}

std::complex<double> SieveHarness::bilinear_B(
    double Y, double Z, const DirichletCharacter& chi) const {
    // Y or Z at or beyond X leaves an empty b- or c-range and the sum is 0.
    if (!(Y > 1.0) || !(Z > 1.0))
        throw std::invalid_argument("bilinear: need Y > 1 and Z > 1");
    auto chi_table = chi.value_table();
    u64 q = chi.modulus();
    KahanComplex sum;
    std::vector<u64> divisors;
    for (i64 N = 1; N <= X_; ++N) {
        if (!pf_ok_[size_t(N)]) continue;
        double a = aN_[size_t(N)];
        if (a == 0.0) continue;
        // All divisors b of N from the factorization.
        auto fac = tables_.factor(u64(N));
        divisors.assign(1, 1);
        for (auto [p, e] : fac) {
            size_t base = divisors.size();
            u64 pe = 1;
            for (int i = 1; i <= e; ++i) {
                pe *= p;
                for (size_t k = 0; k < base; ++k)
                    divisors.push_back(divisors[k] * pe);
            }
        }
        double inner_total = 0.0;
        for (u64 b : divisors) {
            if (double(b) <= Y) continue;
            int mu = tables_.mu[b];
            if (mu == 0) continue;
            u64 dpart = u64(N) / b;
            // sum of Lambda(c) over prime-power divisors c > Z of dpart
            double inner = 0.0;
            u64 rest = dpart;
            while (rest > 1) {
                u64 p = tables_.spf[rest];
                u64 pe = 1;
                while (rest % p == 0) {
                    rest /= p;
                    pe *= p;
                    if (double(pe) > Z) inner += tables_.lambda_vm[p];
                }
            }
            inner_total += mu * inner;
        }
        if (inner_total != 0.0)
            sum.add(a * inner_total * chi_table[size_t(N % i64(q))]);
    }
    return sum.value();
}

double SieveHarness::congruence_sum(i64 a, u64 q) const {
    KahanSum sum;
    for (i64 N = 1; N <= X_; ++N) {
        if (!pf_ok_[size_t(N)]) continue;
        if (mod_floor(N - a, i128(q)) != 0) continue;
        double an = aN_[size_t(N)];
        if (an == 0.0) continue;
        double vm = tables_.lambda_vm[size_t(N)];
        if (vm == 0.0) continue;
        sum.add(an * vm);
    }
    return sum.value();
}

}  // namespace qform
