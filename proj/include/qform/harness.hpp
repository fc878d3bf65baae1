#ifndef QFORM_HARNESS_HPP
#define QFORM_HARNESS_HPP

#include <complex>
#include <vector>

#include "qform/arithmetic.hpp"
#include "qform/characters.hpp"
#include "qform/composition.hpp"
#include "qform/lambda.hpp"

namespace qform {

// Compensated summation; lattice sums hold ~X terms and the determinism
// contract asks for 1e-9 relative agreement between partitioned runs.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

struct KahanComplex {
    KahanSum re, im;
    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

// Visits every integer pair (l, m) with 1 <= F(l, m) <= X exactly once,
// l ascending then m ascending. The callback receives (l, m, N).
template <typename Fn>
void lattice_iterate(const Form& F, i64 X, Fn&& fn) {
    if (!is_positive_definite(F))
        throw std::invalid_argument("lattice: form must be positive definite");
    if (X < 1) return;
    i128 delta = -discriminant(F);
    if (4 * F.c * i128(X) > i128(UINT64_MAX) || 4 * F.a * i128(X) > i128(UINT64_MAX))
        throw std::invalid_argument(
            "lattice: coefficients too large for enumeration at this X");
    i64 lmax = i64(isqrt64(u64((4 * F.c * i128(X)) / delta)));
    for (i64 l = -lmax; l <= lmax; ++l) {
        // 4*gamma*F(l,m) = (2*gamma*m + beta*l)^2 + Delta*l^2
        i128 rem = 4 * F.c * i128(X) - delta * i128(l) * i128(l);
        if (rem < 0) continue;
        i128 s = i128(isqrt64(u64(rem)));
        i64 mlo = i64(ceil_div(-F.b * i128(l) - s, 2 * F.c));
        i64 mhi = i64(floor_div(-F.b * i128(l) + s, 2 * F.c));
        for (i64 m = mlo; m <= mhi; ++m) {
            i128 N = F.eval(l, m);
            if (N < 1 || N > X) continue;
            fn(l, m, i64(N));
        }
    }
}

// a_N aggregated over the lattice: a[N] = sum of lambda(l) over
// F(l, m) = N with gcd(l, gamma*m) = 1. Index 0 unused.
std::vector<double> a_n_table(const Form& F, i64 X, const LambdaSpec& lambda,
                              const SieveTables* tables);

// Same value computed over disjoint l-stripes merged in stripe order; the
// result is independent of the thread count by construction.
std::vector<double> a_n_table_striped(const Form& F, i64 X,
                                      const LambdaSpec& lambda,
                                      const SieveTables* tables,
                                      unsigned stripes, unsigned threads);

// All the per-experiment sums share one prepared lattice pass.
class SieveHarness {
public:
    SieveHarness(const Form& F, const CompositionContext& ctx,
                 const SieveTables& tables, i64 X, LambdaSpec lambda);

    i64 X() const { return X_; }
    const Form& form() const { return F_; }
    const std::vector<double>& an() const { return aN_; }
    bool pf_ok(i64 N) const { return pf_ok_[size_t(N)]; }

    // A_d(X; chi) = sum over N <= X, N = 0 mod d, gcd(N, PF) = 1 of
    // a_N chi(N); identically 0 when gcd(d, q * PF) > 1.
    std::complex<double> A_d(u64 d, const DirichletCharacter& chi) const;

    // W[l] = lambda(l) * sum over m with F(l,m) <= X, gcd(l, gamma m) = 1,
    // gcd(F(l,m), PF) = 1 of chi(F(l,m)); the l-profile all M_d queries read.
    std::vector<std::complex<double>> w_table(const DirichletCharacter& chi) const;

    // M_d(X; chi) = rho(d)/d * sum_{gcd(l,d)=1} W[l]; identically 0 when
    // gcd(d, q*PF) > 1.
    std::complex<double> M_d(u64 d, const DirichletCharacter& chi,
                             const std::vector<std::complex<double>>& W) const;
    std::complex<double> M_d(u64 d, const DirichletCharacter& chi) const;

    // R(X, D; chi) = sum_{d <= D} |A_d - M_d|. Per-d terms are computed
    // independently (threads > 1 splits the d-range) and summed in d order,
    // so the value is identical for every thread count. Also returns the
    // per-d magnitudes when out_rd is non-null.
    double R_total(u64 D, const DirichletCharacter& chi, unsigned threads = 1,
                   std::vector<double>* out_rd = nullptr) const;

    // P(X; chi) = sum a_N chi(N) Lambda(N) over N <= X with gcd(N, PF) = 1.
    std::complex<double> P_chi(const DirichletCharacter& chi) const;

    // B(X; Y, Z; chi): divisor-iteration evaluation of the bilinear tail.
    std::complex<double> bilinear_B(double Y, double Z,
                                    const DirichletCharacter& chi) const;

    // sum_{N <= X, N = a mod q, gcd(N, PF) = 1} a_N Lambda(N).
    double congruence_sum(i64 a, u64 q) const;

private:
    Form F_;
    const CompositionContext& ctx_;
    const SieveTables& tables_;
    i64 X_;
    LambdaSpec lambda_;
    std::vector<double> aN_;   // unfiltered a_N
    std::vector<bool> pf_ok_;  // gcd(N, PF) == 1
    i64 lmax_ = 0;
};

}  // namespace qform

#endif
