#ifndef QFORM_COMPOSITION_HPP
#define QFORM_COMPOSITION_HPP

#include <set>
#include <vector>

#include "qform/form.hpp"
#include "qform/lambda.hpp"
#include "qform/sieve.hpp"

namespace qform {

// One class representative inside an S_F-style set, together with the
// evidence that it is what it claims to be: the represented prime (1 for the
// principal class) and the substitution carrying the reduced representative
// onto it.
struct ClassRepresentative {
    Form form;
    i128 prime = 1;  // form(1, 0)
    UnimodularMap from_reduced;
    Form reduced;

    bool operator==(const ClassRepresentative& o) const {
        return form == o.form && prime == o.prime &&
               from_reduced == o.from_reduced && reduced == o.reduced;
    }
};

// Everything the representation-decomposition identities need for a fixed
// base form F: the set SF of class representatives with prime leading
// coefficients, the nested per-representative sets SFstar, the common
// exponent B solving every congruence at once, and the bad-prime data
// (QF, CF, PF).
struct CompositionContext {
    Form F;
    i128 Delta = 0;  // positive; disc F = -Delta
    std::vector<ClassRepresentative> SF;
    std::vector<std::vector<ClassRepresentative>> SFstar;  // one list per SF entry
    i128 B = 0;
    i128 QF = 0;
    std::vector<i128> Qfstar;
    i64 CF = 0;
    u128 PF = 1;

    // p prime: does p divide PF = prod_{p <= CF} p?
    bool divides_pf(u64 p) const { return i64(p) <= CF; }

    // gcd(n, PF) == 1, i.e. no prime <= CF divides n.
    bool coprime_to_pf(u128 n) const;

    std::vector<Form> sf_forms() const;

    bool operator==(const CompositionContext& o) const;
};

struct DecompositionTuple {
    Form f;
    i128 u = 0, v = 0, w = 0, z = 0;
};

// Derived coefficients of the composition h = f * F with exponent B. Every
// division is exact when B satisfies the three congruences; a non-exact one
// is reported as an inconsistent B.
struct ComposeCoeffs {
    i128 p1;  // (B - b) / 2a
    i128 p2;  // (B - beta) / 2alpha
    i128 hs;  // (b + beta) / 2
    i128 cc;  // (B^2 + Delta) / (4 a alpha)
};
ComposeCoeffs derive_coeffs(const Form& f, const Form& F, i128 B);

// Dirichlet composition h(x,y) = a*alpha x^2 + B xy + (B^2+Delta)/(4 a alpha) y^2.
// Preconditions are rejected with a diagnostic naming the failed condition.
Form dirichlet_compose(const Form& f, const Form& F, i128 B);

// The substitution behind the product identity
// f(u,v) * F(X,Y) = h(W,Z), h = dirichlet_compose(f, F, B).
std::pair<i128, i128> wz_substitution(const Form& f, const Form& F, i128 B,
                                      i128 u, i128 v, i128 X, i128 Y);

// Inverse direction: the point (X, Y) with F(X,Y) = f(u,v) * fstar(w,z)
// reconstructed from a decomposition tuple.
std::pair<i128, i128> compose_point(const Form& f, const Form& F, i128 B,
                                    i128 u, i128 v, i128 w, i128 z);

// The companion form fstar = (a*alpha, B, (B^2+Delta)/(4*a*alpha)).
Form fstar(const Form& f, const Form& F, i128 B);
Form fstar(const Form& f, const CompositionContext& ctx);

// The bilinear form alpha*v*w + (u - ((B-b)/2a) v) z.
i128 qf_bilinear(const Form& f, const Form& F, i128 B, i128 u, i128 v, i128 w,
                 i128 z);
i128 qf_bilinear(const Form& f, const CompositionContext& ctx, i128 u, i128 v,
                 i128 w, i128 z);

// First coordinate of compose_point: the variable the weight sequence is
// evaluated at when a product representation is decomposed.
i128 recovered_ell(const Form& f, const Form& F, i128 B, i128 u, i128 v,
                   i128 w, i128 z);

// All (u, v) with f(u, v) = n, optionally restricted to gcd(u, v) = 1.
// Exact integer enumeration over the bounded variable of the positive
// definite form; no floating point.
std::vector<std::pair<i128, i128>> represent(const Form& f, i128 n,
                                             bool primitive_only);

// Every representation F(l, m) = N paired through the callback; used for
// direct a_N evaluation at a single N.
template <typename Fn>
void for_each_representation(const Form& F, i128 N, Fn&& fn) {
    for (auto& [l, m] : represent(F, N, false)) fn(l, m);
}

// Builds an S_F(t)-style set for the discriminant of F: one representative
// per proper equivalence class, the principal form kept as-is, every other
// representative transformed so its leading coefficient is a fresh prime not
// dividing 2*t*Delta. `used` accumulates primes across calls so nested sets
// stay disjoint. The search walks primitive points (x, y) with x, y >= 0 in
// expanding rings and fails loudly once `budget` candidate points are spent.
std::vector<ClassRepresentative> build_sf(
    const Form& F, i128 t, std::set<i128>* used = nullptr,
    u64 budget = 100000);

// Smallest non-negative B with B = b mod 2a for every (a,b,c) in SF,
// B = beta mod 2*alpha, and B^2 + Delta = 0 mod 4*a*alpha for every a.
i128 choose_b(const std::vector<Form>& SF, const Form& F);

// Joint exponent additionally matching every nested representative:
// B = e mod 2d and B^2 + Delta = 0 mod 4*a*d*alpha across both levels.
i128 choose_b_joint(const std::vector<ClassRepresentative>& SF,
                    const std::vector<std::vector<ClassRepresentative>>& SFstar,
                    const Form& F);

// Full context construction; every invariant is verified before returning.
CompositionContext build_context(const Form& F, u64 budget = 100000);

// Structural re-verification (discriminants, congruences, PF consistency).
void verify_context(const CompositionContext& ctx);

// All tuples (f; u,v,w,z) with f in SF, fstar(f)(w,z) = m, f(u,v) = n, both
// pairs primitive; the callback also receives the recovered first coordinate.
template <typename Fn>
void for_each_amn_tuple(i128 m, i128 n, const CompositionContext& ctx, Fn&& fn) {
    for (const auto& entry : ctx.SF) {
        auto reps_m = represent(fstar(entry.form, ctx), m, true);
        if (reps_m.empty()) continue;
        auto reps_n = represent(entry.form, n, true);
        for (auto& [w, z] : reps_m)
            for (auto& [u, v] : reps_n)
                fn(entry.form,u, v, w, z,
                   recovered_ell(entry.form, ctx.F, ctx.B, u, v, w, z));
    }
}

// 2 for Delta > 4, else 4 (Delta = 4) or 6 (Delta = 3): the number of tuples
// that decompose one primitive representation.
int tuple_multiplicity(i128 Delta);

// All decompositions of the primitive representation F(X, Y) = m*n into
// (f; u, v, w, z) with f(u,v) = m and fstar(f)(w,z) = n. Preconditions:
// gcd(m,n) = 1, gcd(mn, PF) = 1, gcd(X,Y) = 1, F(X,Y) = mn. An empty result
// on valid input is a fatal correctness failure.
std::vector<DecompositionTuple> decompose_representation(
    i128 m, i128 n, i128 X, i128 Y, const CompositionContext& ctx);

// Decomposition side of the a_{mn} identity: the tuple sum of lambda at the
// recovered coordinate, scaled by 1/tuple_multiplicity.
double amn_via_decomposition(i128 m, i128 n, const LambdaSpec& lambda,
                             const CompositionContext& ctx,
                             const SieveTables* tables);

// Direct side: sum of lambda(l) over F(l, m') = N with gcd(l, gamma*m') = 1.
double a_value_direct(const Form& F, i128 N, const LambdaSpec& lambda,
                      const SieveTables* tables);

// Class-group composition: reduced representative of [f][g], choosing a
// composable representative of [f] automatically.
Form compose_classes(const Form& f, const Form& g);

}  // namespace qform

#endif
