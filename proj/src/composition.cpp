#include "qform/composition.hpp"

#include <algorithm>
#include <stdexcept>

namespace qform {

namespace {

struct ExtGcd {
    i128 g, x, y;  // a*x + b*y = g
};

ExtGcd ext_gcd(i128 a, i128 b) {
    if (b == 0) return {a < 0 ? -a : a, a < 0 ? i128(-1) : i128(1), 0};
    i128 r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
    while (r1 != 0) {
        i128 q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        x0 -= q * x1;
        std::swap(x0, x1);
        y0 -= q * y1;
        std::swap(y0, y1);
    }
    if (r0 < 0) {
        r0 = -r0;
        x0 = -x0;
        y0 = -y0;
    }
    return {r0, x0, y0};
}

i128 exact_div(i128 num, i128 den, const char* what) {
    if (den == 0 || num % den != 0)
        throw std::invalid_argument(std::string("non-exact division in ") + what +
                                    ": " + to_string(num) + " / " + to_string(den));
    return num / den;
}

void require_same_disc(const Form& f, const Form& F) {
    if (discriminant(f) != discriminant(F))
        throw std::invalid_argument("forms have different discriminants");
    if (!is_positive_definite(f) || !is_positive_definite(F))
        throw std::invalid_argument("forms must be positive definite");
    if (!is_primitive(f) || !is_primitive(F))
        throw std::invalid_argument("forms must be primitive");
}

}  // namespace

ComposeCoeffs derive_coeffs(const Form& f, const Form& F, i128 B) {
    i128 delta = -discriminant(F);
    ComposeCoeffs co;
    co.hs = exact_div(checked_add(f.b, F.b), 2, "(b+beta)/2");
    co.p1 = exact_div(checked_sub(B, f.b), 2 * f.a, "(B-b)/2a");
    co.p2 = exact_div(checked_sub(B, F.b), 2 * F.a, "(B-beta)/2alpha");
    co.cc = exact_div(checked_add(checked_mul(B, B), delta), 4 * f.a * F.a,
                      "(B^2+Delta)/4a*alpha");
    return co;
}

Form dirichlet_compose(const Form& f, const Form& F, i128 B) {
    require_same_disc(f, F);
    i128 delta = -discriminant(F);
    if ((f.b + F.b) % 2 != 0)
        throw std::invalid_argument("middle coefficients have different parity");
    i128 g = gcd128(gcd128(f.a, F.a), (f.b + F.b) / 2);
    if (g != 1)
        throw std::invalid_argument(
            "gcd condition violated: gcd(a, alpha, (b+beta)/2) = " + to_string(g));
    if (mod_floor(B - f.b, 2 * f.a) != 0)
        throw std::invalid_argument("B = " + to_string(B) +
                                    " fails B = b (mod 2a) with 2a = " +
                                    to_string(2 * f.a));
    if (mod_floor(B - F.b, 2 * F.a) != 0)
        throw std::invalid_argument("B = " + to_string(B) +
                                    " fails B = beta (mod 2alpha) with 2alpha = " +
                                    to_string(2 * F.a));
    if (mod_floor(checked_mul(B, B) + delta, 4 * f.a * F.a) != 0)
        throw std::invalid_argument(
            "B = " + to_string(B) + " fails B^2 + Delta = 0 (mod 4a*alpha) with "
            "4a*alpha = " + to_string(4 * f.a * F.a));
    Form h{checked_mul(f.a, F.a), B,
           (checked_mul(B, B) + delta) / (4 * f.a * F.a)};
    if (discriminant(h) != -delta || !is_primitive(h))
        throw std::runtime_error("composed form failed internal verification");
    return h;
}

std::pair<i128, i128> wz_substitution(const Form& f, const Form& F, i128 B,
                                      i128 u, i128 v, i128 X, i128 Y) {
    require_same_disc(f, F);
    ComposeCoeffs co = derive_coeffs(f, F, B);
    i128 W = checked_sub(
        checked_mul(checked_sub(u, checked_mul(co.p1, v)), X),
        checked_mul(checked_add(checked_mul(co.p2, u),
                                checked_mul(co.cc - co.p1 * co.p2, v)),
                    Y));
    i128 Z = checked_add(
        checked_mul(F.a, checked_mul(v, X)),
        checked_mul(checked_add(checked_mul(f.a, u), checked_mul(co.hs, v)), Y));
    return {W, Z};
}

std::pair<i128, i128> compose_point(const Form& f, const Form& F, i128 B,
                                    i128 u, i128 v, i128 w, i128 z) {
    ComposeCoeffs co = derive_coeffs(f, F, B);
    i128 X = checked_add(
        checked_mul(checked_add(checked_mul(f.a, u), checked_mul(co.hs, v)), w),
        checked_mul(checked_add(checked_mul(co.p2, u),
                                checked_mul(co.cc - co.p1 * co.p2, v)),
                    z));
    i128 Y = checked_add(checked_mul(-F.a, checked_mul(v, w)),
                         checked_mul(checked_sub(u, checked_mul(co.p1, v)), z));
    return {X, Y};
}

Form fstar(const Form& f, const Form& F, i128 B) {
    i128 delta = -discriminant(F);
    i128 aalpha = checked_mul(f.a, F.a);
    i128 num = checked_add(checked_mul(B, B), delta);
    if (num % (4 * aalpha) != 0)
        throw std::runtime_error(
            "fstar: (B^2+Delta)/(4a*alpha) is not integral; broken context");
    return {aalpha, B, num / (4 * aalpha)};
}

Form fstar(const Form& f, const CompositionContext& ctx) {
    return fstar(f, ctx.F, ctx.B);
}

i128 qf_bilinear(const Form& f, const Form& F, i128 B, i128 u, i128 v, i128 w,
                 i128 z) {
    i128 p1 = exact_div(checked_sub(B, f.b), 2 * f.a, "(B-b)/2a");
    return checked_add(checked_mul(F.a, checked_mul(v, w)),
                       checked_mul(checked_sub(u, checked_mul(p1, v)), z));
}

i128 qf_bilinear(const Form& f, const CompositionContext& ctx, i128 u, i128 v,
                 i128 w, i128 z) {
    return qf_bilinear(f, ctx.F, ctx.B, u, v, w, z);
}

i128 recovered_ell(const Form& f, const Form& F, i128 B, i128 u, i128 v,
                   i128 w, i128 z) {
    return compose_point(f, F, B, u, v, w, z).first;
}

std::vector<std::pair<i128, i128>> represent(const Form& f, i128 n,
                                             bool primitive_only) {
    if (!is_positive_definite(f))
        throw std::invalid_argument("represent: form must be positive definite");
    std::vector<std::pair<i128, i128>> out;
    if (n < 0) return out;
    if (n == 0) {
        if (!primitive_only) out.emplace_back(0, 0);
        return out;
    }
    i128 delta = -discriminant(f);
    // 4a f(u,v) = (2au + bv)^2 + Delta v^2, so |v| <= sqrt(4an/Delta).
    i128 fourAn = checked_mul(4 * f.a, n);
    if (fourAn > i128(UINT64_MAX))
        throw std::invalid_argument(
            "represent: 4*a*n too large for exact enumeration");
    u64 vmax = isqrt64(u64(fourAn / delta));
    for (i128 v = -i128(vmax); v <= i128(vmax); ++v) {
        i128 rem = fourAn - delta * v * v;
        if (rem < 0) continue;
        u64 t = isqrt64(u64(rem));
        if (i128(t) * t != rem) continue;
        for (int sign = 0; sign < (t == 0 ? 1 : 2); ++sign) {
            i128 st = sign == 0 ? i128(t) : -i128(t);
            i128 num = st - checked_mul(f.b, v);
            if (num % (2 * f.a) != 0) continue;
            i128 u = num / (2 * f.a);
            if (primitive_only && gcd128(u, v) != 1) continue;
            out.emplace_back(u, v);
        }
    }
    return out;
}

namespace {

// Merge x = r (mod m) into the running congruence; throws on inconsistency.
struct Crt {
    i128 r = 0, m = 1;

    void add(i128 res, i128 mod, const std::string& label) {
        res = mod_floor(res, mod);
        ExtGcd e = ext_gcd(m, mod);
        if (mod_floor(res - r, e.g) != 0)
            throw std::runtime_error(
                "inconsistent congruence system at " + label + ": x = " +
                to_string(r) + " (mod " + to_string(m) + ") vs x = " +
                to_string(res) + " (mod " + to_string(mod) + ")");
        i128 lcm = checked_mul(m / e.g, mod);
        // r + m * k = res (mod mod), k = (res - r)/g * inv(m/g) mod (mod/g)
        i128 k = mod_floor(checked_mul((res - r) / e.g % (mod / e.g),
                                       e.x % (mod / e.g)),
                           mod / e.g);
        r = mod_floor(checked_add(r, checked_mul(m, k)), lcm);
        m = lcm;
    }
};

bool is_small_prime(i128 n) {
    if (n < 2) return false;
    for (i128 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<i128> prime_factors_exact(i128 n) {
    std::vector<i128> out;
    if (n < 0) n = -n;
    for (i128 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

std::vector<ClassRepresentative> build_sf(const Form& F, i128 t,
                                          std::set<i128>* used, u64 budget) {
    if (t == 0) throw std::invalid_argument("build_sf: t must be nonzero");
    if (!is_positive_definite(F) || !is_primitive(F))
        throw std::invalid_argument(
            "build_sf: form must be primitive positive definite");
    i128 D = discriminant(F);
    i128 delta = -D;
    std::set<i128> local_used;
    std::set<i128>& taken = used ? *used : local_used;

    std::vector<ClassRepresentative> out;
    for (const Form& g : enumerate_reduced_forms(D)) {
        if (g.a == 1) {
            // Principal class is kept as-is; its leading coefficient 1
            // contributes trivial congruences.
            out.push_back({g, 1, UnimodularMap::identity(), g});
            continue;
        }
        // Expanding rings over primitive points x, y >= 0 until g(x, y) is a
        // fresh prime not dividing 2 t Delta.
        u64 spent = 0;
        bool found = false;
        for (i128 R = 1; !found; ++R) {
            std::vector<std::pair<i128, i128>> ring;
            for (i128 x = 0; x < R; ++x) ring.emplace_back(x, R);
            for (i128 y = 0; y <= R; ++y) ring.emplace_back(R, y);
            for (auto& [x, y] : ring) {
                if (++spent > budget)
                    throw std::runtime_error(
                        "build_sf: no prime leading coefficient found for class " +
                        g.str() + " within the search budget");
                if (gcd128(x, y) != 1) continue;
                i128 p = g.eval(x, y);
                if (!is_small_prime(p)) continue;
                if (mod_floor(2 * t * delta, p) == 0) continue;
                if (taken.count(p)) continue;
                // Extend (x, y) to a determinant-1 substitution with smallest
                // non-negative lower-right entry.
                i128 s, qc;
                if (y == 0) {
                    s = 1;
                    qc = 0;
                } else {
                    ExtGcd e = ext_gcd(x, y);
                    s = mod_floor(e.x, y);
                    qc = exact_div(x * s - 1, y, "bezout extension");
                }
                UnimodularMap U{x, qc, y, s};
                Form rep = transform(g, U);
                if (rep.a != p)
                    throw std::runtime_error("build_sf: transported prime mismatch");
                taken.insert(p);
                out.push_back({rep, p, U, g});
                found = true;
                break;
            }
        }
    }
    return out;
}

i128 choose_b(const std::vector<Form>& SF, const Form& F) {
    i128 delta = -discriminant(F);
    Crt crt;
    crt.add(F.b, 2 * F.a, "B = beta (mod 2 alpha)");
    for (const Form& f : SF) crt.add(f.b, 2 * f.a, "B = b (mod 2a), f = " + f.str());
    i128 B = crt.r;
    for (const Form& f : SF) {
        if (mod_floor(checked_mul(B, B) + delta, 4 * f.a * F.a) != 0)
            throw std::runtime_error(
                "choose_b: B^2 + Delta not divisible by 4a*alpha for f = " +
                f.str());
    }
    return B;
}

i128 choose_b_joint(const std::vector<ClassRepresentative>& SF,
                    const std::vector<std::vector<ClassRepresentative>>& SFstar,
                    const Form& F) {
    i128 delta = -discriminant(F);
    Crt crt;
    crt.add(F.b, 2 * F.a, "B = beta (mod 2 alpha)");
    for (const auto& e : SF)
        crt.add(e.form.b, 2 * e.form.a, "B = b (mod 2a), f = " + e.form.str());
    for (const auto& list : SFstar)
        for (const auto& e : list)
            crt.add(e.form.b, 2 * e.form.a,
                    "B = e (mod 2d), g = " + e.form.str());
    i128 B = crt.r;
    i128 B2d = checked_mul(B, B) + delta;
    for (const auto& ef : SF) {
        if (mod_floor(B2d, 4 * ef.form.a * F.a) != 0)
            throw std::runtime_error("joint B fails 4a*alpha divisibility at " +
                                     ef.form.str());
        for (const auto& list : SFstar)
            for (const auto& eg : list)
                if (mod_floor(B2d, 4 * ef.form.a * eg.form.a * F.a) != 0)
                    throw std::runtime_error(
                        "joint B fails 4a*d*alpha divisibility at " +
                        ef.form.str() + " x " + eg.form.str());
    }
    return B;
}

bool CompositionContext::coprime_to_pf(u128 n) const {
    if (n == 0) return false;
    for (i64 p = 2; p <= CF; ++p) {
        if (!is_small_prime(p)) continue;
        if (n % u128(p) == 0) return false;
    }
    return true;
}

std::vector<Form> CompositionContext::sf_forms() const {
    std::vector<Form> v;
    v.reserve(SF.size());
    for (const auto& e : SF) v.push_back(e.form);
    return v;
}

bool CompositionContext::operator==(const CompositionContext& o) const {
    return F == o.F && Delta == o.Delta && SF == o.SF && SFstar == o.SFstar &&
           B == o.B && QF == o.QF && Qfstar == o.Qfstar && CF == o.CF &&
           PF == o.PF;
}

CompositionContext build_context(const Form& F, u64 budget) {
    if (!is_positive_definite(F) || !is_primitive(F))
        throw std::invalid_argument(
            "context: form must be primitive positive definite");
    CompositionContext ctx;
    ctx.F = F;
    ctx.Delta = -discriminant(F);

    std::set<i128> used;
    ctx.SF = build_sf(F, F.a, &used, budget);

    i128 t2 = F.a;
    for (const auto& e : ctx.SF) t2 = checked_mul(t2, e.prime);
    for (size_t i = 0; i < ctx.SF.size(); ++i)
        ctx.SFstar.push_back(build_sf(F, t2, &used, budget));

    ctx.B = choose_b_joint(ctx.SF, ctx.SFstar, F);

    // QF = 2 alpha gamma Delta prod f(1,0); the nested analogue keeps the
    // construction-determined factors 2 a alpha Delta prod g(1,0).
    ctx.QF = checked_mul(checked_mul(2 * F.a, F.c), ctx.Delta);
    for (const auto& e : ctx.SF) ctx.QF = checked_mul(ctx.QF, e.prime);
    for (size_t i = 0; i < ctx.SF.size(); ++i) {
        i128 q = checked_mul(2 * ctx.SF[i].form.a * F.a, ctx.Delta);
        for (const auto& e : ctx.SFstar[i]) q = checked_mul(q, e.prime);
        ctx.Qfstar.push_back(q);
    }

    i128 cf = 2;
    for (i128 p : prime_factors_exact(ctx.QF)) cf = std::max(cf, p);
    for (i128 q : ctx.Qfstar)
        for (i128 p : prime_factors_exact(q)) cf = std::max(cf, p);
    ctx.CF = to_i64(cf);

    ctx.PF = 1;
    for (i64 p = 2; p <= ctx.CF; ++p) {
        if (!is_small_prime(p)) continue;
        u128 next = ctx.PF * u128(p);
        if (next / u128(p) != ctx.PF)
            throw std::runtime_error(
                "PF exceeds 128 bits (CF = " + std::to_string(ctx.CF) +
                "); context not representable");
        ctx.PF = next;
    }

    verify_context(ctx);
    return ctx;
}

void verify_context(const CompositionContext& ctx) {
    auto fail = [](const std::string& what) {
        throw std::runtime_error("context verification failed: " + what);
    };
    if (-discriminant(ctx.F) != ctx.Delta) fail("Delta mismatch");
    if (ctx.SF.empty() || ctx.SF.size() != ctx.SFstar.size())
        fail("SF/SFstar shape");

    std::vector<Form> classes = enumerate_reduced_forms(-ctx.Delta);
    std::set<i128> all_primes;
    auto check_list = [&](const std::vector<ClassRepresentative>& list, i128 t) {
        bool have_principal = false;
        std::set<Form> covered;
        for (const auto& e : list) {
            if (discriminant(e.form) != -ctx.Delta) fail("member discriminant");
            if (!is_primitive(e.form)) fail("member primitivity");
            if (e.form.eval(1, 0) != e.prime) fail("recorded prime mismatch");
            if (transform(e.reduced, e.from_reduced) != e.form)
                fail("witness substitution mismatch");
            if (!covered.insert(reduce(e.form).first).second)
                fail("duplicate class in representative list");
            if (e.prime == 1) {
                have_principal = true;
            } else {
                if (!is_small_prime(e.prime)) fail("leading coefficient not prime");
                if (mod_floor(2 * t * ctx.Delta, e.prime) == 0)
                    fail("leading prime divides 2*t*Delta");
                if (!all_primes.insert(e.prime).second)
                    fail("leading prime reused across lists");
            }
        }
        if (!have_principal) fail("principal class missing");
        if (covered != std::set<Form>(classes.begin(), classes.end()))
            fail("representative list does not cover the class group");
    };
    check_list(ctx.SF, ctx.F.a);
    i128 t2 = ctx.F.a;
    for (const auto& e : ctx.SF) t2 = checked_mul(t2, e.prime);
    for (const auto& l : ctx.SFstar) check_list(l, t2);

    // Exponent congruences, both levels.
    if (mod_floor(ctx.B - ctx.F.b, 2 * ctx.F.a) != 0) fail("B = beta (mod 2alpha)");
    i128 B2d = checked_mul(ctx.B, ctx.B) + ctx.Delta;
    for (const auto& e : ctx.SF) {
        if (mod_floor(ctx.B - e.form.b, 2 * e.form.a) != 0) fail("B = b (mod 2a)");
        if (mod_floor(B2d, 4 * e.form.a * ctx.F.a) != 0) fail("4a*alpha | B^2+Delta");
        for (const auto& list : ctx.SFstar)
            for (const auto& g : list)
                if (mod_floor(B2d, 4 * e.form.a * g.form.a * ctx.F.a) != 0)
                    fail("4a*d*alpha | B^2+Delta");
    }
    for (const auto& list : ctx.SFstar)
        for (const auto& g : list)
            if (mod_floor(ctx.B - g.form.b, 2 * g.form.a) != 0)
                fail("B = e (mod 2d)");

    // Every prime factor of QF and the nested products stays <= CF, and PF is
    // exactly the primorial of CF.
    for (i128 p : prime_factors_exact(ctx.QF))
        if (p > ctx.CF) fail("QF prime factor beyond CF");
    for (i128 q : ctx.Qfstar)
        for (i128 p : prime_factors_exact(q))
            if (p > ctx.CF) fail("nested product prime factor beyond CF");
    u128 pf = 1;
    for (i64 p = 2; p <= ctx.CF; ++p)
        if (is_small_prime(p)) pf *= u128(p);
    if (pf != ctx.PF) fail("PF is not the primorial of CF");
}

int tuple_multiplicity(i128 Delta) {
    if (Delta == 3) return 6;
    if (Delta == 4) return 4;
    return 2;
}

std::vector<DecompositionTuple> decompose_representation(
    i128 m, i128 n, i128 X, i128 Y, const CompositionContext& ctx) {
    if (m <= 0 || n <= 0)
        throw std::invalid_argument("decompose: m, n must be positive");
    if (gcd128(m, n) != 1)
        throw std::invalid_argument("decompose: gcd(m, n) must be 1");
    if (!ctx.coprime_to_pf(u128(checked_mul(m, n))))
        throw std::invalid_argument("decompose: gcd(mn, PF) must be 1");
    if (gcd128(X, Y) != 1)
        throw std::invalid_argument("decompose: gcd(X, Y) must be 1");
    if (ctx.F.eval(X, Y) != checked_mul(m, n))
        throw std::invalid_argument("decompose: F(X, Y) != m*n");

    std::vector<DecompositionTuple> out;
    for (const auto& entry : ctx.SF) {
        auto reps_m = represent(entry.form, m, true);
        if (reps_m.empty()) continue;
        auto reps_n = represent(fstar(entry.form, ctx), n, true);
        for (auto& [u, v] : reps_m)
            for (auto& [w, z] : reps_n) {
                auto [x2, y2] = compose_point(entry.form, ctx.F, ctx.B, u, v, w, z);
                if (x2 == X && y2 == Y)
                    out.push_back({entry.form, u, v, w, z});
            }
    }
    if (out.empty())
        throw std::runtime_error(
            "decompose: no tuple found for a valid representation (fatal)");
    return out;
}

double amn_via_decomposition(i128 m, i128 n, const LambdaSpec& lambda,
                             const CompositionContext& ctx,
                             const SieveTables* tables) {
    if (m <= 0 || n <= 0)
        throw std::invalid_argument("a_mn: m, n must be positive");
    if (gcd128(m, n) != 1)
        throw std::invalid_argument("a_mn: gcd(m, n) must be 1");
    if (!ctx.coprime_to_pf(u128(checked_mul(m, n))))
        throw std::invalid_argument("a_mn: gcd(mn, PF) must be 1");
    double sum = 0.0;
    for_each_amn_tuple(m, n, ctx,
                       [&](const Form&, i128, i128, i128, i128, i128 ell) {
                           if (ell > 0 && ell <= i128(INT64_MAX))
                               sum += lambda.eval(i64(ell), tables);
                       });
    return sum / tuple_multiplicity(ctx.Delta);
}

double a_value_direct(const Form& F, i128 N, const LambdaSpec& lambda,
                      const SieveTables* tables) {
    double sum = 0.0;
    for_each_representation(F, N, [&](i128 l, i128 mm) {
        if (l <= 0 || l > i128(INT64_MAX)) return;
        if (gcd128(l, checked_mul(F.c, mm)) != 1) return;
        sum += lambda.eval(i64(l), tables);
    });
    return sum;
}

Form compose_classes(const Form& f, const Form& g) {
    require_same_disc(f, g);
    i128 delta = -discriminant(f);
    // Pick a representative of [f] whose leading coefficient is coprime to
    // 2 * g.a * Delta, then a matching exponent.
    Form f1 = f;
    {
        i128 avoid = checked_mul(2 * g.a, delta);
        if (gcd128(f.a, avoid) > 1) {
            auto [red, ured] = reduce(f);
            std::set<i128> used;
            u64 spent = 0;
            bool found = false;
            for (i128 R = 1; !found; ++R) {
                std::vector<std::pair<i128, i128>> ring;
                for (i128 x = 0; x < R; ++x) ring.emplace_back(x, R);
                for (i128 y = 0; y <= R; ++y) ring.emplace_back(R, y);
                for (auto& [x, y] : ring) {
                    if (++spent > 100000)
                        throw std::runtime_error(
                            "compose_classes: no coprime representative found");
                    if (gcd128(x, y) != 1) continue;
                    i128 p = red.eval(x, y);
                    if (!is_small_prime(p) || mod_floor(avoid, p) == 0) continue;
                    i128 s, qc;
                    if (y == 0) {
                        s = 1;
                        qc = 0;
                    } else {
                        ExtGcd e = ext_gcd(x, y);
                        s = mod_floor(e.x, y);
                        qc = exact_div(x * s - 1, y, "bezout extension");
                    }
                    f1 = transform(red, UnimodularMap{x, qc, y, s});
                    found = true;
                    break;
                }
            }
        }
    }
    Crt crt;
    crt.add(f1.b, 2 * f1.a, "class composition: B = b (mod 2a)");
    crt.add(g.b, 2 * g.a, "class composition: B = beta (mod 2alpha)");
    return reduce(dirichlet_compose(f1, g, crt.r)).first;
}

}  // namespace qform
