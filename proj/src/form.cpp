#include "qform/form.hpp"

#include <cctype>
#include <stdexcept>

namespace qform {

i128 discriminant(const Form& f) {
    return checked_sub(checked_mul(f.b, f.b),
                       checked_mul(4, checked_mul(f.a, f.c)));
}

bool is_primitive(const Form& f) {
    return gcd128(gcd128(f.a, f.b), f.c) == 1;
}

bool is_positive_definite(const Form& f) {
    return f.a > 0 && discriminant(f) < 0;
}

bool is_reduced(const Form& f) {
    i128 ab = abs128(f.b);
    if (!(ab <= f.a && f.a <= f.c)) return false;
    if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

Form transform(const Form& f, const UnimodularMap& U) {
    if (U.det() != 1)
        throw std::invalid_argument("substitution must have determinant +1");
    // f(px+qy, rx+sy): expand the three coefficients.
    i128 a2 = f.eval(U.p, U.r);
    i128 c2 = f.eval(U.q, U.s);
    i128 b2 = checked_add(
        checked_add(checked_mul(2, checked_mul(f.a, checked_mul(U.p, U.q))),
                    checked_mul(f.b, checked_add(checked_mul(U.p, U.s),
                                                 checked_mul(U.q, U.r)))),
        checked_mul(2, checked_mul(f.c, checked_mul(U.r, U.s))));
    return {a2, b2, c2};
}

std::pair<Form, UnimodularMap> reduce(const Form& f) {
    if (!is_positive_definite(f))
        throw std::invalid_argument("reduce: form is not positive definite");
    if (!is_primitive(f))
        throw std::invalid_argument("reduce: form is not primitive");

    Form g = f;
    UnimodularMap U = UnimodularMap::identity();
    for (;;) {
        // Normalize b into (-a, a] via x -> x + k*y.
        if (!(-g.a < g.b && g.b <= g.a)) {
            i128 k = floor_div(checked_sub(g.a, g.b), checked_mul(2, g.a));
            UnimodularMap T(1, k, 0, 1);
            g = transform(g, T);
            U = U.mul(T);
        }
        if (g.a > g.c) {
            // Swap outer coefficients via (x, y) -> (-y, x).
            UnimodularMap S(0, -1, 1, 0);
            g = transform(g, S);
            U = U.mul(S);
            continue;
        }
        break;
    }
    // Tie-break: b >= 0 when a = c (b = -a cannot survive normalization).
    if (g.b < 0 && g.a == g.c) {
        UnimodularMap S(0, -1, 1, 0);
        g = transform(g, S);
        U = U.mul(S);
    }
    if (!is_reduced(g) || transform(f, U) != g)
        throw std::runtime_error("reduce: witness verification failed");
    return {g, U};
}

Form principal_form(i128 D) {
    i128 r = mod_floor(D, 4);
    if (D >= 0 || (r != 0 && r != 1))
        throw std::invalid_argument("not a negative discriminant residue");
    if (r == 0) return {1, 0, -D / 4};
    return {1, 1, (1 - D) / 4};
}

std::vector<Form> enumerate_reduced_forms(i128 D) {
    i128 r = mod_floor(D, 4);
    if (D >= 0 || (r != 0 && r != 1))
        throw std::invalid_argument(
            "discriminant must be negative and 0 or 1 mod 4");
    std::vector<Form> out;
    for (i128 a = 1; 3 * a * a <= -D; ++a) {
        for (i128 b = a; b > -a; --b) {
            if (mod_floor(b - D, 2) != 0) continue;  // b parity matches D
            i128 num = checked_sub(checked_mul(b, b), D);
            if (num % (4 * a) != 0) continue;
            i128 c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && (-b == a || a == c)) continue;  // tie-break b >= 0
            Form f{a, b, c};
            if (!is_primitive(f)) continue;
            out.push_back(f);
        }
    }
    return out;
}

std::optional<UnimodularMap> properly_equivalent(const Form& f, const Form& g) {
    if (discriminant(f) != discriminant(g))
        throw std::invalid_argument("forms have different discriminants");
    auto [rf, Uf] = reduce(f);
    auto [rg, Ug] = reduce(g);
    if (rf != rg) return std::nullopt;
    // transform(f, Uf) == transform(g, Ug)  =>  transform(f, Uf * Ug^-1) == g.
    UnimodularMap W = Uf.mul(Ug.inverse());
    if (transform(f, W) != g)
        throw std::runtime_error("equivalence witness verification failed");
    return W;
}

Form parse_form(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3)
        throw std::invalid_argument("form must be given as \"a,b,c\": " + s);
    return {parse_i128(parts[0]), parse_i128(parts[1]), parse_i128(parts[2])};
}

}  // namespace qform
