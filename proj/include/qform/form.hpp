#ifndef QFORM_FORM_HPP
#define QFORM_FORM_HPP

#include <optional>
#include <string>
#include <vector>

#include "qform/int128.hpp"

namespace qform {

// Integral binary quadratic form a*x^2 + b*x*y + c*y^2. All arithmetic is
// exact; intermediates are widened to 128 bits, so coefficients up to 2^62
// in magnitude are safe everywhere.
struct Form {
    i128 a = 0, b = 0, c = 0;

    Form() = default;
    Form(i128 a_, i128 b_, i128 c_) : a(a_), b(b_), c(c_) {}

    bool operator==(const Form& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator!=(const Form& o) const { return !(*this == o); }
    bool operator<(const Form& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }

    // Exact value a*x^2 + b*x*y + c*y^2.
    i128 eval(i128 x, i128 y) const {
        return checked_add(checked_add(checked_mul(checked_mul(a, x), x),
                                       checked_mul(checked_mul(b, x), y)),
                           checked_mul(checked_mul(c, y), y));
    }

    std::string str() const {
        return to_string(a) + "," + to_string(b) + "," + to_string(c);
    }
};

// Substitution (x, y) -> (p*x + q*y, r*x + s*y) with determinant +1:
// proper equivalence only.
struct UnimodularMap {
    i128 p = 1, q = 0, r = 0, s = 1;

    UnimodularMap() = default;
    UnimodularMap(i128 p_, i128 q_, i128 r_, i128 s_) : p(p_), q(q_), r(r_), s(s_) {}

    static UnimodularMap identity() { return {}; }

    i128 det() const {
        return checked_sub(checked_mul(p, s), checked_mul(q, r));
    }

    bool operator==(const UnimodularMap& o) const {
        return p == o.p && q == o.q && r == o.r && s == o.s;
    }

    // Matrix product: (*this) then... applying compose(U,V) as a substitution
    // equals applying V to the output of U in transform terms; see transform().
    UnimodularMap mul(const UnimodularMap& o) const {
        return {checked_add(checked_mul(p, o.p), checked_mul(q, o.r)),
                checked_add(checked_mul(p, o.q), checked_mul(q, o.s)),
                checked_add(checked_mul(r, o.p), checked_mul(s, o.r)),
                checked_add(checked_mul(r, o.q), checked_mul(s, o.s))};
    }

    UnimodularMap inverse() const { return {s, -q, -r, p}; }
};

i128 discriminant(const Form& f);
bool is_primitive(const Form& f);
bool is_positive_definite(const Form& f);
bool is_reduced(const Form& f);

// g(x,y) = f(p*x+q*y, r*x+s*y); requires det U = +1.
Form transform(const Form& f, const UnimodularMap& U);

// Gauss reduction of a primitive positive definite form. Returns the reduced
// form g together with a witness U such that transform(f, U) == g.
std::pair<Form, UnimodularMap> reduce(const Form& f);

// The principal form of discriminant D < 0.
Form principal_form(i128 D);

// All primitive reduced forms of discriminant D (D < 0, D = 0 or 1 mod 4),
// ordered by ascending a, then descending b. Size is the class number h(D).
std::vector<Form> enumerate_reduced_forms(i128 D);

// Witness U with transform(f, U) == g when f and g are properly equivalent,
// nothing otherwise. Both forms must be primitive positive definite of the
// same discriminant.
std::optional<UnimodularMap> properly_equivalent(const Form& f, const Form& g);

// Parse "a,b,c".
Form parse_form(const std::string& s);

}  // namespace qform

#endif
