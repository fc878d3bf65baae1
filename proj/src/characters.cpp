#include "qform/characters.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qform {

RootOfUnity RootOfUnity::make(i64 num, i64 den) {
    if (den <= 0) throw std::invalid_argument("root of unity: bad denominator");
    num = i64(mod_floor(num, den));
    i64 g = std::gcd(num, den);
    if (g == 0) g = den;
    RootOfUnity r;
    r.zero = false;
    r.num = num / g;
    r.den = den / g;
    return r;
}

std::complex<double> RootOfUnity::to_complex() const {
    if (zero) return {0.0, 0.0};
    if (num == 0) return {1.0, 0.0};
    if (2 * num == den) return {-1.0, 0.0};
    if (4 * num == den) return {0.0, 1.0};
    if (4 * num == 3 * den) return {0.0, -1.0};
    double theta = 2.0 * M_PI * double(num) / double(den);
    return {std::cos(theta), std::sin(theta)};
}

RootOfUnity RootOfUnity::conj() const {
    if (zero) return *this;
    return make(-num, den);
}

RootOfUnity RootOfUnity::mul(const RootOfUnity& o) const {
    if (zero || o.zero) return make_zero();
    i64 d = std::lcm(den, o.den);
    return make(num * (d / den) + o.num * (d / o.den), d);
}

namespace {

u64 pow_mod(u64 base, u64 exp, u64 mod) {
    u128 r = 1, b = base % mod;
    while (exp > 0) {
        if (exp & 1) r = r * b % mod;
        b = b * b % mod;
        exp >>= 1;
    }
    return u64(r);
}

// Smallest primitive root mod p^k for odd prime p.
u64 primitive_root_odd(u64 p, u64 pk, u64 phi) {
    // Factor p-1 to test generator candidates mod p, then lift to p^k.
    std::vector<u64> qs;
    u64 m = p - 1;
    for (u64 d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            qs.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) qs.push_back(m);
    u64 g = 2;
    for (;; ++g) {
        bool ok = true;
        for (u64 qf : qs)
            if (pow_mod(g, (p - 1) / qf, p) == 1) {
                ok = false;
                break;
            }
        if (ok) break;
    }
    if (pk == p) return g;
    // g generates mod p; g or g+p generates mod p^k.
    if (pow_mod(g, phi / p, pk) == 1) g += p;
    return g;
}

std::vector<std::uint32_t> dlog_table(u64 g, u64 pk, u64 order) {
    std::vector<std::uint32_t> dlog(pk, 0);
    u128 x = 1;
    for (u64 e = 0; e < order; ++e) {
        dlog[u64(x)] = std::uint32_t(e);
        x = x * g % pk;
    }
    return dlog;
}

}  // namespace

DirichletGroup::DirichletGroup(u64 q) : q_(q) {
    if (q < 1 || q > 1000000)
        throw std::invalid_argument("character modulus must lie in [1, 10^6]");
    phi_ = 1;
    u64 m = q;
    // 2-part first: trivial, C2, or C2 x C2^(e-2).
    if (m % 2 == 0) {
        u64 e = 0, pk = 1;
        while (m % 2 == 0) {
            m /= 2;
            ++e;
            pk *= 2;
        }
        if (e == 2) {
            Component c;
            c.pk = pk;
            c.owner_pk = pk;
            c.order = 2;
            c.dlog = dlog_table(3, 4, 2);
            comp_.push_back(std::move(c));
            phi_ *= 2;
        } else if (e >= 3) {
            // component generated by -1
            Component sign;
            sign.pk = pk;
            sign.owner_pk = pk;
            sign.order = 2;
            sign.dlog.assign(pk, 0);
            // component generated by 5
            Component five;
            five.pk = pk;
            five.owner_pk = pk;
            five.order = pk / 4;
            five.dlog.assign(pk, 0);
            u128 x = 1;
            for (u64 j = 0; j < pk / 4; ++j) {
                five.dlog[u64(x)] = std::uint32_t(j);
                five.dlog[pk - u64(x)] = std::uint32_t(j);
                sign.dlog[pk - u64(x)] = 1;
                x = x * 5 % pk;
            }
            comp_.push_back(std::move(sign));
            comp_.push_back(std::move(five));
            phi_ *= pk / 2;
        }
        // e == 1: phi(2) = 1, no component.
    }
    for (u64 p = 3; p * p <= m; p += 2) {
        if (m % p) continue;
        u64 pk = 1;
        while (m % p == 0) {
            m /= p;
            pk *= p;
        }
        u64 phi = pk / p * (p - 1);
        Component c;
        c.pk = pk;
        c.owner_pk = pk;
        c.order = phi;
        c.dlog = dlog_table(primitive_root_odd(p, pk, phi), pk, phi);
        comp_.push_back(std::move(c));
        phi_ *= phi;
    }
    if (m > 1) {
        u64 p = m, phi = p - 1;
        Component c;
        c.pk = p;
        c.owner_pk = p;
        c.order = phi;
        c.dlog = dlog_table(primitive_root_odd(p, p, phi), p, phi);
        comp_.push_back(std::move(c));
        phi_ *= phi;
    }
}

std::vector<u64> DirichletGroup::exponents(u64 n) const {
    std::vector<u64> out;
    out.reserve(comp_.size());
    for (const auto& c : comp_) out.push_back(c.dlog[n % c.owner_pk]);
    return out;
}

DirichletCharacter::DirichletCharacter(
    std::shared_ptr<const DirichletGroup> group, std::vector<u64> exps)
    : group_(std::move(group)), exps_(std::move(exps)) {
    if (exps_.size() != group_->component_count())
        throw std::invalid_argument("character exponent tuple has wrong size");
}

bool DirichletCharacter::is_principal() const {
    for (u64 e : exps_)
        if (e != 0) return false;
    return true;
}

RootOfUnity DirichletCharacter::at(i128 n) const {
    u64 q = group_->modulus();
    u64 r = u64(mod_floor(n, i128(q)));
    if (q == 1) return RootOfUnity::make(0, 1);
    if (std::gcd(r, q) != 1) return RootOfUnity::make_zero();
    // Sum num/den over components with a common denominator.
    i64 num = 0, den = 1;
    const auto& comps = group_->components();
    for (size_t i = 0; i < comps.size(); ++i) {
        i64 d = i64(comps[i].order);
        i64 contrib = i64(u128(exps_[i]) * comps[i].dlog[r % comps[i].owner_pk] %
                          u128(d));
        i64 g = std::lcm(den, d);
        num = num * (g / den) + contrib * (g / d);
        den = g;
        num = i64(mod_floor(num, den));
    }
    return RootOfUnity::make(num, den);
}

std::vector<std::complex<double>> DirichletCharacter::value_table() const {
    u64 q = group_->modulus();
    std::vector<std::complex<double>> v(q);
    for (u64 r = 0; r < q; ++r) v[r] = at(i128(r)).to_complex();
    return v;
}

std::vector<DirichletCharacter> characters_mod(u64 q) {
    auto group = std::make_shared<const DirichletGroup>(q);
    std::vector<DirichletCharacter> chars;
    chars.reserve(group->order());
    std::vector<u64> exps(group->component_count(), 0);
    // Odometer over exponent tuples; all-zero (principal) comes first.
    for (;;) {
        chars.emplace_back(group, exps);
        size_t i = 0;
        for (; i < exps.size(); ++i) {
            exps[i]++;
            if (exps[i] < group->components()[i].order) break;
            exps[i] = 0;
        }
        if (i == exps.size()) break;
    }
    if (chars.size() != group->order())
        throw std::runtime_error("character count mismatch");
    return chars;
}

}  // namespace qform
