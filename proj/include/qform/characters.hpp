#ifndef QFORM_CHARACTERS_HPP
#define QFORM_CHARACTERS_HPP

#include <complex>
#include <memory>
#include <numeric>
#include <vector>

#include "qform/int128.hpp"

namespace qform {

// Exact character value: zero, or the root of unity e(num/den).
struct RootOfUnity {
    bool zero = true;
    i64 num = 0;  // reduced fraction num/den in [0, 1)
    i64 den = 1;

    static RootOfUnity make_zero() { return {}; }
    static RootOfUnity make(i64 num, i64 den);

    std::complex<double> to_complex() const;
    RootOfUnity conj() const;
    RootOfUnity mul(const RootOfUnity& o) const;  // exact angle addition
    bool is_one() const { return !zero && num == 0; }
    bool operator==(const RootOfUnity& o) const {
        return zero == o.zero && num == o.num && den == o.den;
    }
};

// The unit group mod q decomposed into cyclic components, with discrete-log
// tables per component so characters evaluate in O(#components).
class DirichletGroup {
public:
    explicit DirichletGroup(u64 q);

    u64 modulus() const { return q_; }
    u64 order() const { return phi_; }  // phi(q) = number of characters
    size_t component_count() const { return comp_.size(); }

    struct Component {
        u64 pk;                      // prime power (or 2^e sub-factor)
        u64 order;                   // cyclic order
        std::vector<std::uint32_t> dlog;  // index by residue mod pk_owner
        u64 owner_pk;                // modulus the dlog table is indexed by
    };

    const std::vector<Component>& components() const { return comp_; }

    // Exponent vector of n in the cyclic decomposition; n must be coprime to q.
    std::vector<u64> exponents(u64 n) const;

    bool coprime(u64 n) const { return std::gcd(n % q_, q_) == 1 || q_ == 1; }

private:
    u64 q_;
    u64 phi_;
    std::vector<Component> comp_;
};

// One Dirichlet character mod q: an exponent tuple against the group's
// cyclic decomposition. Completely multiplicative; zero off the units.
class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const DirichletGroup> group,
                       std::vector<u64> exps);

    u64 modulus() const { return group_->modulus(); }
    bool is_principal() const;

    RootOfUnity at(i128 n) const;
    std::complex<double> operator()(i128 n) const { return at(n).to_complex(); }

    // Dense value table for hot loops: values[r] = chi(r) for r in [0, q).
    std::vector<std::complex<double>> value_table() const;

    const std::vector<u64>& exponents() const { return exps_; }

private:
    std::shared_ptr<const DirichletGroup> group_;
    std::vector<u64> exps_;
};

// The full character group mod q, phi(q) members, principal character first.
std::vector<DirichletCharacter> characters_mod(u64 q);

}  // namespace qform

#endif
