#ifndef QFORM_LAMBDA_HPP
#define QFORM_LAMBDA_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qform/sieve.hpp"

namespace qform {

// Weight sequence lambda(l) supported on the natural numbers; lambda(l) = 0
// for l <= 0. Optionally restricted to a residue class l = b mod q.
struct LambdaSpec {
    enum class Kind { ConstantOne, VonMangoldt, PrimeIndicator, Table };

    Kind kind = Kind::ConstantOne;
    std::vector<double> table;  // table[l] for l >= 1; index 0 unused
    u64 cong_q = 0;             // 0 = no congruence restriction
    i64 cong_b = 0;
    double bound_A = 1.0;  // declared growth bound |lambda(l)| <= C log^A(l)
    double bound_C = 1.0;

    static LambdaSpec constant_one() { return {}; }
    static LambdaSpec von_mangoldt() {
        LambdaSpec s;
        s.kind = Kind::VonMangoldt;
        return s;
    }
    static LambdaSpec prime_indicator() {
        LambdaSpec s;
        s.kind = Kind::PrimeIndicator;
        return s;
    }
    // Validates the declared growth bound on construction.
    static LambdaSpec from_table(std::vector<double> values, double A, double C) {
        LambdaSpec s;
        s.kind = Kind::Table;
        s.bound_A = A;
        s.bound_C = C;
        for (size_t l = 1; l < values.size(); ++l) {
            double cap = C * std::pow(std::max(1.0, std::log(double(l))), A);
            if (std::abs(values[l]) > cap)
                throw std::invalid_argument(
                    "lambda table violates its declared growth bound at l = " +
                    std::to_string(l));
        }
        s.table = std::move(values);
        return s;
    }

    LambdaSpec restricted(i64 b, u64 q) const {
        LambdaSpec s = *this;
        s.cong_b = b;
        s.cong_q = q;
        return s;
    }

    bool needs_tables() const {
        return kind == Kind::VonMangoldt || kind == Kind::PrimeIndicator;
    }

    double eval(i64 l, const SieveTables* tables) const {
        if (l <= 0) return 0.0;
        if (cong_q > 0 && mod_floor(l - cong_b, i128(cong_q)) != 0) return 0.0;
        switch (kind) {
            case Kind::ConstantOne:
                return 1.0;
            case Kind::VonMangoldt:
                if (!tables) throw std::invalid_argument("lambda: tables required");
                return tables->vm(u64(l));
            case Kind::PrimeIndicator:
                if (!tables) throw std::invalid_argument("lambda: tables required");
                return u64(l) <= tables->limit && tables->is_prime(u64(l)) ? 1.0
                                                                           : 0.0;
            case Kind::Table:
                return u64(l) < table.size() ? table[size_t(l)] : 0.0;
        }
        return 0.0;
    }

    std::string kind_name() const {
        switch (kind) {
            case Kind::ConstantOne: return "constant-one";
            case Kind::VonMangoldt: return "von-mangoldt";
            case Kind::PrimeIndicator: return "prime-indicator";
            case Kind::Table: return "table";
        }
        return "?";
    }

    static Kind parse_kind(const std::string& name) {
        if (name == "constant-one" || name == "one") return Kind::ConstantOne;
        if (name == "von-mangoldt" || name == "vm") return Kind::VonMangoldt;
        if (name == "prime-indicator" || name == "prime")
            return Kind::PrimeIndicator;
        if (name == "table") return Kind::Table;
        throw std::invalid_argument("unknown lambda kind: " + name);
    }
};

}  // namespace qform

#endif
