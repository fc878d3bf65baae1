#include "qform/sieve.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace qform {

std::vector<std::pair<u64, int>> SieveTables::factor(u64 n) const {
    if (n > limit) throw std::out_of_range("factor: value beyond table limit");
    std::vector<std::pair<u64, int>> out;
    while (n >= 2) {
        u64 p = spf[n];
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

double SieveTables::throw_range(u64 n) const {
    throw std::out_of_range("Lambda: value " + std::to_string(n) +
                            " beyond table limit " + std::to_string(limit));
}

SieveTables build_sieve(u64 X) {
    if (X < 2 || X > (u64(1) << 34))
        throw std::invalid_argument("sieve limit must lie in [2, 2^34]");
    // spf u32 + mu i8 + Lambda f64 = 13 bytes per entry.
    constexpr u64 kBudgetBytes = u64(6) << 30;
    if ((X + 1) * 13 > kBudgetBytes)
        throw std::length_error("sieve tables would exceed the memory budget");

    SieveTables t;
    t.limit = X;
    t.spf.assign(X + 1, 0);
    t.mu.assign(X + 1, 0);
    t.mu[1] = 1;
    t.primes.reserve(X > 100 ? size_t(double(X) / std::log(double(X)) * 1.2)
                             : 32);

    // Linear sieve: each n is crossed once by its smallest prime factor.
    for (u64 i = 2; i <= X; ++i) {
        if (t.spf[i] == 0) {
            t.spf[i] = std::uint32_t(i);
            t.primes.push_back(std::uint32_t(i));
            t.mu[i] = -1;
        }
        for (std::uint32_t p : t.primes) {
            if (p > t.spf[i] || u64(p) * i > X) break;
            t.spf[p * i] = p;
            t.mu[p * i] = (p == t.spf[i]) ? 0 : std::int8_t(-t.mu[i]);
        }
    }

    t.lambda_vm.assign(X + 1, 0.0);
    for (std::uint32_t p : t.primes) {
        double lp = std::log(double(p));
        for (u128 q = p; q <= X; q *= p) t.lambda_vm[u64(q)] = lp;
    }
    return t;
}

namespace {

constexpr char kMagic[4] = {'Q', 'F', 'S', 'V'};
constexpr std::uint32_t kVersion = 1;

void require_little_endian() {
    if constexpr (std::endian::native != std::endian::little)
        throw std::runtime_error("sieve file format requires a little-endian host");
}

struct FileCloser {
    std::FILE* f;
    ~FileCloser() {
        if (f) std::fclose(f);
    }
};

}  // namespace

void save_sieve(const SieveTables& t, const std::string& path) {
    require_little_endian();
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    FileCloser closer{f};
    u64 n = t.limit + 1;
    bool ok = std::fwrite(kMagic, 1, 4, f) == 4 &&
              std::fwrite(&kVersion, 4, 1, f) == 1 &&
              std::fwrite(&t.limit, 8, 1, f) == 1 &&
              std::fwrite(t.spf.data(), 4, n, f) == n &&
              std::fwrite(t.mu.data(), 1, n, f) == n &&
              std::fwrite(t.lambda_vm.data(), 8, n, f) == n;
    if (!ok) throw std::runtime_error("short write: " + path);
}

SieveTables load_sieve(const std::string& path) {
    require_little_endian();
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open: " + path);
    FileCloser closer{f};
    char magic[4];
    std::uint32_t version = 0;
    SieveTables t;
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a sieve table file: " + path);
    if (std::fread(&version, 4, 1, f) != 1 || version != kVersion)
        throw std::runtime_error("unsupported sieve table version in " + path);
    if (std::fread(&t.limit, 8, 1, f) != 1 || t.limit < 2 ||
        t.limit > (u64(1) << 34))
        throw std::runtime_error("corrupt sieve table header in " + path);
    u64 n = t.limit + 1;
    t.spf.resize(n);
    t.mu.resize(n);
    t.lambda_vm.resize(n);
    if (std::fread(t.spf.data(), 4, n, f) != n ||
        std::fread(t.mu.data(), 1, n, f) != n ||
        std::fread(t.lambda_vm.data(), 8, n, f) != n)
        throw std::runtime_error("truncated sieve table file: " + path);
    t.primes.clear();
    for (u64 i = 2; i <= t.limit; ++i)
        if (t.spf[i] == i) t.primes.push_back(std::uint32_t(i));
    return t;
}

}  // namespace qform
