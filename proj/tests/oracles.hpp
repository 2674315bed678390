#pragma once

// Independent brute-force oracles used as ground truth by the tests. None of
// these call into the library's algorithms.

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace k3hilb::oracle {

/// Trial division by every integer.
inline std::vector<std::pair<std::uint64_t, unsigned>> naive_factor(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        unsigned k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (k) out.emplace_back(p, k);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

/// #{x in (Z/n)* : x^2 = 1} by enumeration.
inline std::uint64_t brute_two_torsion(std::uint64_t n) {
    if (n == 1) return 1;
    std::uint64_t count = 0;
    for (std::uint64_t x = 1; x < n; ++x) {
        if (std::gcd(x, n) == 1 && x * x % n == 1 % n) ++count;
    }
    return count;
}

/// a in [0, 2e) with a^2 - e z^2 = 1 (mod 4e), by direct loop.
inline std::vector<std::uint64_t> brute_isotropic(std::uint64_t e, unsigned z) {
    std::vector<std::uint64_t> out;
    const std::int64_t mod = 4 * static_cast<std::int64_t>(e);
    for (std::uint64_t a = 0; a < 2 * e; ++a) {
        const std::int64_t v = static_cast<std::int64_t>(a * a) - static_cast<std::int64_t>(e * z * z) - 1;
        if (((v % mod) + mod) % mod == 0) out.push_back(a);
    }
    return out;
}

inline bool naive_is_square(std::uint64_t n) {
    std::uint64_t r = 0;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

}  // namespace k3hilb::oracle
