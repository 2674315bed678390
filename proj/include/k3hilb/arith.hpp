#pragma once

// Exact integer utilities: factorization, perfect squares, and the 2-torsion
// of unit groups (Z/nZ)*.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace k3hilb {

// Expression templates off: every intermediate is a plain value, which keeps
// ternaries and auto deductions well-typed.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

/// Largest integer accepted by factorize().
inline constexpr std::uint64_t kFactorCap = 1'000'000'000'000ULL;

/// Trial division bound; with kFactorCap = kTrialBound^2 any cofactor left
/// after trial division is prime.
inline constexpr std::uint64_t kTrialBound = 1'000'000ULL;

struct PrimePower {
    std::uint64_t prime = 0;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    std::uint64_t n = 1;
    std::vector<PrimePower> factors;  // strictly increasing primes

    std::size_t distinct_primes() const { return factors.size(); }
};

/// Polarization degree: h^2 = 2e.
class PolarizationDegree {
public:
    explicit PolarizationDegree(std::uint64_t e) : e_(e) {
        if (e == 0) throw std::invalid_argument("polarization degree e must be >= 1");
    }
    std::uint64_t value() const { return e_; }

private:
    std::uint64_t e_;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

// Primes up to kTrialBound, built once.
inline const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<bool> composite(kTrialBound + 1, false);
        std::vector<std::uint32_t> out;
        for (std::uint64_t i = 2; i <= kTrialBound; ++i) {
            if (composite[i]) continue;
            out.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= kTrialBound; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

}  // namespace detail

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

/// Trial division by primes up to 10^6, stopping early once the cofactor is
/// prime. Inputs above 10^12 are rejected.
inline Factorization factorize(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    if (n > kFactorCap) throw std::out_of_range("factorize: n exceeds 10^12 cap");

    Factorization f;
    f.n = n;
    std::uint64_t rest = n;
    bool rest_prime = is_prime(rest);
    for (std::uint32_t p : detail::small_primes()) {
        const std::uint64_t pp = p;
        if (rest_prime || pp * pp > rest) break;
        if (rest % pp == 0) {
            unsigned k = 0;
            do {
                rest /= pp;
                ++k;
            } while (rest % pp == 0);
            f.factors.push_back({pp, k});
            rest_prime = is_prime(rest);
        }
    }
    if (rest > 1) {
        if (!is_prime(rest)) throw std::logic_error("factorize: composite cofactor " + std::to_string(rest));
        f.factors.push_back({rest, 1});
    }
    return f;
}

/// Number of distinct prime divisors of e, with the convention p(1) = 1.
inline unsigned p_of_e(PolarizationDegree e) {
    if (e.value() == 1) return 1;
    return static_cast<unsigned>(factorize(e.value()).distinct_primes());
}

inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// The root k when n = k^2, otherwise empty.
inline std::optional<std::uint64_t> exact_sqrt(std::uint64_t n) {
    const std::uint64_t r = isqrt(n);
    if (static_cast<unsigned __int128>(r) * r == n) return r;
    return std::nullopt;
}

inline std::optional<BigInt> exact_sqrt(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

inline bool is_perfect_square(std::uint64_t n) { return exact_sqrt(n).has_value(); }

/// Number of x in (Z/nZ)* with x^2 = 1, assembled over the prime powers of n:
/// 1 for 2, 2 for 4, 4 for 2^k (k >= 3), 2 for odd p^k.
inline std::uint64_t two_torsion_count(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("two_torsion_count: n must be >= 1");
    std::uint64_t count = 1;
    for (const auto& [p, k] : factorize(n).factors) {
        if (p == 2) {
            count *= (k == 1) ? 1 : (k == 2) ? 2 : 4;
        } else {
            count *= 2;
        }
    }
    return count;
}

/// Residues a mod 2e, split by the value of a^2 mod 4e: those with a^2 = 1
/// and those with a^2 = 1 + e (even a when e is odd). a^2 is tracked
/// incrementally so no division happens inside the loop.
struct UnitSquareClasses {
    std::vector<std::uint64_t> square_one;
    std::vector<std::uint64_t> square_one_plus_e;
};

inline UnitSquareClasses classify_unit_squares(PolarizationDegree degree) {
    const std::uint64_t e = degree.value();
    const std::uint64_t mod2e = 2 * e;
    const std::uint64_t mod4e = 4 * e;
    const std::uint64_t target1 = 1 % mod4e;
    const std::uint64_t target2 = (1 + e) % mod4e;
    UnitSquareClasses out;
    std::uint64_t sq = 0;  // a^2 mod 4e
    for (std::uint64_t a = 0; a < mod2e; ++a) {
        if (sq == target1) out.square_one.push_back(a);
        if (sq == target2) out.square_one_plus_e.push_back(a);
        // (a+1)^2 = a^2 + 2a + 1
        sq += 2 * a + 1;
        while (sq >= mod4e) sq -= mod4e;
    }
    return out;
}

/// All a in Z/2e with a^2 = 1 (mod 4e), sorted.
inline std::vector<std::uint64_t> square_roots_of_unity(PolarizationDegree degree) {
    auto roots = classify_unit_squares(degree).square_one;
    if (degree.value() >= 2 && roots.size() * 2 != two_torsion_count(4 * degree.value())) {
        throw std::logic_error("square_roots_of_unity: count disagrees with two_torsion_count(4e)/2");
    }
    return roots;
}

}  // namespace k3hilb
