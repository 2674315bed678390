#pragma once

// Pell-type equations x^2 - d*y^2 = m.
//
// The continued fraction of sqrt(d) is expanded with the usual integer state
// (P_k, Q_k, a_k); its convergents p_k/q_k satisfy
//     p_k^2 - d*q_k^2 = (-1)^(k+1) * Q_(k+1),
// so every convergent value is known from machine integers and only the
// convergents themselves need big integers.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3hilb/arith.hpp"

namespace k3hilb {

/// Largest |m| accepted by minimal_solution().
inline constexpr std::int64_t kPellRhsCap = 1'000'000;

/// Step limit for the bounded scan used when m^2 >= d.
inline constexpr std::uint64_t kPellScanLimit = 50'000'000;

struct PellProblem {
    std::uint64_t d = 0;
    std::int64_t m = 0;

    PellProblem(std::uint64_t d_, std::int64_t m_) : d(d_), m(m_) {
        if (d == 0) throw std::invalid_argument("Pell problem: d must be >= 1");
        if (m == 0) throw std::invalid_argument("Pell problem: m must be nonzero");
    }

    bool solved_by(const BigInt& x, const BigInt& y) const { return x * x - BigInt(d) * y * y == m; }
};

struct PellSolution {
    BigInt x;
    BigInt y;

    friend bool operator==(const PellSolution&, const PellSolution&) = default;
};

/// Minimal positive solution (U, V) of x^2 - d*y^2 = 1; epsilon = U + V*sqrt(d).
struct FundamentalUnit {
    BigInt U;
    BigInt V;

    friend bool operator==(const FundamentalUnit&, const FundamentalUnit&) = default;
};

inline std::string to_string(const PellSolution& s) { return "(" + s.x.str() + "," + s.y.str() + ")"; }

namespace detail {

inline void require_nonsquare(std::uint64_t d, const char* what) {
    if (d == 0 || is_perfect_square(d)) {
        throw std::invalid_argument(std::string(what) + ": d = " + std::to_string(d) +
                                    " is a perfect square (or zero); no positive solutions");
    }
}

}  // namespace detail

/// Periodic continued fraction sqrt(d) = [a0; a1, ..., a_l] with a_l = 2*a0.
class SqrtContinuedFraction {
public:
    explicit SqrtContinuedFraction(std::uint64_t d) : d_(d) {
        detail::require_nonsquare(d, "continued fraction of sqrt(d)");
        a0_ = static_cast<std::int64_t>(isqrt(d));
        std::int64_t P = 0;
        std::int64_t Q = 1;
        std::int64_t a = a0_;
        const auto dd = static_cast<std::int64_t>(d);
        do {
            P = a * Q - P;
            Q = (dd - P * P) / Q;
            a = (a0_ + P) / Q;
            partial_.push_back(a);
            denominators_.push_back(Q);
        } while (a != 2 * a0_);
    }

    std::uint64_t d() const { return d_; }
    std::int64_t a0() const { return a0_; }
    std::size_t period() const { return partial_.size(); }

    /// a_k for k >= 1.
    std::int64_t partial_quotient(std::size_t k) const { return partial_[(k - 1) % partial_.size()]; }

    /// p_k^2 - d*q_k^2 for k >= 0.
    std::int64_t convergent_value(std::size_t k) const {
        const std::int64_t Q = denominators_[k % denominators_.size()];
        return (k % 2 == 0) ? -Q : Q;
    }

private:
    std::uint64_t d_;
    std::int64_t a0_ = 0;
    std::vector<std::int64_t> partial_;       // a_1 .. a_l
    std::vector<std::int64_t> denominators_;  // Q_1 .. Q_l
};

/// Walks the convergents p_k/q_k, k = 0, 1, ...
class ConvergentWalker {
public:
    explicit ConvergentWalker(const SqrtContinuedFraction& cf)
        : cf_(cf), p_prev_(1), q_prev_(0), p_(cf.a0()), q_(1) {}

    std::size_t index() const { return k_; }
    const BigInt& p() const { return p_; }
    const BigInt& q() const { return q_; }
    std::int64_t value() const { return cf_.convergent_value(k_); }

    void advance() {
        ++k_;
        const std::int64_t a = cf_.partial_quotient(k_);
        BigInt p_next = a * p_ + p_prev_;
        BigInt q_next = a * q_ + q_prev_;
        p_prev_ = std::move(p_);
        q_prev_ = std::move(q_);
        p_ = std::move(p_next);
        q_ = std::move(q_next);
    }

private:
    const SqrtContinuedFraction& cf_;
    std::size_t k_ = 0;
    BigInt p_prev_, q_prev_, p_, q_;
};

namespace detail {

// First convergent (k < 2*period) whose value is m; these are exactly the
// primitive positive solutions when m^2 < d.
inline std::optional<PellSolution> first_convergent_with_value(const SqrtContinuedFraction& cf, std::int64_t m) {
    ConvergentWalker walk(cf);
    const std::size_t limit = 2 * cf.period();
    for (;;) {
        if (walk.value() == m) return PellSolution{walk.p(), walk.q()};
        if (walk.index() + 1 >= limit) return std::nullopt;
        walk.advance();
    }
}

inline unsigned __int128 isqrt128(unsigned __int128 n) {
    auto r = static_cast<unsigned __int128>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace detail

/// Minimal positive solution of x^2 - d*y^2 = 1 from the continued fraction
/// of sqrt(d): the convergent of index l-1 (l even) or 2l-1 (l odd).
inline FundamentalUnit fundamental_solution(std::uint64_t d) {
    detail::require_nonsquare(d, "fundamental_solution");
    const SqrtContinuedFraction cf(d);
    const std::size_t l = cf.period();
    const std::size_t target = (l % 2 == 0) ? l - 1 : 2 * l - 1;
    ConvergentWalker walk(cf);
    while (walk.index() < target) walk.advance();
    FundamentalUnit unit{walk.p(), walk.q()};
    if (unit.U * unit.U - BigInt(d) * unit.V * unit.V != 1) {
        throw std::logic_error("fundamental_solution: convergent fails x^2 - d y^2 = 1 for d = " + std::to_string(d));
    }
    return unit;
}

/// Minimal positive solution of x^2 - d*y^2 = -1, present iff the period of
/// sqrt(d) is odd.
inline std::optional<PellSolution> negative_pell(std::uint64_t d) {
    detail::require_nonsquare(d, "negative_pell");
    const SqrtContinuedFraction cf(d);
    const std::size_t l = cf.period();
    if (l % 2 == 0) return std::nullopt;
    ConvergentWalker walk(cf);
    while (walk.index() < l - 1) walk.advance();
    PellSolution s{walk.p(), walk.q()};
    if (!PellProblem(d, -1).solved_by(s.x, s.y)) {
        throw std::logic_error("negative_pell: convergent fails x^2 - d y^2 = -1 for d = " + std::to_string(d));
    }
    return s;
}

namespace detail {

// Every solution class has a representative with
//   0 <= y <= V*sqrt(m / (2(U+1)))   (m > 0)
//   0 <  y <= V*sqrt(|m| / (2(U-1))) (m < 0),
// so scanning that range finds every class. The smallest positive y found
// is minimal, unless the only hits have y = 0 (m a square), in which case the
// minimal positive solution is (x0, 0) * epsilon.
inline std::optional<PellSolution> bounded_class_scan(const PellProblem& problem, const FundamentalUnit& unit) {
    const BigInt absm = BigInt(std::llabs(problem.m));
    const BigInt denom = problem.m > 0 ? 2 * (unit.U + 1) : 2 * (unit.U - 1);
    const BigInt y_max = boost::multiprecision::sqrt(unit.V * unit.V * absm / denom);
    if (y_max > kPellScanLimit) {
        throw std::range_error("minimal_solution: search bound " + y_max.str() + " for d = " +
                               std::to_string(problem.d) + ", m = " + std::to_string(problem.m) +
                               " exceeds the scan limit");
    }
    const auto ymax = static_cast<std::uint64_t>(y_max);
    const __int128 m = problem.m;
    const __int128 d = problem.d;
    std::optional<std::uint64_t> square_root_of_m;
    for (std::uint64_t y = 0; y <= ymax; ++y) {
        const __int128 rhs = m + d * static_cast<__int128>(y) * static_cast<__int128>(y);
        if (rhs < 0) continue;
        const auto urhs = static_cast<unsigned __int128>(rhs);
        const unsigned __int128 x = isqrt128(urhs);
        if (x * x != urhs) continue;
        if (y == 0) {
            square_root_of_m = static_cast<std::uint64_t>(x);
            continue;
        }
        return PellSolution{BigInt(static_cast<std::uint64_t>(x)), BigInt(y)};
    }
    if (square_root_of_m) {
        const BigInt x0 = *square_root_of_m;
        return PellSolution{x0 * unit.U, x0 * unit.V};
    }
    return std::nullopt;
}

}  // namespace detail

/// Minimal positive solution (x > 0, y > 0, x least) of x^2 - d*y^2 = m, or
/// empty when unsolvable.
inline std::optional<PellSolution> minimal_solution(const PellProblem& problem) {
    detail::require_nonsquare(problem.d, "minimal_solution");
    if (std::llabs(problem.m) > kPellRhsCap) {
        throw std::out_of_range("minimal_solution: |m| = " + std::to_string(std::llabs(problem.m)) +
                                " exceeds the cap 10^6");
    }
    const auto d = problem.d;
    const auto absm = static_cast<std::uint64_t>(std::llabs(problem.m));

    std::optional<PellSolution> best;
    if (static_cast<unsigned __int128>(absm) * absm >= d) {
        best = detail::bounded_class_scan(problem, fundamental_solution(d));
    } else {
        // Solutions with gcd(x, y) = g come from primitive solutions of
        // x^2 - d*y^2 = m/g^2, which are convergents since (m/g^2)^2 < d.
        const SqrtContinuedFraction cf(d);
        for (std::uint64_t g = 1; g * g <= absm; ++g) {
            if (absm % (g * g) != 0) continue;
            const std::int64_t reduced = problem.m / static_cast<std::int64_t>(g * g);
            auto primitive = detail::first_convergent_with_value(cf, reduced);
            if (!primitive) continue;
            PellSolution candidate{primitive->x * g, primitive->y * g};
            if (!best || candidate.x < best->x) best = std::move(candidate);
        }
    }
    if (best && !problem.solved_by(best->x, best->y)) {
        throw std::logic_error("minimal_solution: candidate " + to_string(*best) + " fails the equation");
    }
    return best;
}

/// x^2 - (root*y)^2 = m for a square d = root^2, via factor pairs
/// (x - root*y)(x + root*y) = m. Returns the positive solution with least x.
inline std::optional<PellSolution> minimal_solution_square(std::uint64_t root, std::int64_t m) {
    if (root == 0) throw std::invalid_argument("minimal_solution_square: root must be >= 1");
    if (m == 0) throw std::invalid_argument("minimal_solution_square: m must be nonzero");
    if (std::llabs(m) > kPellRhsCap) throw std::out_of_range("minimal_solution_square: |m| exceeds the cap 10^6");
    const std::int64_t absm = std::llabs(m);
    const auto k = static_cast<std::int64_t>(root);
    std::optional<PellSolution> best;
    for (std::int64_t u = 1; u <= absm; ++u) {
        if (absm % u != 0) continue;
        for (std::int64_t low : {u, -u}) {
            const std::int64_t high = m / low;  // low * high = m
            const std::int64_t diff = high - low;
            const std::int64_t sum = high + low;
            if (diff <= 0 || sum <= 0 || sum % 2 != 0 || diff % (2 * k) != 0) continue;
            PellSolution s{BigInt(sum / 2), BigInt(diff / (2 * k))};
            if (!best || s.x < best->x) best = s;
        }
    }
    return best;
}

/// count solutions starting at seed, each obtained from the previous one by
/// multiplying with the fundamental unit: (x + y sqrt d)(U + V sqrt d).
inline std::vector<PellSolution> generate_solutions(const PellProblem& problem, const PellSolution& seed,
                                                    std::size_t count) {
    detail::require_nonsquare(problem.d, "generate_solutions");
    if (!problem.solved_by(seed.x, seed.y)) {
        throw std::invalid_argument("generate_solutions: seed " + to_string(seed) + " does not solve x^2 - " +
                                    std::to_string(problem.d) + " y^2 = " + std::to_string(problem.m));
    }
    if (seed.x <= 0 || seed.y < 0) throw std::invalid_argument("generate_solutions: seed must have x > 0, y >= 0");
    const FundamentalUnit unit = fundamental_solution(problem.d);
    const BigInt d = problem.d;
    std::vector<PellSolution> out;
    out.reserve(count);
    PellSolution cur = seed;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(cur);
        PellSolution next{cur.x * unit.U + cur.y * d * unit.V, cur.x * unit.V + cur.y * unit.U};
        cur = std::move(next);
    }
    return out;
}

/// Exhaustive scan over 1 <= y <= y_bound; ground truth for tests. Squares
/// are filtered mod 64 before an exact root is taken.
inline std::optional<PellSolution> brute_force_minimal(const PellProblem& problem, std::uint64_t y_bound) {
    static const auto square_mod64 = [] {
        std::array<bool, 64> t{};
        for (unsigned r = 0; r < 64; ++r) t[r * r % 64] = true;
        return t;
    }();
    const __int128 m = problem.m;
    const __int128 d = problem.d;
    for (std::uint64_t y = 1; y <= y_bound; ++y) {
        const __int128 rhs = m + d * static_cast<__int128>(y) * static_cast<__int128>(y);
        if (rhs < 0) continue;
        if (!square_mod64[static_cast<unsigned>(rhs & 63)]) continue;
        const auto urhs = static_cast<unsigned __int128>(rhs);
        const unsigned __int128 x = detail::isqrt128(urhs);
        if (x * x == urhs) return PellSolution{BigInt(static_cast<std::uint64_t>(x)), BigInt(y)};
    }
    return std::nullopt;
}

}  // namespace k3hilb
