#include <gtest/gtest.h>

#include "k3hilb/pell.hpp"
#include "oracles.hpp"

using namespace k3hilb;

namespace {

PellSolution sol(std::int64_t x, std::int64_t y) { return {BigInt(x), BigInt(y)}; }
FundamentalUnit unit(std::int64_t u, std::int64_t v) { return {BigInt(u), BigInt(v)}; }

}  // namespace

TEST(FundamentalSolution, KnownValues) {
    EXPECT_EQ(fundamental_solution(6), unit(5, 2));
    EXPECT_EQ(fundamental_solution(10), unit(19, 6));
    EXPECT_EQ(fundamental_solution(15), unit(4, 1));
    EXPECT_EQ(fundamental_solution(2), unit(3, 2));
    EXPECT_EQ(fundamental_solution(8), unit(3, 1));
    EXPECT_EQ(fundamental_solution(61), (FundamentalUnit{BigInt(1766319049), BigInt(226153980)}));
}

TEST(FundamentalSolution, SquareRejected) {
    EXPECT_THROW(fundamental_solution(9), std::invalid_argument);
    EXPECT_THROW(fundamental_solution(1), std::invalid_argument);
}

TEST(FundamentalSolution, HugeUnitsSatisfyEquation) {
    // d = 9999 has a short period, d = 991 and 1000099 have long ones
    for (std::uint64_t d : {991ULL, 9999ULL, 1000099ULL, 999999937ULL}) {
        const auto u = fundamental_solution(d);
        EXPECT_EQ(u.U * u.U - BigInt(d) * u.V * u.V, 1) << d;
        EXPECT_GT(u.V, 0);
    }
}

TEST(FundamentalSolution, MatchesBruteForceForSmallUnits) {
    for (std::uint64_t d = 2; d <= 200; ++d) {
        if (oracle::naive_is_square(d)) continue;
        const auto u = fundamental_solution(d);
        const auto brute = brute_force_minimal(PellProblem(d, 1), 100000);
        if (u.V <= 100000) {
            ASSERT_TRUE(brute.has_value()) << d;
            EXPECT_EQ(brute->x, u.U) << d;
            EXPECT_EQ(brute->y, u.V) << d;
        } else {
            EXPECT_FALSE(brute.has_value()) << d;
        }
    }
}

TEST(ContinuedFraction, PeriodsAndValues) {
    const SqrtContinuedFraction cf(7);  // [2; 1,1,1,4]
    EXPECT_EQ(cf.period(), 4U);
    EXPECT_EQ(cf.partial_quotient(4), 4);
    ConvergentWalker w(cf);
    for (int k = 0; k < 12; ++k) {
        EXPECT_EQ(w.p() * w.p() - 7 * w.q() * w.q(), w.value()) << k;
        w.advance();
    }
}

TEST(NegativePell, KnownValues) {
    EXPECT_EQ(negative_pell(10), sol(3, 1));
    EXPECT_EQ(negative_pell(2), sol(1, 1));
    EXPECT_FALSE(negative_pell(3).has_value());
    EXPECT_FALSE(negative_pell(6).has_value());
}

TEST(NegativePell, SquaresToFundamental) {
    for (std::uint64_t d = 2; d <= 2000; ++d) {
        if (oracle::naive_is_square(d)) continue;
        const auto n = negative_pell(d);
        if (!n) continue;
        const auto u = fundamental_solution(d);
        EXPECT_EQ(n->x * n->x + BigInt(d) * n->y * n->y, u.U) << d;
        EXPECT_EQ(2 * n->x * n->y, u.V) << d;
    }
}

TEST(MinimalSolution, KnownValues) {
    EXPECT_EQ(minimal_solution(PellProblem(20, 5)), sol(5, 1));
    EXPECT_FALSE(minimal_solution(PellProblem(24, 5)).has_value());
    EXPECT_FALSE(minimal_solution(PellProblem(60, 5)).has_value());
    EXPECT_EQ(minimal_solution(PellProblem(6, 1)), sol(5, 2));
}

TEST(MinimalSolution, RejectsBadInput) {
    EXPECT_THROW(PellProblem(5, 0), std::invalid_argument);
    EXPECT_THROW(PellProblem(0, 1), std::invalid_argument);
    EXPECT_THROW(minimal_solution(PellProblem(9, 1)), std::invalid_argument);
    EXPECT_THROW(minimal_solution(PellProblem(7, kPellRhsCap + 1)), std::out_of_range);
}

TEST(MinimalSolution, SquareDegreeByFactorPairs) {
    EXPECT_EQ(minimal_solution_square(2, 5), sol(3, 1));  // 9 - 4 = 5
    EXPECT_FALSE(minimal_solution_square(4, 5).has_value());
    EXPECT_EQ(minimal_solution_square(3, -5), sol(2, 1));  // 4 - 9 = -5
}

TEST(MinimalSolution, MatchesBruteForceOnManyRightHandSides) {
    for (std::uint64_t d = 2; d <= 60; ++d) {
        if (oracle::naive_is_square(d)) continue;
        for (std::int64_t m = -30; m <= 30; ++m) {
            if (m == 0) continue;
            const PellProblem p(d, m);
            const auto fast = minimal_solution(p);
            const auto brute = brute_force_minimal(p, 20000);
            if (fast && fast->y <= 20000) {
                ASSERT_EQ(fast, brute) << d << ' ' << m;
            } else {
                ASSERT_FALSE(brute.has_value()) << d << ' ' << m;
            }
        }
    }
}

TEST(GenerateSolutions, KnownValues) {
    EXPECT_EQ(generate_solutions(PellProblem(6, 1), sol(5, 2), 2), (std::vector<PellSolution>{sol(5, 2), sol(49, 20)}));
    EXPECT_EQ(generate_solutions(PellProblem(2, -1), sol(1, 1), 2), (std::vector<PellSolution>{sol(1, 1), sol(7, 5)}));
    EXPECT_EQ(generate_solutions(PellProblem(6, 1), sol(5, 2), 1), (std::vector<PellSolution>{sol(5, 2)}));
    EXPECT_THROW(generate_solutions(PellProblem(6, 1), sol(4, 2), 1), std::invalid_argument);
}

TEST(GenerateSolutions, AllSolveAndIncrease) {
    const PellProblem p(61, 1);
    const auto sols = generate_solutions(p, sol(1766319049, 226153980), 20);
    for (std::size_t i = 0; i < sols.size(); ++i) {
        EXPECT_TRUE(p.solved_by(sols[i].x, sols[i].y));
        if (i) {
            EXPECT_GT(sols[i].x, sols[i - 1].x);
        }
    }
}

TEST(BruteForce, KnownValues) {
    EXPECT_EQ(brute_force_minimal(PellProblem(6, 1), 100), sol(5, 2));
    EXPECT_FALSE(brute_force_minimal(PellProblem(24, 5), 100000).has_value());
    EXPECT_EQ(brute_force_minimal(PellProblem(2, -1), 10), sol(1, 1));
}
