#include "catch_amalgamated.hpp"

#include <string>
#include <vector>

#include "cardshuffle/formulas.hpp"
#include "cardshuffle/solver.hpp"

using namespace cardshuffle;

namespace {

Rational rat(const std::string& s) { return parse_rational(s); }

}  // namespace

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(0) == 0);
    CHECK(harmonic(1) == 1);
    CHECK(harmonic(2) == rat("3/2"));
    CHECK(harmonic(5) == rat("137/60"));
    CHECK(harmonic(6) - harmonic(5) == ratio(1, 6));
}

TEST_CASE("tier-1 closed forms") {
    CHECK(tier1_lambda_r(3, 1) == rat("82/7"));
    CHECK(tier1_lambda_r(3, 2) == rat("88/7"));
    CHECK(tier1_lambda_r(2, 1) == 6);
    CHECK(tier1_lambda(3, 1, 3) == rat("103/7"));
    CHECK(tier1_lambda(2, 1, 1) == 7);
    CHECK(tier1_lambda(4, 1, 0) == rat("1222/63"));
    CHECK_THROWS_AS(tier1_lambda_r(3, 3), Error);
    CHECK_THROWS_AS(tier1_lambda(3, 1, 4), Error);
}

TEST_CASE("tier-1 extremes") {
    CHECK(tier1_extremes(3) == std::pair{rat("82/7"), rat("103/7")});
    CHECK(tier1_extremes(5) == std::pair{rat("2878/99"), rat("3571/99")});
    CHECK(tier1_extremes(2) == std::pair{Rational(6), Rational(7)});
    for (int n = 2; n <= 12; ++n) {
        auto [lo, hi] = tier1_extremes(n);
        CHECK(lo == tier1_lambda(n, 1, 0));
        CHECK(hi == tier1_lambda(n, 1, 2 * n - 3));
    }
    CHECK_THROWS_AS(tier1_extremes(1), Error);
}

TEST_CASE("tier-1 family is monotone") {
    for (int n = 3; n <= 12; ++n)
        for (int m = 1; m + 1 <= n - 1; ++m) {
            CHECK(tier1_lambda_r(n, m + 1) > tier1_lambda_r(n, m));
            CHECK(tier1_lambda(n, m + 1, 2 * n - 2 * (m + 1) - 1) <
                  tier1_lambda(n, m, 2 * n - 2 * m - 1));
        }
}

TEST_CASE("closed-form tier 1 equals the solver") {
    for (int n = 2; n <= 8; ++n) {
        auto table = tier_solve(n, 1);
        for (int m = 1; m <= n - 1; ++m)
            for (int k = 0; k <= 2 * n - 2 * m - 1; ++k)
                CHECK(tier1_lambda(n, m, k) == table.lambda_of(tier1_deck(n, {m, k})));
    }
}

TEST_CASE("bound formulas") {
    auto b31 = bounds(3, 1);
    CHECK(b31.lower_m == rat("82/7"));  // k = 1 reduces to the best tier-1 deck
    auto b32 = bounds(3, 2);
    CHECK(b32.lower_m == rat("103/7"));

    for (int n = 2; n <= 10; ++n) {
        auto b = bounds(n, 1);
        CHECK(b.upper_mr == Rational(BigInt(n) * n) + ratio(5 * n, 3));  // H_1 = 1
    }
    for (int n = 2; n <= 9; ++n)
        for (int k = 1; k <= n - 1; ++k) {
            auto b = bounds(n, k);
            CHECK(b.upper_m_v2 == b.upper_mr + (2 * n - 2 * k - 1));
        }
    CHECK_THROWS_AS(bounds(3, 0), Error);
    CHECK_THROWS_AS(bounds(3, 3), Error);
}

TEST_CASE("bounds sandwich the exact values") {
    for (int n = 2; n <= 6; ++n) {
        auto table = tier_solve(n);
        for (int k = 1; k <= n - 1; ++k) {
            auto s = tier_stats(table, k);
            auto b = bounds(n, k);
            CHECK(b.lower_m <= s.m_k);
            CHECK(s.big_m_k <= b.upper_m_v1);
            CHECK(s.big_m_k <= b.upper_m_v2);
            CHECK(s.big_m_k_r <= b.upper_mr);
            CHECK(s.big_m_k_r <= s.big_m_k);
            CHECK(s.m_k <= s.tier_mean);
            CHECK(s.tier_mean <= s.big_m_k);
        }
        if (n >= 3) CHECK(tier_stats(table, 2).big_m_k_r <= tier2_upper_mr(n));
    }
}

TEST_CASE("descent probability") {
    CHECK(tier_to_lower_tier_probability(3, 1) == rat("1/6"));
    CHECK(tier_to_lower_tier_probability(3, 2) == rat("1/3"));
    CHECK(tier_to_lower_tier_probability(5, 4) == rat("2/5"));
    CHECK_THROWS_AS(tier_to_lower_tier_probability(5, 0), Error);
    for (int n = 2; n <= 6; ++n) {
        auto report = verify_tier_descent_probability(n);
        CHECK(report.ok());
        CHECK(report.checked > 0);
    }
}

TEST_CASE("expected random moves") {
    CHECK(expected_random_moves(3, 1) == 6);
    CHECK(expected_random_moves(3, 2) == 9);
    CHECK(expected_random_moves(5, 0) == 0);
    CHECK(expected_random_moves(26, 25) == 52 * harmonic(25));
    CHECK_THROWS_AS(expected_random_moves(3, 3), Error);
}

TEST_CASE("chain-distance inequality holds exhaustively") {
    for (int n = 3; n <= 6; ++n) {
        auto report = check_dd_inequality(n);
        CHECK(report.ok());
        CHECK(report.checked > 0);
        CHECK(report.max_slack_same_tier >= 0);
        CHECK(report.max_slack_down_tier >= 0);
    }
    CHECK_THROWS_AS(check_dd_inequality(2), Error);
}

TEST_CASE("recursions hold on exact extrema") {
    for (int n = 2; n <= 6; ++n) {
        auto table = tier_solve(n);
        std::vector<TierStats> stats;
        for (int k = 1; k <= n - 1; ++k) stats.push_back(tier_stats(table, k));
        for (int k = 1; k <= n - 1; ++k) {
            Rational m_prev = k == 1 ? Rational(0) : stats[size_t(k - 2)].m_k;
            Rational big_prev = k == 1 ? Rational(0) : stats[size_t(k - 2)].big_m_k;
            CHECK(m_recursion_holds(n, k, m_prev, stats[size_t(k - 1)].m_k));
            CHECK(big_m_recursion_holds(n, k, big_prev, stats[size_t(k - 1)].big_m_k));
            if (k >= 3)
                CHECK(refined_recursion_holds(n, k, stats[size_t(k - 1)].big_m_k_r,
                                              stats[size_t(k - 2)].big_m_k_r,
                                              stats[size_t(k - 3)].big_m_k_r));
        }
    }
    CHECK_THROWS_AS(refined_recursion_holds(5, 2, Rational(1), Rational(1), Rational(1)), Error);
}
