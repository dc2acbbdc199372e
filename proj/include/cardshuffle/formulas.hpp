#pragma once

// Closed forms and bounds for expected absorption times, all exact.

#include <cstdint>
#include <string>
#include <vector>

#include "cardshuffle/deck.hpp"
#include "cardshuffle/enumeration.hpp"
#include "cardshuffle/error.hpp"
#include "cardshuffle/rational.hpp"

namespace cardshuffle {

// lambda of the tier-1 r-deck [m, 0]:
//   n^2 + 2n/3 + m - (n^2 + 2m^2 - m) / (4n^2 - 1)
inline Rational tier1_lambda_r(int n, int m) {
    if (n < 2 || m < 1 || m > n - 1)
        raise(Errc::out_of_range, "tier1_lambda_r: need 1 <= m <= n-1");
    Rational v(BigInt(n) * n);
    v += ratio(2 * n, 3);
    v += m;
    v -= ratio(BigInt(n) * n + 2 * BigInt(m) * m - m, 4 * BigInt(n) * n - 1);
    return v;
}

// lambda of the arbitrary tier-1 deck [m, k]: the r-deck value plus the k
// deterministic steps leading to it.
inline Rational tier1_lambda(int n, int m, int k) {
    if (n < 2 || m < 1 || m > n - 1 || k < 0 || k > 2 * n - 2 * m - 1)
        raise(Errc::out_of_range, "tier1_lambda: invalid [m, k]");
    return tier1_lambda_r(n, m) + k;
}

// Extremes over tier 1: ([1,0] is cheapest, [1, 2n-3] costliest).
inline std::pair<Rational, Rational> tier1_extremes(int n) {
    if (n < 2) raise(Errc::out_of_range, "tier1_extremes: need n >= 2");
    Rational n2(BigInt(n) * n);
    Rational tail = ratio(5, 4) / Rational(4 * BigInt(n) * n - 1);
    Rational lo = n2 + ratio(2 * n, 3) + ratio(3, 4) - tail;
    Rational hi = n2 + ratio(8 * n, 3) - ratio(9, 4) - tail;
    return {lo, hi};
}

// The four closed-form bounds for tier k.
struct BoundsRecord {
    int n = 0;
    int k = 0;
    Rational lower_m;     // m_k >= n^2 + 2nH_k - 4n/3 + 3/4 - 5/(4(4n^2-1))
    Rational upper_m_v1;  // M_k <= 4n^2 H_k - 3n^2 - 4nk + 20n/3 - 9/4 - 5/(4(4n^2-1))
    Rational upper_mr;    // M_k^r <= 2n^2 H_k - n^2 - n(k - 8/3)
    Rational upper_m_v2;  // M_k <= 2n^2 H_k - n^2 - n(k - 14/3) - 2k - 1
};

inline BoundsRecord bounds(int n, int k) {
    if (k < 1 || k > n - 1) raise(Errc::out_of_range, "bounds: need 1 <= k <= n-1");
    BoundsRecord b;
    b.n = n;
    b.k = k;
    Rational h = harmonic(k);
    Rational n2(BigInt(n) * n);
    Rational tail = ratio(5, 4) / Rational(4 * BigInt(n) * n - 1);
    b.lower_m = n2 + 2 * n * h - ratio(4 * n, 3) + ratio(3, 4) - tail;
    b.upper_m_v1 = 4 * n2 * h - 3 * n2 - Rational(4 * BigInt(n) * k) + ratio(20 * n, 3) -
                   ratio(9, 4) - tail;
    b.upper_mr = 2 * n2 * h - n2 - n * (Rational(k) - ratio(8, 3));
    b.upper_m_v2 = 2 * n2 * h - n2 - n * (Rational(k) - ratio(14, 3)) - 2 * k - 1;
    return b;
}

// Sharper tier-2 bound: M_2^r <= 2n^2 + n/6 + 3/4 + (6n-17)/(4(4n^2-1)).
inline Rational tier2_upper_mr(int n) {
    if (n < 3) raise(Errc::out_of_range, "tier2_upper_mr: need n >= 3");
    return 2 * Rational(BigInt(n) * n) + ratio(n, 6) + ratio(3, 4) +
           ratio(6 * BigInt(n) - 17, 4 * (4 * BigInt(n) * n - 1));
}

// Probability that one move from an r-deck in tier k lands in tier k-1.
inline Rational tier_to_lower_tier_probability(int n, int k) {
    if (k < 1 || k > n - 1)
        raise(Errc::out_of_range, "tier_to_lower_tier_probability: need 1 <= k <= n-1");
    return ratio(k, 2 * n);
}

// Verification mode for the k/2n law: sums the step-distribution mass landing
// in tier k-1 for every r-deck of every tier, exhaustively.
struct DescentProbabilityReport {
    std::uint64_t checked = 0;
    std::vector<Deck> violations;

    bool ok() const { return violations.empty(); }
};

inline DescentProbabilityReport verify_tier_descent_probability(int n) {
    DescentProbabilityReport report;
    for (const Deck& d : enumerate_decks(n)) {
        if (classify(d) != DeckClass::RDeck) continue;
        int k = tier_of(d);
        Rational down(0);
        for (const auto& [succ, p] : step_distribution(d))
            if (tier_of(succ) == k - 1) down += p;
        ++report.checked;
        if (down != tier_to_lower_tier_probability(n, k)) report.violations.push_back(d);
    }
    return report;
}

// Expected number of random (r-deck) moves before absorption from tier k.
inline Rational expected_random_moves(int n, int k) {
    if (k < 0 || k > n - 1) raise(Errc::out_of_range, "expected_random_moves: k outside [0, n-1]");
    return 2 * n * harmonic(k);
}

// Exhaustive check of the chain-distance inequality: for a deck D in tier k
// (k >= 2) at distance d from its chain's r-deck R, and any successor D' of R
// at distance d' from its own r-deck,
//   d + d' <= 2n - 2k - 1  when D' stays in tier k,
//   d + d' <= 2n - 2k + 2  when D' drops to tier k-1.
// Covers r-decks too (d = 0), a superset of the d-deck statement.  In tier 1
// only the individual longest-chain distance bound d <= 2n - 2k - 1 applies.
struct DdInequalityReport {
    int n = 0;
    std::uint64_t checked = 0;
    std::vector<std::string> violations;
    int max_slack_same_tier = -1;  // bound minus attained d+d', maximized
    int max_slack_down_tier = -1;

    bool ok() const { return violations.empty(); }
};

inline DdInequalityReport check_dd_inequality(int n) {
    if (n < 3) raise(Errc::out_of_range, "check_dd_inequality: need n >= 3");
    DdInequalityReport report;
    report.n = n;
    for (const Deck& deck : enumerate_decks(n)) {
        int k = tier_of(deck);
        if (k < 1) continue;
        auto [chain, d] = chain_of(deck);
        if (d > 2 * n - 2 * k - 1)
            report.violations.push_back("chain distance " + std::to_string(d) + " from " +
                                        render(deck) + " exceeds tier bound");
        if (k < 2) continue;
        const Deck& r = chain.end();
        for (const auto& [succ, p] : step_distribution(r)) {
            (void)p;
            int d2 = chain_of(succ).second;
            int kk = tier_of(succ);
            int bound = kk == k ? 2 * n - 2 * k - 1 : 2 * n - 2 * k + 2;
            ++report.checked;
            int slack = bound - (d + d2);
            if (kk == k)
                report.max_slack_same_tier = std::max(report.max_slack_same_tier, slack);
            else
                report.max_slack_down_tier = std::max(report.max_slack_down_tier, slack);
            if (slack < 0)
                report.violations.push_back("d+d' = " + std::to_string(d + d2) + " > " +
                                            std::to_string(bound) + " for " + render(deck) +
                                            " -> " + render(succ));
        }
    }
    return report;
}

// Recursive bounds on tier extrema, checked on exact values.
inline bool m_recursion_holds(int n, int k, const Rational& m_prev, const Rational& m_cur) {
    return m_cur >= 1 + ratio(k, 2 * n) * m_prev + ratio(2 * n - k, 2 * n) * m_cur;
}

inline bool big_m_recursion_holds(int n, int k, const Rational& big_m_prev,
                                  const Rational& big_m_cur) {
    return big_m_cur <=
           2 * n - 2 * k + ratio(k, 2 * n) * big_m_prev + ratio(2 * n - k, 2 * n) * big_m_cur;
}

// Two-step refined recursion for M_k^r, k >= 3.
inline bool refined_recursion_holds(int n, int k, const Rational& mr_k, const Rational& mr_k1,
                                    const Rational& mr_k2) {
    if (k < 3) raise(Errc::out_of_range, "refined_recursion_holds: need k >= 3");
    BigInt nn(n), kk(k);
    Rational head = ratio(8 * nn * nn * nn + 4 * nn * nn - 8 * kk * nn * nn + 10 * nn * kk - 3 * kk,
                          4 * nn * kk - kk * kk);
    Rational mid = ratio(4 * nn - 2 * kk + 1, 4 * nn - kk) * mr_k1;
    Rational tail = ratio(kk - 1, 4 * nn - kk) * mr_k2;
    return mr_k <= head + mid + tail;
}

}  // namespace cardshuffle
