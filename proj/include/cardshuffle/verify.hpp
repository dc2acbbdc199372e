#pragma once

// The cross-module verification suite behind `cardshuffle verify` and the
// fault-injection tests.  Each check asserts an exact structural property of
// the chain, the counting formulas, the solvers, or the bound formulas, over
// every n up to the requested ceiling.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cardshuffle/deck.hpp"
#include "cardshuffle/enumeration.hpp"
#include "cardshuffle/error.hpp"
#include "cardshuffle/formulas.hpp"
#include "cardshuffle/montecarlo.hpp"
#include "cardshuffle/rational.hpp"
#include "cardshuffle/solver.hpp"

namespace cardshuffle {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    int n_max = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

constexpr int kMaxVerifyN = 8;

inline VerifyReport run_verify(int n_max) {
    if (n_max < 1) raise(Errc::out_of_range, "run_verify: n_max must be positive");
    if (n_max > kMaxVerifyN) raise(Errc::too_large, "run_verify: n_max > 8");

    VerifyReport report;
    report.n_max = n_max;
    auto add = [&](const std::string& name, bool passed, const std::string& detail = "") {
        report.checks.push_back({name, passed, passed ? "" : detail});
    };

    std::map<int, std::vector<Deck>> decks;
    std::map<int, AbsorptionTable> tables;
    for (int n = 1; n <= n_max; ++n) {
        decks[n] = enumerate_decks(n);
        tables[n] = tier_solve(n);
    }

    // Move structure.
    {
        bool sums_ok = true, descent_ok = true, d_same_ok = true, roundtrip_ok = true;
        std::string detail;
        for (int n = 1; n <= n_max && sums_ok && descent_ok && d_same_ok && roundtrip_ok; ++n) {
            for (const Deck& d : decks[n]) {
                Rational total(0);
                int k = tier_of(d);
                for (const auto& [succ, p] : step_distribution(d)) {
                    total += p;
                    int k2 = tier_of(succ);
                    if (k2 != k && k2 != k - 1) {
                        descent_ok = false;
                        detail = "edge " + render(d) + " -> " + render(succ);
                    }
                }
                if (total != 1) {
                    sums_ok = false;
                    detail = "distribution sum for " + render(d);
                }
                if (classify(d) == DeckClass::DDeck &&
                    tier_of(deterministic_successor(d)) != k) {
                    d_same_ok = false;
                    detail = "d-move changed tier from " + render(d);
                }
                if (parse_deck(render(d)) != d) {
                    roundtrip_ok = false;
                    detail = "roundtrip " + render(d);
                }
            }
        }
        add("probability_sums", sums_ok, detail);
        add("tier_descent", descent_ok, detail);
        add("d_move_same_tier", d_same_ok, detail);
        add("canonical_roundtrip", roundtrip_ok, detail);
    }

    // Tier-1 naming.
    {
        bool ok = true;
        std::string detail;
        for (int n = 2; n <= n_max && ok; ++n) {
            size_t named = 0;
            for (int m = 1; m <= n - 1 && ok; ++m)
                for (int k = 0; k <= 2 * n - 2 * m - 1 && ok; ++k) {
                    Deck d = tier1_deck(n, {m, k});
                    ++named;
                    if (tier_of(d) != 1 || !(tier1_name(d) == Tier1Name{m, k})) {
                        ok = false;
                        detail = "naming failed at n=" + std::to_string(n) + " [" +
                                 std::to_string(m) + "," + std::to_string(k) + "]";
                    }
                    if (ok && k >= 1) {
                        auto dist = step_distribution(d);
                        Deck expect = tier1_deck(n, {m, k - 1});
                        if (dist.size() != 1 || dist.begin()->first != expect ||
                            dist.begin()->second != 1) {
                            ok = false;
                            detail = "[m,k] -> [m,k-1] failed at n=" + std::to_string(n);
                        }
                    }
                }
            if (ok && named != static_cast<size_t>(n) * (n - 1)) {
                ok = false;
                detail = "tier-1 name count mismatch at n=" + std::to_string(n);
            }
        }
        add("tier1_naming", ok, detail);
    }

    // Counting.
    {
        bool ok = true;
        std::string detail;
        for (int n = 1; n <= n_max && ok; ++n) {
            auto c = census(n);
            BigInt total = 0;
            for (int k = 0; k <= n - 1; ++k) {
                const auto& t = c.tiers[static_cast<size_t>(k)];
                total += t.total;
                if (BigInt(t.total) != tier_size_formula(n, k) ||
                    BigInt(t.r_count) != r_count_formula(n, k) ||
                    BigInt(t.d_count) != d_count_formula(n, k) ||
                    t.total != t.r_count + t.d_count) {
                    ok = false;
                    detail = "counts at n=" + std::to_string(n) + " k=" + std::to_string(k);
                }
                // ratio of r-decks to d-decks is k/(n-k)
                if (BigInt(t.r_count) * (n - k) != BigInt(t.d_count) * k) {
                    ok = false;
                    detail = "r/d ratio at n=" + std::to_string(n) + " k=" + std::to_string(k);
                }
            }
            if (total != deck_count(n)) {
                ok = false;
                detail = "total deck count at n=" + std::to_string(n);
            }
        }
        add("census_counts", ok, detail);
    }
    {
        bool ok = true;
        for (int n = 1; n <= 20; ++n) {
            BigInt sum = 0;
            for (int k = 0; k <= n - 1; ++k) sum += binomial(n - 1, k) * binomial(n, k);
            if (sum * 2 != binomial(2 * n, n)) ok = false;
        }
        add("binomial_identity", ok, "half central binomial identity failed");
    }

    // Chains.
    {
        bool ok = true;
        std::string detail;
        for (int n = 2; n <= n_max && ok; ++n) {
            auto c = census(n);
            for (int k = 1; k <= n - 1 && ok; ++k) {
                int expect = 2 * n - 2 * k;
                int longest = 0, count_longest = 0;
                for (const auto& chain : c.tiers[static_cast<size_t>(k)].chains) {
                    if (chain.length() > longest) longest = chain.length();
                    if (chain.length() == expect) ++count_longest;
                    for (const Deck& d : chain.decks)
                        if (tier_of(d) != k) {
                            ok = false;
                            detail = "chain crosses tiers at n=" + std::to_string(n);
                        }
                }
                if (longest != expect || count_longest != 1) {
                    ok = false;
                    detail = "longest chain at n=" + std::to_string(n) + " k=" + std::to_string(k);
                }
                if (longest_chain(n, k).length() != expect) {
                    ok = false;
                    detail = "longest_chain construction at n=" + std::to_string(n);
                }
            }
        }
        add("longest_chain_unique", ok, detail);
    }

    // Solver identities.
    {
        bool ok = true;
        std::string detail;
        for (int n = 1; n <= n_max && ok; ++n) {
            auto bal = verify_balance(tables[n]);
            if (!bal.ok()) {
                ok = false;
                detail = "balance violations at n=" + std::to_string(n) + ": " +
                         std::to_string(bal.violations.size());
            }
        }
        add("balance_identity", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        for (int n = 1; n <= std::min(n_max, kMaxFundamentalN) && ok; ++n) {
            auto f = fundamental_solve(n);
            if (f.size() != tables[n].size()) ok = false;
            for (size_t i = 0; ok && i < f.size(); ++i)
                if (!(f.decks[i] == tables[n].decks[i]) || f.lambda[i] != tables[n].lambda[i]) {
                    ok = false;
                    detail = "mismatch at n=" + std::to_string(n) + " deck " + render(f.decks[i]);
                }
            if (ok) {
                // d-deck chain offsets emerge from the flat solve
                for (size_t i = 0; ok && i < f.size(); ++i)
                    if (classify(f.decks[i]) == DeckClass::DDeck &&
                        f.lambda[i] != f.lambda_of(deterministic_successor(f.decks[i])) + 1) {
                        ok = false;
                        detail = "chain offset at " + render(f.decks[i]);
                    }
            }
        }
        add("oracle_equivalence", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        int n = std::min(n_max, 6);
        if (n >= 2) {
            auto a = tier_solve(n, -1, TierSystemMethod::fraction_free);
            auto b = tier_solve(n, -1, TierSystemMethod::lifting);
            for (size_t i = 0; i < a.size(); ++i)
                if (a.lambda[i] != b.lambda[i]) {
                    ok = false;
                    detail = "method disagreement at " + render(a.decks[i]);
                }
        }
        add("tier_system_dual_method", ok, detail);
    }

    // Tier statistics and formulas.
    {
        bool argmin_ok = true, closed_ok = true, mono_ok = true;
        std::string detail1, detail2, detail3;
        for (int n = 2; n <= n_max; ++n) {
            const auto& table = tables[n];
            for (int k = 1; k <= n - 1; ++k) {
                auto s = tier_stats(table, k);
                if (classify(s.argmin_deck) != DeckClass::RDeck) {
                    argmin_ok = false;
                    detail1 = "argmin not an r-deck at n=" + std::to_string(n) +
                              " k=" + std::to_string(k);
                }
            }
            for (int m = 1; m <= n - 1; ++m)
                for (int k = 0; k <= 2 * n - 2 * m - 1; ++k)
                    if (tier1_lambda(n, m, k) != table.lambda_of(tier1_deck(n, {m, k}))) {
                        closed_ok = false;
                        detail2 = "closed form mismatch at n=" + std::to_string(n);
                    }
            auto ext = tier1_extremes(n);
            if (ext.first != tier1_lambda(n, 1, 0) || ext.second != tier1_lambda(n, 1, 2 * n - 3))
                closed_ok = false;
            for (int m = 1; m + 1 <= n - 1; ++m) {
                if (!(tier1_lambda_r(n, m + 1) > tier1_lambda_r(n, m))) mono_ok = false;
                if (!(tier1_lambda(n, m + 1, 2 * n - 2 * m - 3) <
                      tier1_lambda(n, m, 2 * n - 2 * m - 1)))
                    mono_ok = false;
                if (!mono_ok && detail3.empty()) detail3 = "monotonicity at n=" + std::to_string(n);
            }
        }
        add("argmin_is_rdeck", argmin_ok, detail1);
        add("tier1_closed_form", closed_ok, detail2);
        add("tier1_family_monotonicity", mono_ok, detail3);
    }

    // Denominators.  At n = 3 both fractional parts of the tier-1 family
    // cancel the factor 5, so the least common denominator is 7, not
    // 4n^2 - 1 = 35; from n = 4 through 6 the closed form holds.
    {
        bool ok = true;
        std::string detail;
        for (int n = 3; n <= std::min(n_max, 6); ++n) {
            BigInt lcd = tier_stats(tables[n], 1).common_denominator;
            BigInt expect = n == 3 ? BigInt(7) : BigInt(4 * n * n - 1);
            if (lcd != expect) {
                ok = false;
                detail = "tier-1 lcd at n=" + std::to_string(n) + " is " + lcd.str();
            }
        }
        add("tier1_lcd", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        const std::map<int, std::string> expected{
            {3, "7"},
            {4, "176148"},
            {5, "18420324934572"},
            {6, "438067323206466940220363196436798"}};
        for (int n = 3; n <= std::min(n_max, 6); ++n) {
            BigInt lcd = tier_stats(tables[n], 2).common_denominator;
            if (lcd != BigInt(expected.at(n))) {
                ok = false;
                detail = "tier-2 lcd at n=" + std::to_string(n) + " is " + lcd.str();
            }
        }
        add("tier2_lcd", ok, detail);
    }

    // Bounds and recursions on exact values.
    {
        bool sandwich_ok = true, recursion_ok = true, refined_ok = true, identity_ok = true;
        std::string d1, d2, d3, d4;
        for (int n = 2; n <= n_max; ++n) {
            const auto& table = tables[n];
            std::vector<TierStats> stats;
            for (int k = 1; k <= n - 1; ++k) stats.push_back(tier_stats(table, k));
            for (int k = 1; k <= n - 1; ++k) {
                const auto& s = stats[static_cast<size_t>(k - 1)];
                auto b = bounds(n, k);
                if (!(b.lower_m <= s.m_k && s.big_m_k <= b.upper_m_v1 &&
                      s.big_m_k <= b.upper_m_v2 && s.big_m_k_r <= b.upper_mr &&
                      s.m_k <= s.tier_mean && s.tier_mean <= s.big_m_k &&
                      s.big_m_k_r <= s.big_m_k)) {
                    sandwich_ok = false;
                    d1 = "bounds at n=" + std::to_string(n) + " k=" + std::to_string(k);
                }
                if (b.upper_m_v2 != b.upper_mr + (2 * n - 2 * k - 1)) {
                    identity_ok = false;
                    d4 = "v2 identity at n=" + std::to_string(n) + " k=" + std::to_string(k);
                }
                Rational m_prev = k == 1 ? Rational(0) : stats[static_cast<size_t>(k - 2)].m_k;
                Rational big_prev = k == 1 ? Rational(0) : stats[static_cast<size_t>(k - 2)].big_m_k;
                if (!m_recursion_holds(n, k, m_prev, s.m_k) ||
                    !big_m_recursion_holds(n, k, big_prev, s.big_m_k)) {
                    recursion_ok = false;
                    d2 = "recursion at n=" + std::to_string(n) + " k=" + std::to_string(k);
                }
                if (k >= 3 &&
                    !refined_recursion_holds(n, k, s.big_m_k_r,
                                             stats[static_cast<size_t>(k - 2)].big_m_k_r,
                                             stats[static_cast<size_t>(k - 3)].big_m_k_r)) {
                    refined_ok = false;
                    d3 = "refined recursion at n=" + std::to_string(n) + " k=" + std::to_string(k);
                }
            }
            if (n >= 3 && stats.size() >= 2 && stats[1].big_m_k_r > tier2_upper_mr(n)) {
                refined_ok = false;
                d3 = "tier-2 Mr bound at n=" + std::to_string(n);
            }
        }
        add("bounds_sandwich", sandwich_ok, d1);
        add("extrema_recursions", recursion_ok, d2);
        add("refined_recursion", refined_ok, d3);
        add("upper_bound_identity", identity_ok, d4);
    }

    // Descent probability and chain-distance inequality.
    {
        bool ok = true;
        std::string detail;
        for (int n = 2; n <= n_max; ++n) {
            auto r = verify_tier_descent_probability(n);
            if (!r.ok()) {
                ok = false;
                detail = "descent mass at n=" + std::to_string(n);
            }
        }
        add("descent_probability", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        for (int n = 3; n <= n_max; ++n) {
            auto r = check_dd_inequality(n);
            if (!r.ok()) {
                ok = false;
                detail = "d+d' violations at n=" + std::to_string(n) + ": " +
                         std::to_string(r.violations.size());
            }
        }
        add("dd_inequality", ok, detail);
    }

    // Simulation reproducibility: identical config twice, and split+merge.
    {
        SimConfig cfg;
        cfg.n = 4;
        cfg.start = parse_deck("00110101");
        cfg.trials = 400;
        cfg.master_seed = 0x5eedULL;
        auto a = run_trials(cfg);
        auto b = run_trials(cfg);
        auto lo = run_trials_range(cfg, 0, 150);
        auto hi = run_trials_range(cfg, 150, 400);
        lo.merge(hi);
        bool ok = a.sum_moves == b.sum_moves && a.sum_moves_sq == b.sum_moves_sq &&
                  a.min_moves == b.min_moves && a.max_moves == b.max_moves &&
                  a.sum_random == b.sum_random && lo.sum_moves == a.sum_moves &&
                  lo.sum_moves_sq == a.sum_moves_sq && lo.min_moves == a.min_moves &&
                  lo.max_moves == a.max_moves && lo.sum_random == a.sum_random &&
                  lo.trials == a.trials;
        add("simulation_reproducibility", ok, "partition or repeat mismatch");
    }

    return report;
}

inline std::string verify_json(const VerifyReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json j{{"name", c.name}, {"passed", c.passed}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(std::move(j));
    }
    nlohmann::json doc{
        {"n_max", report.n_max}, {"all_passed", report.all_passed()}, {"checks", checks}};
    return doc.dump(2) + "\n";
}

}  // namespace cardshuffle
