#pragma once

// Exact expected absorption times.
//
// Two independent routes produce the same table:
//   * fundamental_solve: the textbook route.  Treats the chain as one flat
//     linear system (I - Q) lambda = 1 over all transient states and hands it
//     to a structure-agnostic exact sparse elimination.
//   * tier_solve: the structured route.  Solves tiers in ascending order; in
//     tier k the unknowns are only the r-decks, since every d-deck's value is
//     its chain end's value plus the deterministic distance.  Each tier gives
//     one small integer system with entries in [-2n, 2n], solved fraction-free
//     when small and by p-adic lifting when large.
//
// All arithmetic is exact rational; decimals never enter a solve path.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cardshuffle/deck.hpp"
#include "cardshuffle/enumeration.hpp"
#include "cardshuffle/error.hpp"
#include "cardshuffle/linalg.hpp"
#include "cardshuffle/rational.hpp"

namespace cardshuffle {

constexpr int kMaxSolveN = 12;        // accepted by tier_solve; see docs for practical sizes
constexpr int kMaxFundamentalN = 7;   // naive route
constexpr int kMaxDenseMatrixN = 5;   // dense fundamental matrix
constexpr size_t kBareissCeiling = 128;  // larger tier systems go to the lifting solver

struct SparseTransition {
    StateSpace states;
    // rows[i]: (state index, probability), probabilities summing to exactly 1
    std::vector<std::vector<std::pair<size_t, Rational>>> rows;
};

inline SparseTransition transition_matrix(int n) {
    if (n > kMaxSolveN) raise(Errc::too_large, "transition_matrix: n > 12");
    SparseTransition t{StateSpace::build(n), {}};
    t.rows.reserve(t.states.size());
    for (const Deck& d : t.states.decks) {
        std::vector<std::pair<size_t, Rational>> row;
        for (const auto& [succ, p] : step_distribution(d))
            row.emplace_back(t.states.index_of(succ), p);
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        t.rows.push_back(std::move(row));
    }
    return t;
}

// Expected moves to absorption, exact, for every deck of tier <= max_tier.
// Decks appear in canonical order, which lists whole tiers contiguously.
struct AbsorptionTable {
    int n = 0;
    int max_tier = 0;
    std::vector<Deck> decks;
    std::vector<Rational> lambda;

    size_t size() const { return decks.size(); }

    size_t index_of(const Deck& d) const {
        auto it = std::lower_bound(decks.begin(), decks.end(), d, canonical_less);
        if (it == decks.end() || !(*it == d))
            raise(Errc::out_of_range, "AbsorptionTable: no value for deck " + render(d));
        return static_cast<size_t>(it - decks.begin());
    }

    const Rational& lambda_of(const Deck& d) const { return lambda[index_of(d)]; }
    const Rational& lambda_of(const std::string& deck_text) const {
        return lambda_of(parse_deck(deck_text));
    }

    // Contiguous [first, last) index range of tier k.
    std::pair<size_t, size_t> tier_range(int k) const {
        auto lo = std::lower_bound(decks.begin(), decks.end(), k,
                                   [](const Deck& d, int kk) { return tier_of(d) < kk; });
        auto hi = std::upper_bound(decks.begin(), decks.end(), k,
                                   [](int kk, const Deck& d) { return kk < tier_of(d); });
        return {static_cast<size_t>(lo - decks.begin()), static_cast<size_t>(hi - decks.begin())};
    }
};

// The fundamental matrix N = (I-Q)^{-1} over transient states in canonical
// order, computed by dense rational inversion.  Reference sizes only.
struct FundamentalMatrix {
    std::vector<Deck> transient;  // canonical order, absorbing state excluded
    linalg::RatMatrix n_matrix;
};

inline FundamentalMatrix fundamental_matrix(int n) {
    if (n > kMaxDenseMatrixN) raise(Errc::too_large, "fundamental_matrix: n > 5");
    auto t = transition_matrix(n);
    const size_t total = t.states.size();
    FundamentalMatrix out;
    out.transient.assign(t.states.decks.begin() + 1, t.states.decks.end());
    linalg::RatMatrix i_minus_q(total - 1, std::vector<Rational>(total - 1, 0));
    for (size_t i = 1; i < total; ++i) {
        i_minus_q[i - 1][i - 1] = 1;
        for (const auto& [j, p] : t.rows[i])
            if (j != 0) i_minus_q[i - 1][j - 1] -= p;
    }
    out.n_matrix = linalg::rat_inverse(std::move(i_minus_q));
    return out;
}

// Naive oracle: lambda = (I-Q)^{-1} 1 via exact elimination on the full
// transition system, no tier or chain knowledge.
inline AbsorptionTable fundamental_solve(int n) {
    if (n > kMaxFundamentalN) raise(Errc::too_large, "fundamental_solve: n > 7");
    auto t = transition_matrix(n);
    const size_t total = t.states.size();
    AbsorptionTable table;
    table.n = n;
    table.max_tier = n - 1;
    table.decks = t.states.decks;
    table.lambda.assign(total, Rational(0));
    if (total == 1) return table;

    linalg::SparseRatSystem sys;
    sys.rows.resize(total - 1);
    sys.rhs.assign(total - 1, Rational(1));
    for (size_t i = 1; i < total; ++i) {
        auto& row = sys.rows[i - 1];
        row[static_cast<int>(i - 1)] = 1;
        for (const auto& [j, p] : t.rows[i]) {
            if (j == 0) continue;
            row[static_cast<int>(j - 1)] -= p;
            if (row[static_cast<int>(j - 1)] == 0) row.erase(static_cast<int>(j - 1));
        }
    }
    auto x = linalg::sparse_solve(std::move(sys));
    for (size_t i = 1; i < total; ++i) table.lambda[i] = x[i - 1];
    return table;
}

enum class TierSystemMethod { automatic, fraction_free, lifting };

// Structured route.  max_tier < 0 means all tiers.  Practical full-table
// sizes are bounded by the largest per-tier r-deck system; see README.
inline AbsorptionTable tier_solve(int n, int max_tier = -1,
                                  TierSystemMethod method = TierSystemMethod::automatic) {
    if (n > kMaxSolveN) raise(Errc::too_large, "tier_solve: n > 12");
    if (max_tier < 0 || max_tier > n - 1) max_tier = n - 1;
    auto decks = enumerate_decks(n);

    AbsorptionTable table;
    table.n = n;
    table.max_tier = max_tier;

    const int cards = 2 * n;
    std::map<CardWord, Rational> known;  // lambda per solved deck word
    size_t pos = 0;

    for (int k = 0; k <= max_tier; ++k) {
        size_t lo = pos;
        while (pos < decks.size() && tier_of(decks[pos]) == k) ++pos;
        size_t hi = pos;

        if (k == 0) {
            table.decks.push_back(decks[0]);
            table.lambda.emplace_back(0);
            known[decks[0].bits] = Rational(0);
            continue;
        }

        // Chain end and distance for every deck of the tier (d-moves stay in
        // tier, so the whole chain lives in [lo, hi)).
        std::map<CardWord, std::pair<CardWord, int>> chain_pos;
        for (size_t i = lo; i < hi; ++i) {
            std::vector<CardWord> trail;
            Deck cur = decks[i];
            while (chain_pos.find(cur.bits) == chain_pos.end() &&
                   classify(cur) == DeckClass::DDeck) {
                trail.push_back(cur.bits);
                cur = deterministic_successor(cur);
            }
            std::pair<CardWord, int> at;
            if (auto it = chain_pos.find(cur.bits); it != chain_pos.end())
                at = it->second;
            else
                at = {cur.bits, 0};  // r-deck ends its own chain
            chain_pos.emplace(at.first, std::make_pair(at.first, 0));
            for (auto w = trail.rbegin(); w != trail.rend(); ++w) {
                at = {at.first, at.second + 1};
                chain_pos.emplace(*w, at);
            }
        }

        // Local variable numbering over the tier's r-decks, canonical order.
        std::map<CardWord, size_t> var_of;
        std::vector<size_t> r_index;  // deck index per variable
        for (size_t i = lo; i < hi; ++i)
            if (classify(decks[i]) == DeckClass::RDeck) {
                var_of[decks[i].bits] = var_of.size();
                r_index.push_back(i);
            }

        const size_t vars = var_of.size();
        linalg::IntSystem sys;
        sys.n = vars;
        sys.rows.resize(vars);
        std::vector<Rational> rhs(vars);

        for (size_t v = 0; v < vars; ++v) {
            const Deck& r = decks[r_index[v]];
            std::map<int, long long> coeff;
            coeff[static_cast<int>(v)] = cards;
            long long const_part = cards;
            Rational lower_part(0);
            for (int p = 1; p <= cards; ++p) {
                Deck succ = insertion_result(r, p);
                if (tier_of(succ) == k) {
                    auto [end_word, dist] = chain_pos.at(succ.bits);
                    coeff[static_cast<int>(var_of.at(end_word))] -= 1;
                    const_part += dist;
                } else {
                    lower_part += known.at(succ.bits);
                }
            }
            for (const auto& [c, a] : coeff)
                if (a != 0) sys.add(v, c, a);
            rhs[v] = Rational(const_part) + lower_part;
        }

        bool use_bareiss = method == TierSystemMethod::fraction_free ||
                           (method == TierSystemMethod::automatic && vars <= kBareissCeiling);
        auto x = use_bareiss ? linalg::bareiss_solve(sys, rhs) : linalg::dixon_solve(sys, rhs);

        for (size_t v = 0; v < vars; ++v) known[decks[r_index[v]].bits] = x[v];
        for (size_t i = lo; i < hi; ++i) {
            const Deck& d = decks[i];
            if (classify(d) == DeckClass::RDeck) continue;
            auto [end_word, dist] = chain_pos.at(d.bits);
            known[d.bits] = known.at(end_word) + dist;
        }
        for (size_t i = lo; i < hi; ++i) {
            table.decks.push_back(decks[i]);
            table.lambda.push_back(known.at(decks[i].bits));
        }
    }
    return table;
}

// Per-tier extrema and summary of an absorption table.
struct TierStats {
    int n = 0;
    int k = 0;
    Rational m_k;         // minimum lambda in the tier (achieved by an r-deck)
    Rational big_m_k;     // maximum lambda in the tier
    Rational big_m_k_r;   // maximum lambda over the tier's r-decks
    Deck argmin_deck;     // lexicographically first r-deck achieving m_k
    Deck argmax_deck;     // lexicographically first deck achieving M_k
    Deck argmax_r_deck;   // lexicographically first r-deck achieving M_k^r
    Rational tier_mean;
    BigInt common_denominator;  // lcm of lambda denominators across the tier
};

inline TierStats tier_stats(const AbsorptionTable& table, int k) {
    if (k < 1 || k > table.n - 1 || k > table.max_tier)
        raise(Errc::empty_tier, "tier_stats: tier " + std::to_string(k) + " not available");
    auto [lo, hi] = table.tier_range(k);
    if (lo == hi) raise(Errc::empty_tier, "tier_stats: tier is empty");

    TierStats s;
    s.n = table.n;
    s.k = k;
    bool have_min = false, have_max = false, have_max_r = false;
    Rational sum(0);
    BigInt lcd = 1;
    for (size_t i = lo; i < hi; ++i) {
        const Deck& d = table.decks[i];
        const Rational& v = table.lambda[i];
        sum += v;
        lcd = lcm(lcd, den(v));
        bool r = classify(d) == DeckClass::RDeck;
        if (r && (!have_min || v < s.m_k)) {
            s.m_k = v;
            s.argmin_deck = d;
            have_min = true;
        }
        if (!have_max || v > s.big_m_k) {
            s.big_m_k = v;
            s.argmax_deck = d;
            have_max = true;
        }
        if (r && (!have_max_r || v > s.big_m_k_r)) {
            s.big_m_k_r = v;
            s.argmax_r_deck = d;
            have_max_r = true;
        }
    }
    s.tier_mean = sum / Rational(BigInt(hi - lo));
    s.common_denominator = lcd;
    return s;
}

// Exact one-step balance check: lambda_D = 1 + sum P(D->D') lambda_D' for
// every non-absorbing deck of the table (and lambda = 0 for the absorbing
// deck).  Lists every deck whose equation fails.
struct BalanceReport {
    std::vector<Deck> violations;
    size_t checked = 0;

    bool ok() const { return violations.empty(); }
};

inline BalanceReport verify_balance(const AbsorptionTable& table) {
    BalanceReport report;
    for (size_t i = 0; i < table.size(); ++i) {
        const Deck& d = table.decks[i];
        ++report.checked;
        if (is_absorbing(d)) {
            if (table.lambda[i] != 0) report.violations.push_back(d);
            continue;
        }
        Rational expected(1);
        for (const auto& [succ, p] : step_distribution(d)) expected += p * table.lambda_of(succ);
        if (table.lambda[i] != expected) report.violations.push_back(d);
    }
    return report;
}

}  // namespace cardshuffle
