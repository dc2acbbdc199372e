#pragma once

// Enumeration of canonical decks and tier-level counting.
//
// Canonical decks are in bijection with n-subsets of the 2n-1 positions below
// the fixed leading 0, so they are generated by unranking combinations rather
// than by filtering all 2^{2n} bit strings.  The canonical total order is
// ascending tier, then lexicographic on the string; the absorbing deck (the
// only tier-0 deck) therefore comes first, and the transition matrix in this
// order is block lower triangular by tier.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cardshuffle/deck.hpp"
#include "cardshuffle/error.hpp"
#include "cardshuffle/rational.hpp"

namespace cardshuffle {

constexpr int kMaxEnumerationN = 14;

inline BigInt binomial(int a, int b) {
    if (b < 0 || b > a) return 0;
    BigInt r = 1;
    b = std::min(b, a - b);
    for (int i = 1; i <= b; ++i) {
        r *= a - b + i;
        r /= i;
    }
    return r;
}

// Number of canonical decks, C(2n,n)/2 = C(2n-1, n).
inline BigInt deck_count(int n) { return binomial(2 * n - 1, n); }

// Pascal triangle through row 2*kMaxEnumerationN, all entries within uint64.
inline const std::vector<std::vector<std::uint64_t>>& pascal_table() {
    static const auto table = [] {
        std::vector<std::vector<std::uint64_t>> t(2 * kMaxEnumerationN + 1);
        for (size_t a = 0; a < t.size(); ++a) {
            t[a].assign(a + 1, 1);
            for (size_t b = 1; b < a; ++b) t[a][b] = t[a - 1][b - 1] + t[a - 1][b];
        }
        return t;
    }();
    return table;
}

inline std::uint64_t binomial_u64(int a, int b) {
    if (b < 0 || b > a) return 0;
    return pascal_table()[static_cast<size_t>(a)][static_cast<size_t>(b)];
}

// The deck of given rank among canonical decks of half-size n, ranked
// lexicographically by string.  Rank r picks the r-th n-subset of positions
// 2..2n for the 1 cards.
inline Deck unrank_deck(int n, std::uint64_t rank) {
    CardWord w = 0;
    int remaining = n;
    std::uint64_t r = rank;
    for (int pos = 2; pos <= 2 * n && remaining > 0; ++pos) {
        // Decks with a 0 at this position: choose all 1s from what follows.
        std::uint64_t zero_here = binomial_u64(2 * n - pos, remaining);
        if (r < zero_here) continue;
        r -= zero_here;
        w |= CardWord(1) << (pos - 1);
        --remaining;
    }
    return Deck{static_cast<std::uint32_t>(n), w};
}

// All canonical decks in the canonical total order.
inline std::vector<Deck> enumerate_decks(int n) {
    if (n < 1) raise(Errc::out_of_range, "enumerate_decks: n must be positive");
    if (n > kMaxEnumerationN)
        raise(Errc::too_large, "enumerate_decks: n > " + std::to_string(kMaxEnumerationN));
    std::uint64_t count = deck_count(n).convert_to<std::uint64_t>();
    std::vector<Deck> decks;
    decks.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r) decks.push_back(unrank_deck(n, r));
    std::stable_sort(decks.begin(), decks.end(), canonical_less);
    return decks;
}

// Closed-form tier counts.  Tier 0's single deck is the absorbing deck, which
// the shape-based counts file under d-decks (first and last cards differ).
inline BigInt tier_size_formula(int n, int k) {
    if (k < 0 || k > n - 1) raise(Errc::out_of_range, "tier_size_formula: k outside [0, n-1]");
    return binomial(n - 1, k) * binomial(n, k);
}

inline BigInt r_count_formula(int n, int k) {
    if (k < 0 || k > n - 1) raise(Errc::out_of_range, "r_count_formula: k outside [0, n-1]");
    return binomial(n - 1, k) * binomial(n - 1, k - 1);
}

inline BigInt d_count_formula(int n, int k) {
    if (k < 0 || k > n - 1) raise(Errc::out_of_range, "d_count_formula: k outside [0, n-1]");
    return binomial(n - 1, k) * binomial(n - 1, k);
}

struct TierRecord {
    int k = 0;
    std::uint64_t total = 0;
    std::uint64_t r_count = 0;  // decks ending in 0
    std::uint64_t d_count = 0;  // decks ending in 1 (tier 0: the absorbing deck)
    std::vector<ChainInfo> chains;

    int longest_chain_len() const {
        int len = 0;
        for (const auto& c : chains) len = std::max(len, c.length());
        return len;
    }
};

struct TierCensus {
    int n = 0;
    std::vector<TierRecord> tiers;  // index k = 0 .. n-1
};

// Counts and chain structure per tier, computed by enumeration.
inline TierCensus census(int n) {
    auto decks = enumerate_decks(n);
    TierCensus out;
    out.n = n;
    out.tiers.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) out.tiers[static_cast<size_t>(k)].k = k;
    for (const Deck& d : decks) {
        auto& rec = out.tiers[static_cast<size_t>(tier_of(d))];
        rec.total += 1;
        if (d.card(d.cards()) == 0)
            rec.r_count += 1;
        else
            rec.d_count += 1;
        // Chains are listed once each, keyed by their ending r-deck.
        if (classify(d) == DeckClass::RDeck) rec.chains.push_back(chain_of(d).first);
    }
    return out;
}

// The unique longest chain in tier k, of length 2n-2k.  Its first deck is an
// alternating prefix of length 2n-2k-1 followed by 0^k 1^{k+1}.
inline ChainInfo longest_chain(int n, int k) {
    if (k < 1 || k > n - 1) raise(Errc::out_of_range, "longest_chain: k outside [1, n-1]");
    std::string s;
    for (int i = 0; i < 2 * n - 2 * k - 1; ++i) s += (i % 2 == 0) ? '0' : '1';
    s.append(static_cast<size_t>(k), '0');
    s.append(static_cast<size_t>(k + 1), '1');
    auto chain = chain_of(parse_deck(s)).first;
    return chain;
}

// State indexing in the canonical order, shared by the solver and reports.
struct StateSpace {
    int n = 0;
    std::vector<Deck> decks;

    static StateSpace build(int n) { return StateSpace{n, enumerate_decks(n)}; }

    std::size_t size() const { return decks.size(); }

    std::size_t index_of(const Deck& d) const {
        auto it = std::lower_bound(decks.begin(), decks.end(), d, canonical_less);
        if (it == decks.end() || !(*it == d))
            raise(Errc::out_of_range, "index_of: unknown deck " + render(d));
        return static_cast<std::size_t>(it - decks.begin());
    }
};

}  // namespace cardshuffle
