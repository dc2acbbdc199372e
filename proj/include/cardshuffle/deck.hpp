#pragma once

// Canonical deck representation and the shuffle move.
//
// A deck of 2n cards (n of color 0, n of color 1) is packed into a 128-bit
// word: card i, counting from 1 at the top of the deck, lives in bit i-1, so
// the top card is bit 0.  Decks are kept canonical at all times: the top card
// is color 0, colors being swapped on entry when necessary.  All operations
// return canonical decks; non-canonical words never escape.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cardshuffle/error.hpp"
#include "cardshuffle/rational.hpp"

namespace cardshuffle {

using CardWord = unsigned __int128;

constexpr int kMaxCards = 128;  // 2n <= 128

struct Deck {
    std::uint32_t half = 0;  // n
    CardWord bits = 0;

    int cards() const { return static_cast<int>(2 * half); }
    // Card at 1-based position i (1 = top of deck).
    int card(int i) const { return static_cast<int>((bits >> (i - 1)) & 1); }

    friend bool operator==(const Deck& a, const Deck& b) {
        return a.half == b.half && a.bits == b.bits;
    }
    friend bool operator!=(const Deck& a, const Deck& b) { return !(a == b); }
};

enum class DeckClass { Absorbing, RDeck, DDeck };

inline CardWord card_mask(int cards) {
    if (cards >= kMaxCards) return ~CardWord(0);
    return (CardWord(1) << cards) - 1;
}

inline int popcount_word(CardWord w) {
    return __builtin_popcountll(static_cast<std::uint64_t>(w)) +
           __builtin_popcountll(static_cast<std::uint64_t>(w >> 64));
}

// The absorbing pattern 0101...01: odd positions (2,4,...) hold color 1.
inline CardWord alternating_word(int n) {
    CardWord a = (CardWord(0xAAAAAAAAAAAAAAAAULL) << 64) | 0xAAAAAAAAAAAAAAAAULL;
    return a & card_mask(2 * n);
}

inline Deck absorbing_deck(int n) {
    return Deck{static_cast<std::uint32_t>(n), alternating_word(n)};
}

// Swap colors if the top card is 1 (the fold identifying a deck with its
// color-complement).
inline CardWord canonicalize_word(CardWord w, int cards) {
    if (w & 1) return w ^ card_mask(cards);
    return w;
}

inline bool is_absorbing(const Deck& d) { return d.bits == alternating_word(d.half); }

inline DeckClass classify(const Deck& d) {
    if (is_absorbing(d)) return DeckClass::Absorbing;
    int last = d.card(d.cards());
    return last == 0 ? DeckClass::RDeck : DeckClass::DDeck;
}

// Number of adjacent 11 pairs; equals n minus the number of blocks of 1s.
inline int tier_of(const Deck& d) {
    return popcount_word(d.bits & (d.bits >> 1) & card_mask(d.cards() - 1));
}

inline std::string render(const Deck& d) {
    std::string s(static_cast<size_t>(d.cards()), '0');
    for (int i = 1; i <= d.cards(); ++i)
        if (d.card(i)) s[static_cast<size_t>(i - 1)] = '1';
    return s;
}

inline Deck parse_deck(const std::string& text) {
    if (text.size() % 2 != 0) raise(Errc::odd_length, "deck length must be even: '" + text + "'");
    if (text.empty() || text.size() > kMaxCards)
        raise(Errc::out_of_range, "deck must have between 2 and 128 cards");
    CardWord w = 0;
    int ones = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') {
            w |= CardWord(1) << i;
            ++ones;
        } else if (text[i] != '0') {
            raise(Errc::invalid_character, "deck may contain only 0 and 1: '" + text + "'");
        }
    }
    int cards = static_cast<int>(text.size());
    if (2 * ones != cards)
        raise(Errc::unbalanced, "deck must hold equal numbers of each color: '" + text + "'");
    return Deck{static_cast<std::uint32_t>(cards / 2), canonicalize_word(w, cards)};
}

// String-lexicographic comparison (top card most significant).
inline bool lex_less(const Deck& a, const Deck& b) {
    CardWord diff = a.bits ^ b.bits;
    if (diff == 0) return false;
    CardWord low = diff & (~diff + 1);  // lowest differing card
    return (a.bits & low) == 0;
}

// Canonical total order: ascending tier, then lexicographic on the string.
inline bool canonical_less(const Deck& a, const Deck& b) {
    int ta = tier_of(a), tb = tier_of(b);
    if (ta != tb) return ta < tb;
    return lex_less(a, b);
}

inline bool operator<(const Deck& a, const Deck& b) { return canonical_less(a, b); }

// Result of moving a d-deck: the top card goes to the bottom.
inline Deck deterministic_successor(const Deck& d) {
    if (classify(d) != DeckClass::DDeck)
        raise(Errc::not_a_d_deck, "deterministic_successor: " + render(d) + " is not a d-deck");
    CardWord w = d.bits >> 1;  // top card (0) reappears as the new bottom 0 bit
    return Deck{d.half, canonicalize_word(w, d.cards())};
}

// Insert the top card at 1-based position p (p = 1 puts it back on top).
inline Deck insertion_result(const Deck& d, int p) {
    CardWord rest = d.bits >> 1;
    CardWord lowpart = rest & ((CardWord(1) << (p - 1)) - 1);
    CardWord highpart = (rest >> (p - 1)) << p;
    CardWord w = lowpart | highpart;  // the inserted card is color 0
    return Deck{d.half, canonicalize_word(w, d.cards())};
}

// One move as a distribution over canonical successor decks.  Coinciding
// insertions are aggregated, so probabilities are multiples of 1/2n.
inline std::map<Deck, Rational> step_distribution(const Deck& d) {
    std::map<Deck, Rational> out;
    switch (classify(d)) {
        case DeckClass::Absorbing:
            out[d] = 1;
            break;
        case DeckClass::DDeck:
            out[deterministic_successor(d)] = 1;
            break;
        case DeckClass::RDeck: {
            int m = d.cards();
            std::map<Deck, int> counts;
            for (int p = 1; p <= m; ++p) counts[insertion_result(d, p)] += 1;
            for (const auto& [succ, c] : counts) out[succ] = ratio(c, m);
            break;
        }
    }
    return out;
}

// The unique candidate deterministic predecessor of a deck, if any.  Decks
// ending in 0 can only be reached without a color swap, decks ending in 1
// only with one; either way the pre-image is forced.
inline std::optional<Deck> chain_predecessor(const Deck& s) {
    int cards = s.cards();
    CardWord w = s.card(cards) == 0 ? s.bits : s.bits ^ card_mask(cards);
    Deck p{s.half, (w << 1) & card_mask(cards)};
    if (classify(p) != DeckClass::DDeck) return std::nullopt;
    return p;
}

struct ChainInfo {
    std::vector<Deck> decks;  // D_1 ... D_t; all but the last are d-decks

    int length() const { return static_cast<int>(decks.size()); }
    const Deck& end() const { return decks.back(); }
};

// The maximal chain through d, plus the number of deterministic steps from d
// to the r-deck ending the chain.
inline std::pair<ChainInfo, int> chain_of(const Deck& d) {
    if (is_absorbing(d))
        raise(Errc::absorbing_input, "chain_of: the absorbing deck belongs to no chain");
    int distance = 0;
    Deck tail = d;
    while (classify(tail) == DeckClass::DDeck) {
        tail = deterministic_successor(tail);
        ++distance;
    }
    Deck head = d;
    std::vector<Deck> front;
    for (auto p = chain_predecessor(head); p; p = chain_predecessor(head)) {
        head = *p;
        front.push_back(head);
    }
    ChainInfo chain;
    for (auto it = front.rbegin(); it != front.rend(); ++it) chain.decks.push_back(*it);
    Deck cur = d;
    chain.decks.push_back(cur);
    while (classify(cur) == DeckClass::DDeck) {
        cur = deterministic_successor(cur);
        chain.decks.push_back(cur);
    }
    return {chain, distance};
}

// Names [m, k] for tier-1 decks: [m, 0] is the r-deck with its 11 pair at
// positions 2m, 2m+1; [m, k] is k deterministic steps before [m, 0].
struct Tier1Name {
    int m = 0;
    int k = 0;

    friend bool operator==(const Tier1Name& a, const Tier1Name& b) {
        return a.m == b.m && a.k == b.k;
    }
};

inline Deck tier1_deck(int n, const Tier1Name& name) {
    int m = name.m, k = name.k;
    if (n < 2 || m < 1 || m > n - 1 || k < 0 || k > 2 * n - 2 * m - 1)
        raise(Errc::out_of_range, "tier1_deck: invalid name [" + std::to_string(m) + ", " +
                                      std::to_string(k) + "] for n=" + std::to_string(n));
    std::string s;
    auto rep = [&s](const char* unit, int times) {
        for (int i = 0; i < times; ++i) s += unit;
    };
    if (k == 0) {
        rep("01", m);
        rep("10", n - m);
    } else if (k % 2 == 1) {
        rep("01", (k - 1) / 2);
        s += "00";
        rep("10", m - 1);
        s += "11";
        rep("01", n - m - (k + 1) / 2);
    } else {
        rep("01", k / 2 - 1);
        s += "011";
        rep("01", m - 1);
        s += "001";
        rep("01", n - m - k / 2 - 1);
    }
    return parse_deck(s);
}

inline Tier1Name tier1_name(const Deck& d) {
    if (tier_of(d) != 1) raise(Errc::not_tier1, "tier1_name: " + render(d) + " is not in tier 1");
    auto [chain, distance] = chain_of(d);
    const Deck& r = chain.end();
    CardWord pairs = r.bits & (r.bits >> 1);
    auto lo = static_cast<std::uint64_t>(pairs);
    int first = lo ? __builtin_ctzll(lo)
                   : 64 + __builtin_ctzll(static_cast<std::uint64_t>(pairs >> 64));
    // Cards first+1 and first+2 are the unique 11 pair of the chain's r-deck,
    // sitting at positions 2m and 2m+1.
    return Tier1Name{(first + 1) / 2, distance};
}

}  // namespace cardshuffle
