#pragma once

// Seeded stochastic simulation of the shuffle.
//
// Reproducibility contract: trial i of a run with master seed S draws from a
// xoshiro256** generator whose state is the first four outputs of SplitMix64
// seeded with  S ^ (0xD1B54A32D192ED03 * (i + 1)).  Streams therefore depend
// only on (S, i), never on how trials are partitioned across workers, and
// results are integer sums, so any partition merges to bit-identical output.
// Sweep row j runs with the derived master seed
// splitmix_mix(S ^ (0x8CB92BA72F3D8DD7 * (j + 1))).
//
// The insertion position in [1, 2n] is drawn by the multiply-shift bounded
// map (no rejection); the bias of 2n/2^64 is far below statistical
// resolution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#ifndef NDEBUG
#include <cassert>
#endif

#include "cardshuffle/deck.hpp"
#include "cardshuffle/error.hpp"
#include "cardshuffle/rational.hpp"

namespace cardshuffle {

struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

inline std::uint64_t splitmix_mix(std::uint64_t seed) { return SplitMix64{seed}.next(); }

struct Xoshiro256StarStar {
    std::uint64_t s[4] = {1, 0, 0, 0};

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t next() {
        std::uint64_t result = rotl(s[1] * 5, 7) * 9;
        std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // Position in [1, bound] by the multiply-shift bounded map.
    int draw_position(int bound) {
        return 1 + static_cast<int>((unsigned __int128)(next()) * static_cast<std::uint64_t>(bound) >> 64);
    }
};

inline Xoshiro256StarStar trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
    SplitMix64 sm{master_seed ^ (0xD1B54A32D192ED03ULL * (trial_index + 1))};
    Xoshiro256StarStar x;
    bool all_zero = true;
    for (auto& w : x.s) {
        w = sm.next();
        if (w != 0) all_zero = false;
    }
    if (all_zero) x.s[0] = 1;
    return x;
}

inline std::uint64_t sweep_row_seed(std::uint64_t master_seed, std::uint64_t row) {
    return splitmix_mix(master_seed ^ (0x8CB92BA72F3D8DD7ULL * (row + 1)));
}

struct SimConfig {
    int n = 0;
    Deck start;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    std::optional<std::uint64_t> max_steps;  // unset: the chain absorbs on its own
};

struct TrialOutcome {
    std::uint64_t total_moves = 0;
    std::uint64_t random_moves = 0;
};

// Runs the process to absorption, counting moves and the random subset.
inline TrialOutcome run_trial(const Deck& start, Xoshiro256StarStar& rng,
                              std::optional<std::uint64_t> max_steps = std::nullopt) {
    const int cards = start.cards();
    const CardWord absorbing = alternating_word(static_cast<int>(start.half));
    TrialOutcome out;
    Deck cur = start;
    while (cur.bits != absorbing) {
        if (max_steps && out.total_moves >= *max_steps)
            raise(Errc::step_cap_exceeded, "run_trial: step cap exceeded at " + render(cur));
#ifndef NDEBUG
        int tier_before = tier_of(cur);
#endif
        if (cur.card(cards) == 1) {
            cur.bits = canonicalize_word(cur.bits >> 1, cards);
        } else {
            cur = insertion_result(cur, rng.draw_position(cards));
            ++out.random_moves;
        }
        ++out.total_moves;
#ifndef NDEBUG
        assert(tier_of(cur) <= tier_before && "tier may never increase");
        assert((cur.bits & 1) == 0 && "decks stay canonical");
#endif
    }
    return out;
}

// Aggregate of independent trials.  Accumulators are exact integer sums, so
// merging partial results is associative, commutative, and bit-stable.
struct SimResult {
    SimConfig config;
    std::uint64_t trials = 0;
    std::uint64_t sum_moves = 0;
    unsigned __int128 sum_moves_sq = 0;
    std::uint64_t sum_random = 0;
    unsigned __int128 sum_random_sq = 0;
    std::uint64_t min_moves = UINT64_MAX;
    std::uint64_t max_moves = 0;

    void record(const TrialOutcome& t) {
        trials += 1;
        sum_moves += t.total_moves;
        sum_moves_sq += (unsigned __int128)t.total_moves * t.total_moves;
        sum_random += t.random_moves;
        sum_random_sq += (unsigned __int128)t.random_moves * t.random_moves;
        min_moves = std::min(min_moves, t.total_moves);
        max_moves = std::max(max_moves, t.total_moves);
    }

    void merge(const SimResult& other) {
        trials += other.trials;
        sum_moves += other.sum_moves;
        sum_moves_sq += other.sum_moves_sq;
        sum_random += other.sum_random;
        sum_random_sq += other.sum_random_sq;
        min_moves = std::min(min_moves, other.min_moves);
        max_moves = std::max(max_moves, other.max_moves);
    }

    Rational mean_moves() const { return ratio(BigInt(sum_moves), BigInt(trials)); }
    Rational mean_random_moves() const { return ratio(BigInt(sum_random), BigInt(trials)); }

    static BigInt from_u128(unsigned __int128 v) {
        BigInt hi(static_cast<std::uint64_t>(v >> 64));
        return (hi << 64) + BigInt(static_cast<std::uint64_t>(v));
    }

    // Unbiased sample variance (T Sx2 - Sx^2) / (T (T-1)); zero when T = 1.
    Rational variance_moves() const {
        if (trials < 2) return Rational(0);
        BigInt t(trials), sx(sum_moves);
        return ratio(t * from_u128(sum_moves_sq) - sx * sx, t * (t - 1));
    }
    Rational variance_random() const {
        if (trials < 2) return Rational(0);
        BigInt t(trials), sx(sum_random);
        return ratio(t * from_u128(sum_random_sq) - sx * sx, t * (t - 1));
    }

    double stddev_moves() const { return std::sqrt(rational_to_double(variance_moves())); }
};

// Exact test of |sum/T - target| <= k * sqrt(variance / T), squared to stay
// rational.
inline bool within_standard_errors(const Rational& sample_mean, const Rational& variance,
                                   std::uint64_t trials, const Rational& target, int k) {
    Rational diff = sample_mean - target;
    return diff * diff * BigInt(trials) <= BigInt(k) * BigInt(k) * variance;
}

// Trials [first, last) of the configured run; partial results merge to the
// same totals for any partition since stream i depends only on the seed.
inline SimResult run_trials_range(const SimConfig& cfg, std::uint64_t first, std::uint64_t last) {
    if (static_cast<int>(cfg.start.half) != cfg.n)
        raise(Errc::out_of_range, "run_trials: start deck does not match n");
    SimResult result;
    result.config = cfg;
    for (std::uint64_t i = first; i < last; ++i) {
        auto rng = trial_rng(cfg.master_seed, i);
        result.record(run_trial(cfg.start, rng, cfg.max_steps));
    }
    return result;
}

inline SimResult run_trials(const SimConfig& cfg) {
    if (cfg.trials < 1) raise(Errc::out_of_range, "run_trials: need at least one trial");
    return run_trials_range(cfg, 0, cfg.trials);
}

struct SweepRow {
    std::string label;  // 0^a 1^b 0^c form
    Deck deck;
    SimResult result;
};

// One run per deck 0^{n-j} 1^n 0^j, j = 0..n-1: the n decks of the highest
// tier n-1.
inline std::vector<SweepRow> highest_tier_sweep(int n, std::uint64_t trials,
                                                std::uint64_t master_seed) {
    if (n < 2) raise(Errc::out_of_range, "highest_tier_sweep: need n >= 2");
    std::vector<SweepRow> rows;
    for (int j = 0; j < n; ++j) {
        std::string s;
        s.append(static_cast<size_t>(n - j), '0');
        s.append(static_cast<size_t>(n), '1');
        s.append(static_cast<size_t>(j), '0');
        SweepRow row;
        row.deck = parse_deck(s);
        row.label = "0^" + std::to_string(n - j) + " 1^" + std::to_string(n);
        if (j > 0) row.label += " 0^" + std::to_string(j);
        SimConfig cfg;
        cfg.n = n;
        cfg.start = row.deck;
        cfg.trials = trials;
        cfg.master_seed = sweep_row_seed(master_seed, static_cast<std::uint64_t>(j));
        row.result = run_trials(cfg);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace cardshuffle
