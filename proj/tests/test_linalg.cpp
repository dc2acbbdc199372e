#include "catch_amalgamated.hpp"

#include <vector>

#include "cardshuffle/linalg.hpp"
#include "cardshuffle/montecarlo.hpp"

using namespace cardshuffle;
using namespace cardshuffle::linalg;

namespace {

// Random nonsingular-ish integer system with a known rational solution.
struct RandomSystem {
    IntSystem sys;
    std::vector<Rational> b;
    std::vector<Rational> x;
};

RandomSystem make_system(SplitMix64& rng, size_t n) {
    RandomSystem rs;
    rs.sys.n = n;
    rs.sys.rows.resize(n);
    std::vector<std::vector<long long>> dense(n, std::vector<long long>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (rng.next() % 3 == 0) continue;  // keep it sparse-ish
            dense[i][j] = static_cast<long long>(rng.next() % 19) - 9;
        }
        dense[i][i] += 40;  // diagonally dominant, hence nonsingular
        for (size_t j = 0; j < n; ++j)
            if (dense[i][j] != 0) rs.sys.add(i, static_cast<int>(j), dense[i][j]);
    }
    for (size_t j = 0; j < n; ++j)
        rs.x.push_back(ratio(static_cast<long>(rng.next() % 2001) - 1000,
                             static_cast<long>(1 + rng.next() % 97)));
    rs.b.assign(n, Rational(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (dense[i][j] != 0) rs.b[i] += Rational(BigInt(dense[i][j])) * rs.x[j];
    return rs;
}

}  // namespace

TEST_CASE("dense rational solve and inverse") {
    RatMatrix a{{Rational(1), ratio(-1, 2)}, {Rational(-1), Rational(1)}};
    auto inv = rat_inverse(a);
    CHECK(inv[0][0] == 2);
    CHECK(inv[0][1] == 1);
    CHECK(inv[1][0] == 2);
    CHECK(inv[1][1] == 2);

    auto x = rat_solve(a, {Rational(1), Rational(1)});
    CHECK(x[0] == 3);
    CHECK(x[1] == 4);

    RatMatrix singular{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
    CHECK_THROWS_AS(rat_solve(singular, {Rational(1), Rational(1)}), Error);
}

TEST_CASE("all exact solvers agree on random systems") {
    SplitMix64 rng{77};
    for (int iter = 0; iter < 40; ++iter) {
        size_t n = 1 + rng.next() % 12;
        auto rs = make_system(rng, n);

        auto x_bareiss = bareiss_solve(rs.sys, rs.b);
        auto x_dixon = dixon_solve(rs.sys, rs.b);

        RatMatrix a(n, std::vector<Rational>(n, 0));
        SparseRatSystem sparse;
        sparse.rows.resize(n);
        sparse.rhs = rs.b;
        for (size_t i = 0; i < n; ++i)
            for (const auto& [j, v] : rs.sys.rows[i]) {
                a[i][static_cast<size_t>(j)] += Rational(BigInt(v));
                sparse.rows[i][j] += Rational(BigInt(v));
            }
        auto x_dense = rat_solve(a, rs.b);
        auto x_sparse = sparse_solve(std::move(sparse));

        for (size_t j = 0; j < n; ++j) {
            CHECK(x_bareiss[j] == rs.x[j]);
            CHECK(x_dixon[j] == rs.x[j]);
            CHECK(x_dense[j] == rs.x[j]);
            CHECK(x_sparse[j] == rs.x[j]);
        }
    }
}

TEST_CASE("singular systems are reported") {
    IntSystem sys;
    sys.n = 2;
    sys.rows.resize(2);
    sys.add(0, 0, 1);
    sys.add(0, 1, 2);
    sys.add(1, 0, 2);
    sys.add(1, 1, 4);
    std::vector<Rational> b{Rational(1), Rational(1)};
    CHECK_THROWS_AS(bareiss_solve(sys, b), Error);
    CHECK_THROWS_AS(dixon_solve(sys, b), Error);
}

TEST_CASE("montgomery arithmetic matches the plain route") {
    SplitMix64 rng{123};
    for (size_t pi = 0; pi < 3; ++pi) {
        u64 p = solver_prime(pi);
        REQUIRE(is_prime_u64(p));
        REQUIRE(p < (u64(1) << 62));
        Montgomery mont(p);
        for (int iter = 0; iter < 200; ++iter) {
            u64 a = rng.next() % p, b = rng.next() % p;
            CHECK(mont.from(mont.mul(mont.to(a), mont.to(b))) == mulmod_u64(a, b, p));
            CHECK(mont.from(mont.add(mont.to(a), mont.to(b))) == (a + b) % p);
            CHECK(mont.from(mont.sub(mont.to(a), mont.to(b))) == (a + p - b % p) % p);
            if (a != 0) CHECK(mulmod_u64(mont.from(mont.inv(mont.to(a))), a, p) == 1);
        }
    }
}

TEST_CASE("prime generation") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(3));
    CHECK(!is_prime_u64(1));
    CHECK(!is_prime_u64(561));        // Carmichael
    CHECK(!is_prime_u64(6700417ull * 97));
    CHECK(is_prime_u64((u64(1) << 61) - 1));  // Mersenne
    CHECK(solver_prime(0) != solver_prime(1));
}

TEST_CASE("rational reconstruction round-trips") {
    SplitMix64 rng{5};
    BigInt modulus = 1;
    for (size_t i = 0; i < 3; ++i) modulus *= solver_prime(i);
    BigInt half = (modulus - 1) / 2;
    BigInt bound = sqrt(half);
    for (int iter = 0; iter < 100; ++iter) {
        BigInt p = BigInt(rng.next() % 1000000) - 500000;
        BigInt q = BigInt(1 + rng.next() % 1000000);
        BigInt g = gcd(abs(p), q);
        if (g != 0) {
            p /= g;
            q /= g;
        }
        // u = p * q^{-1} mod modulus via Fermat on each prime factor is
        // overkill; use extended Euclid directly.
        BigInt r0 = modulus, r1 = q % modulus, s0 = 0, s1 = 1;
        while (r1 != 0) {
            BigInt qq = r0 / r1;
            BigInt r2 = r0 - qq * r1;
            r0 = r1;
            r1 = r2;
            BigInt s2 = s0 - qq * s1;
            s0 = s1;
            s1 = s2;
        }
        REQUIRE(r0 == 1);  // q invertible
        BigInt qinv = s0 % modulus;
        if (qinv < 0) qinv += modulus;
        BigInt u = (((p % modulus) + modulus) * qinv) % modulus;
        auto rec = rational_reconstruct(u, modulus, bound);
        REQUIRE(rec.has_value());
        CHECK(*rec == ratio(p, q));
    }
}
