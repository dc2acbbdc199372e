#pragma once

// Exact linear solvers.
//
// Three routes, all returning exact rationals:
//   * dense rational Gaussian elimination / Gauss-Jordan inverse, for tiny
//     systems and as a reference implementation;
//   * fraction-free (Bareiss) elimination on integer matrices with a rational
//     right-hand side, with partial pivoting on magnitude;
//   * Dixon p-adic lifting for larger integer systems: one dense LU mod a
//     62-bit prime, then linear lifting and rational reconstruction, verified
//     exactly before returning.
// A sparsity-guided rational elimination (Markowitz-style pivoting) is kept
// separate for solving full chain systems without any structural hints.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cardshuffle/error.hpp"
#include "cardshuffle/rational.hpp"

namespace cardshuffle::linalg {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Dense rational elimination (reference route).

using RatMatrix = std::vector<std::vector<Rational>>;

inline std::vector<Rational> rat_solve(RatMatrix a, std::vector<Rational> b) {
    const size_t n = a.size();
    for (size_t t = 0; t < n; ++t) {
        size_t piv = t;
        while (piv < n && a[piv][t] == 0) ++piv;
        if (piv == n) raise(Errc::singular_matrix, "rat_solve: singular matrix");
        std::swap(a[piv], a[t]);
        std::swap(b[piv], b[t]);
        for (size_t r = t + 1; r < n; ++r) {
            if (a[r][t] == 0) continue;
            Rational f = a[r][t] / a[t][t];
            a[r][t] = 0;
            for (size_t c = t + 1; c < n; ++c)
                if (a[t][c] != 0) a[r][c] -= f * a[t][c];
            b[r] -= f * b[t];
        }
    }
    std::vector<Rational> x(n);
    for (size_t i = n; i-- > 0;) {
        Rational acc = b[i];
        for (size_t c = i + 1; c < n; ++c)
            if (a[i][c] != 0) acc -= a[i][c] * x[c];
        x[i] = acc / a[i][i];
    }
    return x;
}

inline RatMatrix rat_inverse(RatMatrix a) {
    const size_t n = a.size();
    RatMatrix inv(n, std::vector<Rational>(n, 0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t t = 0; t < n; ++t) {
        size_t piv = t;
        while (piv < n && a[piv][t] == 0) ++piv;
        if (piv == n) raise(Errc::singular_matrix, "rat_inverse: singular matrix");
        std::swap(a[piv], a[t]);
        std::swap(inv[piv], inv[t]);
        Rational d = a[t][t];
        for (size_t c = 0; c < n; ++c) {
            a[t][c] /= d;
            inv[t][c] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == t || a[r][t] == 0) continue;
            Rational f = a[r][t];
            for (size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[t][c];
                inv[r][c] -= f * inv[t][c];
            }
        }
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Fraction-free (Bareiss) elimination.  Intermediate entries are exact minors
// of the input, so no rational reduction is needed until back-substitution.

inline std::vector<Rational> bareiss_solve(std::vector<std::vector<BigInt>> m,
                                           std::vector<BigInt> c) {
    const size_t n = m.size();
    BigInt prev = 1;
    for (size_t t = 0; t < n; ++t) {
        size_t piv = t;
        BigInt best = abs(m[t][t]);
        for (size_t r = t; r < n; ++r) {
            BigInt mag = abs(m[r][t]);
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (best == 0) raise(Errc::singular_matrix, "bareiss_solve: singular matrix");
        std::swap(m[piv], m[t]);
        std::swap(c[piv], c[t]);
        for (size_t r = t + 1; r < n; ++r) {
            if (m[r][t] == 0) {
                // Still scale the row to keep the fraction-free invariant.
                for (size_t cc = t + 1; cc < n; ++cc)
                    m[r][cc] = m[t][t] * m[r][cc] / prev;
                c[r] = m[t][t] * c[r] / prev;
                continue;
            }
            for (size_t cc = t + 1; cc < n; ++cc)
                m[r][cc] = (m[t][t] * m[r][cc] - m[r][t] * m[t][cc]) / prev;
            c[r] = (m[t][t] * c[r] - m[r][t] * c[t]) / prev;
            m[r][t] = 0;
        }
        prev = m[t][t];
    }
    std::vector<Rational> x(n);
    for (size_t i = n; i-- > 0;) {
        Rational acc(c[i]);
        for (size_t j = i + 1; j < n; ++j)
            if (m[i][j] != 0) acc -= Rational(m[i][j]) * x[j];
        x[i] = acc / Rational(m[i][i]);
    }
    return x;
}

// ---------------------------------------------------------------------------
// 64-bit Montgomery arithmetic and prime generation for the modular route.

inline u64 mulmod_u64(u64 a, u64 b, u64 p) { return static_cast<u64>(u128(a) * b % p); }

inline u64 powmod_u64(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Primes just under 2^62, largest first.
inline u64 solver_prime(size_t idx) {
    static std::vector<u64> cache;
    static u64 candidate = (u64(1) << 62) - 1;
    while (cache.size() <= idx) {
        while (!is_prime_u64(candidate)) candidate -= 2;
        cache.push_back(candidate);
        candidate -= 2;
    }
    return cache[idx];
}

struct Montgomery {
    u64 p = 0, npinv = 0, r2 = 0, one = 0;

    explicit Montgomery(u64 prime) : p(prime) {
        u64 inv = p;  // p^{-1} mod 2^64 by Newton iteration
        for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
        npinv = ~inv + 1;
        u64 r = static_cast<u64>((u128(1) << 64) % p);
        r2 = mulmod_u64(r, r, p);
        one = r;
    }

    u64 redc(u128 t) const {
        u64 m = static_cast<u64>(t) * npinv;
        u64 res = static_cast<u64>((t + u128(m) * p) >> 64);
        return res >= p ? res - p : res;
    }
    u64 mul(u64 a, u64 b) const { return redc(u128(a) * b); }
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= p ? s - p : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
    u64 to(u64 x) const { return mul(x % p, r2); }
    u64 from(u64 x) const { return redc(x); }
    u64 pow(u64 a, u64 e) const {
        u64 r = one;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, p - 2); }
};

// Dense LU factorization mod p (Doolittle, partial pivoting, Montgomery
// domain throughout).
struct ModLU {
    Montgomery mont;
    size_t n = 0;
    std::vector<u64> a;        // row-major; L below diagonal, U on and above
    std::vector<u64> invdiag;  // inverses of U diagonal
    std::vector<size_t> perm;

    ModLU(u64 prime, size_t dim) : mont(prime), n(dim), a(dim * dim, 0) {}

    u64& at(size_t r, size_t c) { return a[r * n + c]; }
    u64 at(size_t r, size_t c) const { return a[r * n + c]; }

    bool factor() {
        perm.resize(n);
        invdiag.assign(n, 0);
        for (size_t i = 0; i < n; ++i) perm[i] = i;
        for (size_t t = 0; t < n; ++t) {
            size_t piv = t;
            while (piv < n && at(piv, t) == 0) ++piv;
            if (piv == n) return false;
            if (piv != t) {
                for (size_t c = 0; c < n; ++c) std::swap(at(piv, c), at(t, c));
                std::swap(perm[piv], perm[t]);
            }
            u64 ip = mont.inv(at(t, t));
            invdiag[t] = ip;
            const u64* trow = &a[t * n];
            for (size_t r = t + 1; r < n; ++r) {
                u64* rrow = &a[r * n];
                if (rrow[t] == 0) continue;
                u64 f = mont.mul(rrow[t], ip);
                rrow[t] = f;
                for (size_t c = t + 1; c < n; ++c)
                    rrow[c] = mont.sub(rrow[c], mont.mul(f, trow[c]));
            }
        }
        return true;
    }

    // Solves in place; b in Montgomery domain.
    void solve(std::vector<u64>& b) const {
        std::vector<u64> pb(n);
        for (size_t i = 0; i < n; ++i) pb[i] = b[perm[i]];
        for (size_t t = 0; t < n; ++t) {
            u64 v = pb[t];
            if (v == 0) continue;
            for (size_t r = t + 1; r < n; ++r) {
                u64 l = at(r, t);
                if (l != 0) pb[r] = mont.sub(pb[r], mont.mul(l, v));
            }
        }
        for (size_t i = n; i-- > 0;) {
            u64 acc = pb[i];
            const u64* irow = &a[i * n];
            for (size_t c = i + 1; c < n; ++c)
                if (irow[c] != 0 && pb[c] != 0) acc = mont.sub(acc, mont.mul(irow[c], pb[c]));
            pb[i] = mont.mul(acc, invdiag[i]);
        }
        b = std::move(pb);
    }
};

// Sparse integer system with small entries; the shape shared by the chain
// solver's per-tier systems and the full transition system.
struct IntSystem {
    size_t n = 0;
    std::vector<std::vector<std::pair<int, long long>>> rows;

    void add(size_t row, int col, long long v) { rows[row].emplace_back(col, v); }
};

inline u64 mod_nonneg(const BigInt& v, u64 p) {
    BigInt r = v % p;
    if (r < 0) r += p;
    return r.convert_to<u64>();
}

// Rational reconstruction of u (mod modulus): num/den with |num|, den bounded
// by sqrt(modulus/2).  The caller verifies candidates exactly.
inline std::optional<Rational> rational_reconstruct(const BigInt& u, const BigInt& modulus,
                                                    const BigInt& bound) {
    BigInt r0 = modulus, r1 = u % modulus;
    if (r1 < 0) r1 += modulus;
    BigInt t0 = 0, t1 = 1;
    while (r1 > bound) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        BigInt t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0) return std::nullopt;
    BigInt den_abs = abs(t1);
    if (den_abs > bound) return std::nullopt;
    BigInt num_signed = t1 < 0 ? BigInt(-r1) : r1;
    return ratio(num_signed, den_abs);
}

namespace detail {

// Attempts reconstruction of every component, reusing discovered denominators
// since solution vectors here share most of their denominator structure.
inline std::optional<std::vector<Rational>> reconstruct_vector(const std::vector<BigInt>& x,
                                                               const BigInt& modulus) {
    BigInt half_mod = (modulus - 1) / 2;
    BigInt bound = sqrt(half_mod);
    BigInt half = modulus / 2;
    std::vector<Rational> out(x.size());
    BigInt common_den = 1;
    for (size_t i = 0; i < x.size(); ++i) {
        BigInt v = (x[i] * common_den) % modulus;
        if (v > half) v -= modulus;
        if (abs(v) <= bound) {
            out[i] = ratio(v, common_den);
            continue;
        }
        auto rec = rational_reconstruct(x[i], modulus, bound);
        if (!rec) return std::nullopt;
        out[i] = *rec;
        common_den = lcm(common_den, den(*rec));
    }
    return out;
}

}  // namespace detail

// Dixon p-adic solve of A x = b, A integer with small entries, b rational.
// A single LU mod one prime drives the lifting; candidates found by rational
// reconstruction are accepted only after an exact check of every equation.
inline std::vector<Rational> dixon_solve(const IntSystem& sys, const std::vector<Rational>& b) {
    const size_t n = sys.n;
    if (n == 0) return {};

    BigInt rhs_den = 1;
    for (const auto& q : b) rhs_den = lcm(rhs_den, den(q));
    std::vector<BigInt> c(n);
    for (size_t i = 0; i < n; ++i) c[i] = num(b[i]) * (rhs_den / den(b[i]));

    std::optional<ModLU> lu;
    for (size_t attempt = 0;; ++attempt) {
        if (attempt == 8) raise(Errc::singular_matrix, "dixon_solve: singular matrix");
        u64 p = solver_prime(attempt);
        lu.emplace(p, n);
        for (size_t i = 0; i < n; ++i)
            for (const auto& [j, v] : sys.rows[i]) {
                u64 r = static_cast<u64>(((v % static_cast<long long>(p)) + static_cast<long long>(p)) %
                                         static_cast<long long>(p));
                lu->at(i, static_cast<size_t>(j)) = lu->mont.add(
                    lu->at(i, static_cast<size_t>(j)), lu->mont.to(r));
            }
        if (lu->factor()) break;
    }
    const u64 p = lu->mont.p;
    const BigInt big_p(p);

    std::vector<BigInt> residual = c;
    std::vector<BigInt> x_digits(n, 0);
    BigInt pk = 1;
    std::vector<u64> rbar(n);
    std::vector<u64> y(n);
    size_t next_try = 8;

    auto verify = [&](const std::vector<Rational>& z) {
        for (size_t i = 0; i < n; ++i) {
            Rational acc(0);
            for (const auto& [j, v] : sys.rows[i]) acc += Rational(BigInt(v)) * z[j];
            if (acc != Rational(c[i])) return false;
        }
        return true;
    };
    auto finish = [&](std::vector<Rational> z) {
        Rational scale = ratio(BigInt(1), rhs_den);
        for (auto& q : z) q *= scale;
        return z;
    };

    for (size_t step = 0;; ++step) {
        bool zero = true;
        for (const auto& r : residual)
            if (r != 0) {
                zero = false;
                break;
            }
        if (zero) {
            std::vector<Rational> z(n);
            for (size_t i = 0; i < n; ++i) z[i] = Rational(x_digits[i]);
            if (!verify(z)) raise(Errc::singular_matrix, "dixon_solve: lift invariant broken");
            return finish(std::move(z));
        }

        for (size_t i = 0; i < n; ++i) rbar[i] = lu->mont.to(mod_nonneg(residual[i], p));
        y = rbar;
        lu->solve(y);
        for (size_t i = 0; i < n; ++i) y[i] = lu->mont.from(y[i]);

        for (size_t i = 0; i < n; ++i)
            if (y[i] != 0) x_digits[i] += BigInt(y[i]) * pk;
        for (size_t i = 0; i < n; ++i) {
            BigInt& acc = residual[i];
            for (const auto& [j, v] : sys.rows[i])
                if (y[static_cast<size_t>(j)] != 0) acc -= BigInt(v) * y[static_cast<size_t>(j)];
            acc /= big_p;  // exact by construction of y
        }
        pk *= big_p;

        if (step + 1 >= next_try) {
            next_try = next_try + next_try / 2 + 4;
            auto candidate = detail::reconstruct_vector(x_digits, pk);
            if (candidate && verify(*candidate)) return finish(std::move(*candidate));
        }
        if (step > 4000000)
            raise(Errc::singular_matrix, "dixon_solve: lifting failed to converge");
    }
}

// Converts a small integer system to Bareiss inputs and solves exactly.
inline std::vector<Rational> bareiss_solve(const IntSystem& sys, const std::vector<Rational>& b) {
    const size_t n = sys.n;
    BigInt rhs_den = 1;
    for (const auto& q : b) rhs_den = lcm(rhs_den, den(q));
    std::vector<BigInt> c(n);
    for (size_t i = 0; i < n; ++i) c[i] = num(b[i]) * (rhs_den / den(b[i]));
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (const auto& [j, v] : sys.rows[i]) m[i][static_cast<size_t>(j)] += v;
    auto x = bareiss_solve(std::move(m), std::move(c));
    Rational scale = ratio(BigInt(1), rhs_den);
    for (auto& q : x) q *= scale;
    return x;
}

// ---------------------------------------------------------------------------
// Sparsity-guided exact elimination for general rational systems.  Pivots are
// chosen Markowitz-style: a minimum-population row, then its column with the
// fewest other occupants.

struct SparseRatSystem {
    std::vector<std::map<int, Rational>> rows;
    std::vector<Rational> rhs;
};

inline std::vector<Rational> sparse_solve(SparseRatSystem sys) {
    const size_t n = sys.rows.size();
    std::vector<std::set<int>> col_rows(n);
    for (size_t i = 0; i < n; ++i)
        for (const auto& [c, v] : sys.rows[i]) {
            if (v == 0) continue;
            col_rows[static_cast<size_t>(c)].insert(static_cast<int>(i));
        }
    std::vector<bool> row_done(n, false), col_done(n, false);

    struct Retired {
        int row, col;
    };
    std::vector<Retired> order;
    order.reserve(n);

    for (size_t step = 0; step < n; ++step) {
        int best_row = -1;
        size_t best_nnz = SIZE_MAX;
        for (size_t i = 0; i < n; ++i) {
            if (row_done[i]) continue;
            size_t nnz = sys.rows[i].size();
            if (nnz < best_nnz) {
                best_nnz = nnz;
                best_row = static_cast<int>(i);
            }
        }
        if (best_row < 0 || best_nnz == 0)
            raise(Errc::singular_matrix, "sparse_solve: singular matrix");
        int best_col = -1;
        size_t best_col_pop = SIZE_MAX;
        for (const auto& [c, v] : sys.rows[static_cast<size_t>(best_row)]) {
            size_t pop = col_rows[static_cast<size_t>(c)].size();
            if (pop < best_col_pop) {
                best_col_pop = pop;
                best_col = c;
            }
        }

        const size_t pi = static_cast<size_t>(best_row);
        const int pj = best_col;
        const Rational piv = sys.rows[pi].at(pj);

        std::vector<int> victims(col_rows[static_cast<size_t>(pj)].begin(),
                                 col_rows[static_cast<size_t>(pj)].end());
        for (int ri : victims) {
            if (ri == best_row) continue;
            auto& row = sys.rows[static_cast<size_t>(ri)];
            Rational f = row.at(pj) / piv;
            row.erase(pj);
            for (const auto& [c, v] : sys.rows[pi]) {
                if (c == pj) continue;
                auto [it, inserted] = row.try_emplace(c, 0);
                it->second -= f * v;
                if (it->second == 0) {
                    row.erase(it);
                    col_rows[static_cast<size_t>(c)].erase(ri);
                } else if (inserted) {
                    col_rows[static_cast<size_t>(c)].insert(ri);
                }
            }
            sys.rhs[static_cast<size_t>(ri)] -= f * sys.rhs[pi];
        }
        for (const auto& [c, v] : sys.rows[pi]) col_rows[static_cast<size_t>(c)].erase(best_row);
        row_done[pi] = true;
        col_done[static_cast<size_t>(pj)] = true;
        order.push_back(Retired{best_row, pj});
    }

    std::vector<Rational> x(n);
    for (size_t idx = n; idx-- > 0;) {
        const auto [ri, cj] = order[idx];
        const auto& row = sys.rows[static_cast<size_t>(ri)];
        Rational acc = sys.rhs[static_cast<size_t>(ri)];
        for (const auto& [c, v] : row) {
            if (c == cj) continue;
            acc -= v * x[static_cast<size_t>(c)];
        }
        x[static_cast<size_t>(cj)] = acc / row.at(cj);
    }
    return x;
}

}  // namespace cardshuffle::linalg
