#pragma once

// Exact representation-theoretic numerics: GL_h and S_k dimensions, Kostka
// numbers, Schur-Weyl bookkeeping, divisibility tests and Lefschetz rank
// bounds.
//
// Convention: S_k irreducibles are indexed by partitions with Irr((k)) the
// trivial representation. With this convention K^{(x)k} = sum over lambda of
// Sigma^lambda K (x) Irr(lambda), and the permutation module on S_k / S_lambda
// contains Irr(mu) with multiplicity kostka(mu, lambda).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lefkit/arith.hpp"
#include "lefkit/lattice.hpp"
#include "lefkit/partition.hpp"

namespace lefkit {

class SearchBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_index(int h) {
    if (h < 2) throw std::invalid_argument("index h must be >= 2, got " + std::to_string(h));
}

/// Partitions of k with at most h rows, decreasing lex order.
inline std::vector<Partition> partitions_rho(int h, int k) {
    if (h < 1 || k < 1) throw std::invalid_argument("partitions_rho requires h, k >= 1");
    std::vector<Partition> out;
    for (auto& p : partitions_of(k))
        if (p.rows() <= h) out.push_back(std::move(p));
    return out;
}

inline int hook_length(const Partition& lambda, const Partition& transposed, int row, int col) {
    return (lambda[row] - col - 1) + (transposed[col] - row - 1) + 1;
}

/// dim Sigma^lambda of GL_h: product over cells of (h + col - row) / hook.
inline std::uint64_t dim_schur(const Partition& lambda, int h) {
    if (lambda.rows() > h) return 0;
    const Partition t = lambda.transpose();
    ExactQuotient q;
    for (int r = 0; r < lambda.rows(); ++r) {
        for (int c = 0; c < lambda[r]; ++c) {
            q.multiply(static_cast<Count>(h + c - r));
            q.divide(static_cast<Count>(hook_length(lambda, t, r, c)));
        }
    }
    return narrow_u64(q.value());
}

/// Hook-length formula: |mu|! / prod hooks.
inline std::uint64_t dim_irrep(const Partition& mu) {
    const Partition t = mu.transpose();
    ExactQuotient q;
    for (int i = 2; i <= mu.size(); ++i) q.multiply(static_cast<Count>(i));
    for (int r = 0; r < mu.rows(); ++r)
        for (int c = 0; c < mu[r]; ++c) q.divide(static_cast<Count>(hook_length(mu, t, r, c)));
    return narrow_u64(q.value());
}

/// Semistandard tableaux of shape mu and content lambda, by direct enumeration.
inline std::uint64_t kostka(const Partition& mu, const Partition& lambda) {
    if (mu.size() != lambda.size())
        throw std::invalid_argument("kostka: sizes differ (" + mu.to_string() + " vs " +
                                    lambda.to_string() + ")");
    std::vector<std::pair<int, int>> cells;
    for (int r = 0; r < mu.rows(); ++r)
        for (int c = 0; c < mu[r]; ++c) cells.emplace_back(r, c);
    std::vector<std::vector<int>> tab(static_cast<std::size_t>(mu.rows()));
    for (int r = 0; r < mu.rows(); ++r) tab[r].assign(static_cast<std::size_t>(mu[r]), 0);
    std::vector<int> remaining = lambda.parts();
    const int letters = lambda.rows();
    std::uint64_t count = 0;
    auto rec = [&](auto&& self, std::size_t cell) -> void {
        if (cell == cells.size()) {
            ++count;
            return;
        }
        auto [r, c] = cells[cell];
        int lo = 1;
        if (c > 0) lo = std::max(lo, tab[r][c - 1]);
        if (r > 0) lo = std::max(lo, tab[r - 1][c] + 1);
        for (int v = lo; v <= letters; ++v) {
            if (remaining[v - 1] == 0) continue;
            --remaining[v - 1];
            tab[r][c] = v;
            self(self, cell + 1);
            ++remaining[v - 1];
        }
        tab[r][c] = 0;
    };
    rec(rec, 0);
    return count;
}

struct SchurWeylRow {
    Partition lambda;
    std::uint64_t dim_schur = 0;
    std::uint64_t dim_irrep_transpose = 0;
    bool divisible = false;  // h | dim_schur
};

/// K^{(x)k} for dim K = h, one row per lambda in rho(h, k).
struct SchurWeylTable {
    int h = 0;
    int k = 0;
    std::vector<SchurWeylRow> rows;

    /// sum dim_schur * dim_irrep, which must equal h^k.
    std::uint64_t mass() const {
        std::uint64_t s = 0;
        for (const auto& r : rows) s = checked_plus(s, checked_mul(r.dim_schur, r.dim_irrep_transpose));
        return s;
    }
};

inline SchurWeylTable schur_weyl_table(int h, int k) {
    SchurWeylTable t{h, k, {}};
    for (const auto& lam : partitions_rho(h, k)) {
        SchurWeylRow row{lam, dim_schur(lam, h), dim_irrep(lam.transpose()), false};
        row.divisible = row.dim_schur % static_cast<std::uint64_t>(h) == 0;
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct DivisibilityResult {
    bool pass = true;
    std::optional<Partition> witness;  // lex-least lambda with h not dividing dim
};

/// h | dim Sigma^lambda for every lambda in rho(h, k).
inline DivisibilityResult divisibility_criterion(int h, int k) {
    require_index(h);
    DivisibilityResult res;
    for (const auto& lam : partitions_rho(h, k)) {
        if (dim_schur(lam, h) % static_cast<std::uint64_t>(h) != 0) {
            if (!res.witness || lam < *res.witness) res.witness = lam;
            res.pass = false;
        }
    }
    return res;
}

/// Sufficient condition for divisibility: h does not divide k and h | C(h, r)
/// for 1 <= r <= min(k, h - 1).
inline bool binomial_predicate(int h, int k) {
    require_index(h);
    if (k % h == 0) return false;
    for (int r = 1; r <= std::min(k, h - 1); ++r)
        if (binomial(h, r) % static_cast<Count>(h) != 0) return false;
    return true;
}

struct LefBounds {
    std::uint64_t r0_min = 0;
    std::uint64_t rd_max = 0;
};

/// Rank bounds for any invariant Lefschetz decomposition of length h.
inline LefBounds lef_bounds(int h, int k) {
    require_index(h);
    LefBounds b;
    const auto hh = static_cast<std::uint64_t>(h);
    for (const auto& row : schur_weyl_table(h, k).rows) {
        std::uint64_t up = (row.dim_schur + hh - 1) / hh;
        std::uint64_t down = row.dim_schur / hh;
        b.r0_min = checked_plus(b.r0_min, checked_mul(up, row.dim_irrep_transpose));
        b.rd_max = checked_plus(b.rd_max, checked_mul(down, row.dim_irrep_transpose));
    }
    return b;
}

/// Kostka matrix over partitions_of(k) (decreasing lex, which refines dominance).
inline std::vector<std::vector<std::uint64_t>> kostka_matrix(int k) {
    const auto parts = partitions_of(k);
    std::vector<std::vector<std::uint64_t>> m(parts.size(), std::vector<std::uint64_t>(parts.size(), 0));
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = 0; j < parts.size(); ++j) m[i][j] = kostka(parts[i], parts[j]);
    return m;
}

/// Solves multiplicities = Kostka * y for y over partitions_of(k). Returns
/// nullopt when the unique solution is not a nonnegative integer vector,
/// i.e. the representation is not a permutation representation of Young
/// type. The matrix is unitriangular so back-substitution is exact.
inline std::optional<std::vector<std::uint64_t>> permutation_decomposition(
    int k, const std::vector<std::uint64_t>& multiplicities) {
    const auto km = kostka_matrix(k);
    const std::size_t p = km.size();
    if (multiplicities.size() != p) throw std::invalid_argument("multiplicity vector has wrong length");
    std::vector<__int128> y(p, 0);
    for (std::size_t i = p; i-- > 0;) {
        __int128 v = static_cast<__int128>(multiplicities[i]);
        for (std::size_t j = i + 1; j < p; ++j) v -= static_cast<__int128>(km[i][j]) * y[j];
        if (v < 0) return std::nullopt;
        y[i] = v;
    }
    std::vector<std::uint64_t> out(p);
    for (std::size_t i = 0; i < p; ++i) out[i] = static_cast<std::uint64_t>(y[i]);
    return out;
}

/// Schur-Weyl multiplicities of Irr(mu) in K^{(x)k}, over partitions_of(k).
inline std::vector<std::uint64_t> schur_weyl_multiplicities(int h, int k) {
    std::vector<std::uint64_t> m;
    for (const auto& mu : partitions_of(k)) m.push_back(dim_schur(mu, h));
    return m;
}

/// Number of S_k-orbits of each stabilizer shape in any invariant basis of
/// K_0((P^n)^k), over partitions_of(k). Forced by the Schur-Weyl
/// multiplicities because the Kostka matrix is invertible.
inline std::vector<std::uint64_t> orbit_type_counts(int h, int k) {
    auto y = permutation_decomposition(k, schur_weyl_multiplicities(h, k));
    if (!y) throw ArithmeticError("Schur-Weyl multiplicities are not a permutation representation");
    return *y;
}

struct InvariantBound {
    std::uint64_t r0_min = 0;
    /// layers[i][j]: orbits of shape partitions_of(k)[j] kept in blocks 0..i
    /// and no further, in one minimizing chain. Block t holds layers t..h-1.
    std::vector<std::vector<std::uint64_t>> layers;
};

/// Least r_0 over nested invariant chains A_0 >= ... >= A_{h-1} whose
/// K-theory classes add up to K^{(x)k}, where every block and every
/// difference A_i - A_{i+1} is a permutation representation. An orbit kept
/// in blocks 0..i is counted i+1 times, so each shape decouples into a
/// change-making problem with coins 1..h, solved exhaustively by DP.
inline InvariantBound invariant_bound(int h, int k, std::uint64_t budget = 10'000'000) {
    require_index(h);
    if (k < 1 || k > 6) throw std::invalid_argument("invariant_bound supports 1 <= k <= 6");
    const auto shapes = partitions_of(k);
    const auto counts = orbit_type_counts(h, k);
    InvariantBound res;
    res.layers.assign(static_cast<std::size_t>(h), std::vector<std::uint64_t>(shapes.size(), 0));
    std::uint64_t work = 0;
    for (std::size_t j = 0; j < shapes.size(); ++j) {
        const std::uint64_t total = counts[j];
        work = checked_plus(work, checked_mul(total + 1, static_cast<std::uint64_t>(h)));
        if (work > budget)
            throw SearchBudgetExceeded("invariant_bound: budget of " + std::to_string(budget) +
                                       " DP states exceeded");
        // best[v] = fewest orbits whose multiplicities (each in 1..h) sum to v
        std::vector<std::uint64_t> best(total + 1, UINT64_MAX);
        std::vector<int> choice(total + 1, 0);
        best[0] = 0;
        for (std::uint64_t v = 1; v <= total; ++v) {
            for (int c = 1; c <= h && static_cast<std::uint64_t>(c) <= v; ++c) {
                if (best[v - c] == UINT64_MAX) continue;
                if (best[v - c] + 1 < best[v]) {
                    best[v] = best[v - c] + 1;
                    choice[v] = c;
                }
            }
        }
        for (std::uint64_t v = total; v > 0; v -= static_cast<std::uint64_t>(choice[v]))
            ++res.layers[static_cast<std::size_t>(choice[v] - 1)][j];
        res.r0_min = checked_plus(res.r0_min, checked_mul(best[total], orbit_size_for_shape(shapes[j])));
    }
    return res;
}

struct EquivariantLengths {
    std::vector<std::uint64_t> per_orbit;  // aligned with OrbitSet::reps()
    std::uint64_t total = 0;
};

/// Objects contributed to the equivariant category: one per irreducible of
/// each orbit's stabilizer, prod_j p(shape_j).
inline EquivariantLengths equivariant_lengths(const OrbitSet& s) {
    EquivariantLengths e;
    for (const auto& r : s.reps()) {
        std::uint64_t c = 1;
        const Partition shape = stabilizer_shape(r);
        for (int part : shape.parts()) c = checked_mul(c, partition_count(part));
        e.per_orbit.push_back(c);
        e.total = checked_plus(e.total, c);
    }
    return e;
}

}  // namespace lefkit
