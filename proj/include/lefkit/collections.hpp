#pragma once

// Builders for the invariant collections (E, E-hat, the X_3^2 blocks, the
// n = 1 blocks) and validators for exceptionality, Lefschetz nesting and the
// twist semiorthogonality theorem.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lefkit/ext.hpp"
#include "lefkit/lattice.hpp"

namespace lefkit {

/// Blocks B_0, ..., B_d; block i is used with the twist (i, ..., i).
struct LefschetzCollection {
    std::size_t k = 1;
    int n = 1;
    std::vector<OrbitSet> blocks;

    int h() const { return n + 1; }
    std::size_t d() const { return blocks.empty() ? 0 : blocks.size() - 1; }

    /// Every bundle in collection order: blocks, then orbits, then elements.
    std::vector<Multidegree> flattened() const {
        std::vector<Multidegree> out;
        for (std::size_t i = 0; i < blocks.size(); ++i)
            for (const auto& b : blocks[i].bundles()) out.push_back(twist(b, static_cast<Coord>(i)));
        return out;
    }

    std::uint64_t bundle_count() const {
        std::uint64_t total = 0;
        for (const auto& b : blocks) total += b.bundle_count();
        return total;
    }

    bool operator==(const LefschetzCollection&) const = default;
};

enum class ViolationKind { order, ext, nesting, invariance, fullness };

inline std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::order: return "order";
        case ViolationKind::ext: return "ext";
        case ViolationKind::nesting: return "nesting";
        case ViolationKind::invariance: return "invariance";
        case ViolationKind::fullness: return "fullness";
    }
    return "unknown";
}

/// A reproducible failure. For ext violations witness = (later, earlier) and
/// detail holds Ext^*(later, earlier).
struct Violation {
    ViolationKind kind = ViolationKind::ext;
    std::vector<Multidegree> witness;
    GradedDims detail;
    std::string message;
};

inline void require_valid_kn(std::size_t k, int n) {
    if (k < 1) throw std::invalid_argument("arity k must be >= 1");
    require_positive_n(n);
}

namespace detail {

// Orbits of c_1 >= ... >= c_k = 0 with k*c_i < h(k-i) (strict) or <= (non-strict).
inline OrbitSet build_staircase(std::size_t k, int n, bool strict) {
    require_valid_kn(k, n);
    const Coord h = n + 1;
    const Coord kk = static_cast<Coord>(k);
    std::vector<Coord> bound(k, 0);
    for (std::size_t i = 1; i < k; ++i) {  // 1-based index i for coordinate c_i
        Coord rhs = h * (kk - static_cast<Coord>(i));
        bound[i - 1] = strict ? (rhs - 1) / kk : rhs / kk;
    }
    std::vector<Multidegree> reps;
    std::vector<Coord> c(k, 0);
    auto rec = [&](auto&& self, std::size_t idx, Coord upper) -> void {
        if (idx + 1 == k) {
            c[idx] = 0;
            reps.emplace_back(c);
            return;
        }
        for (Coord v = 0; v <= std::min(upper, bound[idx]); ++v) {
            c[idx] = v;
            self(self, idx + 1, v);
        }
    };
    rec(rec, 0, std::numeric_limits<Coord>::max());
    return OrbitSet::from_points(k, reps);
}

}  // namespace detail

inline OrbitSet build_E(std::size_t k, int n) { return detail::build_staircase(k, n, true); }

inline OrbitSet build_Ehat(std::size_t k, int n) { return detail::build_staircase(k, n, false); }

/// Removes then adds whole orbits, requiring each removed rep to be present
/// and each added rep to be absent.
inline OrbitSet adjust(const OrbitSet& base, const std::vector<Multidegree>& add,
                       const std::vector<Multidegree>& remove) {
    OrbitSet out = base;
    for (const auto& r : remove) {
        if (r.arity() != base.k()) throw ArityMismatch("removed rep " + to_string(r) + " has wrong arity");
        if (!out.contains_orbit(r))
            throw std::invalid_argument("cannot remove orbit " + to_string(canonical_rep(r)) +
                                        ": not present");
        out = out.without(r);
    }
    for (const auto& a : add) {
        if (a.arity() != base.k()) throw ArityMismatch("added rep " + to_string(a) + " has wrong arity");
        if (out.contains_orbit(a))
            throw std::invalid_argument("cannot add orbit " + to_string(canonical_rep(a)) +
                                        ": already present");
        out = out.with(a);
    }
    return out;
}

inline Violation ext_violation(int n, const Multidegree& later, const Multidegree& earlier) {
    Violation v;
    v.kind = ViolationKind::ext;
    v.witness = {later, earlier};
    v.detail = ext_graded(n, later, earlier);
    v.message = "Ext(" + to_string(later) + ", " + to_string(earlier) + ") is nonzero";
    return v;
}

/// Exceptionality of an explicitly ordered list: Ext from every later bundle
/// to every earlier one vanishes. Duplicates are caught because Ext(a, a) != 0.
inline std::vector<Violation> check_exceptional_list(
    int n, const std::vector<Multidegree>& ordered,
    std::size_t max_violations = std::numeric_limits<std::size_t>::max()) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (!orthogonal_coords(n, ordered[i].coords(), ordered[j].coords())) {
                out.push_back(ext_violation(n, ordered[i], ordered[j]));
                if (out.size() >= max_violations) return out;
            }
        }
    }
    return out;
}

inline std::vector<Violation> check_exceptional(
    const LefschetzCollection& coll,
    std::size_t max_violations = std::numeric_limits<std::size_t>::max()) {
    std::vector<Violation> out;
    for (const auto& b : coll.blocks) {
        if (b.k() != coll.k) {
            Violation v;
            v.kind = ViolationKind::invariance;
            v.message = "block arity " + std::to_string(b.k()) + " differs from k = " +
                        std::to_string(coll.k);
            out.push_back(std::move(v));
            return out;
        }
    }
    return check_exceptional_list(coll.n, coll.flattened(), max_violations);
}

/// Ext(a(i), b) = 0 for a in E, b in E-hat, 0 < i <= n. Returns the first
/// failing pair, if any.
inline std::optional<Violation> check_theorem_semiorthogonality(std::size_t k, int n) {
    require_valid_kn(k, n);
    const auto small = build_E(k, n).bundles();
    const auto large = build_Ehat(k, n).bundles();
    for (int i = 1; i <= n; ++i) {
        for (const auto& a : small) {
            Multidegree ai = twist(a, i);
            for (const auto& b : large)
                if (!orthogonal_coords(n, ai.coords(), b.coords())) return ext_violation(n, ai, b);
        }
    }
    return std::nullopt;
}

/// Nesting B_{i+1} within B_i.
inline std::optional<Violation> check_lefschetz(const LefschetzCollection& coll) {
    for (std::size_t i = 0; i + 1 < coll.blocks.size(); ++i) {
        const auto& outer = coll.blocks[i];
        const auto& inner = coll.blocks[i + 1];
        if (inner.is_subset_of(outer)) continue;
        Violation v;
        v.kind = ViolationKind::nesting;
        for (const auto& r : inner.reps()) {
            if (!outer.contains_orbit(r)) {
                v.witness.push_back(r);
                break;
            }
        }
        v.message = "block " + std::to_string(i + 1) + " is not contained in block " +
                    std::to_string(i);
        return v;
    }
    return std::nullopt;
}

inline bool is_rectangular(const LefschetzCollection& coll) {
    for (std::size_t i = 1; i < coll.blocks.size(); ++i)
        if (!(coll.blocks[i] == coll.blocks[0])) return false;
    return true;
}

/// Bundle count per block.
inline std::vector<std::uint64_t> ranks(const LefschetzCollection& coll) {
    std::vector<std::uint64_t> r;
    for (const auto& b : coll.blocks) r.push_back(b.bundle_count());
    return r;
}

/// <B_d, B_d(1), ..., B_d(d)>.
inline LefschetzCollection rectangular_part(const LefschetzCollection& coll) {
    LefschetzCollection r{coll.k, coll.n, {}};
    if (coll.blocks.empty()) return r;
    r.blocks.assign(coll.blocks.size(), coll.blocks.back());
    return r;
}

inline LefschetzCollection rectangular_collection(const OrbitSet& block, int n) {
    return LefschetzCollection{block.k(), n, std::vector<OrbitSet>(static_cast<std::size_t>(n) + 1, block)};
}

/// <E-hat, E(1), ..., E(n)>.
inline LefschetzCollection standard_collection(std::size_t k, int n) {
    LefschetzCollection c{k, n, {}};
    c.blocks.push_back(build_Ehat(k, n));
    const auto e = build_E(k, n);
    for (int i = 1; i <= n; ++i) c.blocks.push_back(e);
    return c;
}

// The X_3^2 blocks: B = E + orbit(1,1,0), B-hat = E-hat - orbit(2,0,0).
inline OrbitSet x32_block() { return adjust(build_E(3, 2), {Multidegree{1, 1, 0}}, {}); }
inline OrbitSet x32_block_hat() { return adjust(build_Ehat(3, 2), {}, {Multidegree{2, 0, 0}}); }

inline LefschetzCollection x32_minimal() {
    return LefschetzCollection{3, 2, {x32_block_hat(), x32_block(), x32_block()}};
}

inline OrbitSet x32_residual() { return OrbitSet::from_points(3, {Multidegree{1, -1, 0}}); }

/// n = 1: <A, A(1)> for odd k and <A-hat, A(1)> for even k.
inline LefschetzCollection xk1(std::size_t k) { return standard_collection(k, 1); }

/// <A, A(1), ..., A(n)> with A = E_3^n.
inline LefschetzCollection x3n_rectangular(int n) { return rectangular_collection(build_E(3, n), n); }

inline std::vector<std::string> builtin_names() {
    return {"x3n-rectangular", "x32-minimal", "xk1", "ekn"};
}

/// Built-ins are always produced by the builders above.
inline LefschetzCollection builtin_collection(const std::string& name, std::size_t k, int n) {
    if (name == "x32-minimal") return x32_minimal();
    if (name == "x3n-rectangular") return x3n_rectangular(n);
    if (name == "xk1") return xk1(k);
    if (name == "ekn") return standard_collection(k, n);
    throw std::invalid_argument("unknown built-in collection: " + name);
}

}  // namespace lefkit
