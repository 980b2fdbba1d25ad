#pragma once

// Graded Ext dimensions between line bundles on (P^n)^k: Bott's formula on
// each factor, combined by the Kunneth formula.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lefkit/arith.hpp"
#include "lefkit/lattice.hpp"

namespace lefkit {

/// Dimensions indexed by cohomological degree.
struct GradedDims {
    std::vector<Count> dims;

    bool is_zero() const {
        for (Count d : dims)
            if (d != 0) return false;
        return true;
    }
    Count at(std::size_t degree) const { return degree < dims.size() ? dims[degree] : 0; }

    /// Degrees carrying a nonzero dimension.
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < dims.size(); ++i)
            if (dims[i] != 0) s.push_back(i);
        return s;
    }

    bool operator==(const GradedDims&) const = default;
};

inline void require_positive_n(int n) {
    if (n < 1) throw std::invalid_argument("degree bound n must be >= 1, got " + std::to_string(n));
}

/// H^*(P^n, O(d)), dense over degrees 0..n.
inline GradedDims line_cohomology(int n, Coord d) {
    require_positive_n(n);
    GradedDims g;
    g.dims.assign(static_cast<std::size_t>(n) + 1, 0);
    if (d >= 0) {
        g.dims[0] = binomial(checked_add(d, n), n);
    } else if (d <= -n - 1) {
        g.dims[static_cast<std::size_t>(n)] = binomial(checked_sub(-d, 1), n);
    }
    return g;
}

/// Ext^*(O(a), O(b)) on (P^n)^k: convolution of H^*(P^n, O(b_i - a_i)).
inline GradedDims ext_graded(int n, const Multidegree& a, const Multidegree& b) {
    require_positive_n(n);
    require_same_arity(a, b);
    const std::size_t k = a.arity();
    GradedDims acc;
    acc.dims.assign(k * static_cast<std::size_t>(n) + 1, 0);
    acc.dims[0] = 1;
    std::size_t top = 0;
    for (std::size_t i = 0; i < k; ++i) {
        GradedDims f = line_cohomology(n, checked_sub(b[i], a[i]));
        std::vector<Count> next(acc.dims.size(), 0);
        for (std::size_t p = 0; p <= top; ++p) {
            if (acc.dims[p] == 0) continue;
            for (std::size_t q = 0; q < f.dims.size(); ++q) {
                if (f.dims[q] == 0) continue;
                next[p + q] = checked_plus(next[p + q], checked_mul(acc.dims[p], f.dims[q]));
            }
        }
        acc.dims = std::move(next);
        top += static_cast<std::size_t>(n);
    }
    return acc;
}

/// Ext^*(O(a), O(b)) = 0 iff 0 < a_i - b_i <= n for some i. Hot path: no
/// cohomology is computed.
inline bool orthogonal_coords(int n, std::span<const Coord> a, std::span<const Coord> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        Coord gap = a[i] - b[i];
        if (gap > 0 && gap <= n) return true;
    }
    return false;
}

inline bool is_orthogonal_pair(int n, const Multidegree& a, const Multidegree& b) {
    require_positive_n(n);
    require_same_arity(a, b);
    for (std::size_t i = 0; i < a.arity(); ++i) {
        Coord gap = checked_sub(a[i], b[i]);
        if (gap > 0 && gap <= n) return true;
    }
    return false;
}

}  // namespace lefkit
