#pragma once

// Fullness engine. Closure of a set of multidegrees inside a finite box under
// the window rule: if n+1 consecutive points of an axis-parallel line are
// members, every point of that line is a member. Lines are truncated to the
// box, so a derived member is always a genuine consequence; a missing one may
// only mean the box is too small.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lefkit/collections.hpp"
#include "lefkit/lattice.hpp"

namespace lefkit {

/// One application of the window rule.
struct RuleApplication {
    std::size_t axis = 0;
    std::vector<Coord> fixed;  // the k-1 coordinates off the axis, in axis order
    Coord window_start = 0;    // [window_start, window_start + n] was full
    std::vector<Multidegree> added;  // lex ascending

    bool operator==(const RuleApplication&) const = default;
};

class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Dense indexing of a box; index order equals lex order of points.
class BoxGrid {
public:
    explicit BoxGrid(const Box& box) : box_(box), side_(box.side()) {
        stride_.assign(box.k, 1);
        std::size_t s = 1;
        for (std::size_t i = box.k; i-- > 0;) {
            stride_[i] = s;
            s = checked_mul<std::size_t>(s, static_cast<std::size_t>(side_));
        }
        size_ = s;
        lines_ = box.k == 0 ? 0 : size_ / static_cast<std::size_t>(side_);
    }

    std::size_t size() const { return size_; }
    std::size_t lines_per_axis() const { return lines_; }
    std::size_t side() const { return static_cast<std::size_t>(side_); }
    std::size_t stride(std::size_t axis) const { return stride_[axis]; }
    const Box& box() const { return box_; }

    std::size_t index(const Multidegree& p) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < box_.k; ++i)
            idx += static_cast<std::size_t>(p[i] - box_.lo) * stride_[i];
        return idx;
    }

    std::size_t offset(std::size_t idx, std::size_t axis) const {
        return (idx / stride_[axis]) % static_cast<std::size_t>(side_);
    }

    Multidegree point(std::size_t idx) const {
        std::vector<Coord> c(box_.k);
        for (std::size_t i = 0; i < box_.k; ++i)
            c[i] = box_.lo + static_cast<Coord>(offset(idx, i));
        return Multidegree(std::move(c));
    }

    // Lex rank of the fixed coordinates of the line through idx along axis.
    std::size_t line_id(std::size_t idx, std::size_t axis) const {
        std::size_t id = 0;
        for (std::size_t j = 0; j < box_.k; ++j) {
            if (j == axis) continue;
            id = id * static_cast<std::size_t>(side_) + offset(idx, j);
        }
        return id;
    }

    // Index of the point with axis offset 0 on the given line.
    std::size_t line_base(std::size_t axis, std::size_t id) const {
        std::size_t base = 0;
        for (std::size_t j = box_.k; j-- > 0;) {
            if (j == axis) continue;
            base += (id % static_cast<std::size_t>(side_)) * stride_[j];
            id /= static_cast<std::size_t>(side_);
        }
        return base;
    }

    std::vector<Coord> fixed_coords(std::size_t axis, std::size_t base) const {
        std::vector<Coord> f;
        for (std::size_t j = 0; j < box_.k; ++j)
            if (j != axis) f.push_back(box_.lo + static_cast<Coord>(offset(base, j)));
        return f;
    }

private:
    Box box_;
    Coord side_;
    std::vector<std::size_t> stride_;
    std::size_t size_ = 0;
    std::size_t lines_ = 0;
};

}  // namespace detail

class ClosureState;
inline ClosureState close(const std::vector<Multidegree>& seed, int n, const Box& box);
inline ClosureState replay_trace(const std::vector<Multidegree>& seed, int n, const Box& box,
                                 const std::vector<RuleApplication>& trace);

/// Members of a box reached from a seed, with the trace that derives them.
class ClosureState {
public:
    ClosureState(Box box, int n) : box_(box), n_(n), grid_(box), members_(grid_.size(), 0) {}

    const Box& box() const { return box_; }
    int n() const { return n_; }
    const std::vector<RuleApplication>& trace() const { return trace_; }

    bool contains(const Multidegree& p) const {
        return box_.contains(p) && members_[grid_.index(p)] != 0;
    }

    std::size_t member_count() const {
        return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), 1));
    }

    /// Lex ascending.
    std::vector<Multidegree> members() const {
        std::vector<Multidegree> out;
        for (std::size_t i = 0; i < members_.size(); ++i)
            if (members_[i]) out.push_back(grid_.point(i));
        return out;
    }

    bool same_members(const ClosureState& other) const {
        return box_ == other.box_ && members_ == other.members_;
    }

    /// Points of [lo, hi]^k (clipped to the box) that are not members.
    std::vector<Multidegree> missing_in(const Box& target, std::size_t limit) const {
        std::vector<Multidegree> out;
        for (const auto& p : target.points()) {
            if (!contains(p)) {
                out.push_back(p);
                if (out.size() >= limit) break;
            }
        }
        return out;
    }

private:
    friend ClosureState close(const std::vector<Multidegree>&, int, const Box&);
    friend ClosureState replay_trace(const std::vector<Multidegree>&, int, const Box&,
                                     const std::vector<RuleApplication>&);

    void seed(const std::vector<Multidegree>& pts) {
        for (const auto& p : pts) {
            if (!box_.contains(p))
                throw std::invalid_argument("seed point " + to_string(p) + " lies outside the box");
            members_[grid_.index(p)] = 1;
        }
    }

    Box box_;
    int n_;
    detail::BoxGrid grid_;
    std::vector<std::uint8_t> members_;
    std::vector<RuleApplication> trace_;
};

/// Least fixed point of the window rule containing the seed. The trace is
/// recorded in the canonical order: repeated sweeps, axes ascending, lines in
/// lex order of their fixed coordinates.
inline ClosureState close(const std::vector<Multidegree>& seed, int n, const Box& box) {
    require_positive_n(n);
    ClosureState st(box, n);
    st.seed(seed);
    const auto& g = st.grid_;
    const std::size_t k = box.k;
    const std::size_t side = g.side();
    const std::size_t window = static_cast<std::size_t>(n) + 1;
    if (window > side) return st;

    const std::size_t lines = g.lines_per_axis();
    std::vector<std::vector<std::uint8_t>> dirty(k, std::vector<std::uint8_t>(lines, 1));
    auto& mem = st.members_;

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t axis = 0; axis < k; ++axis) {
            const std::size_t step = g.stride(axis);
            for (std::size_t id = 0; id < lines; ++id) {
                if (!dirty[axis][id]) continue;
                dirty[axis][id] = 0;
                const std::size_t base = g.line_base(axis, id);
                std::size_t run = 0, filled = 0;
                std::optional<std::size_t> start;
                for (std::size_t t = 0; t < side; ++t) {
                    if (mem[base + t * step]) {
                        ++filled;
                        if (++run == window && !start) start = t + 1 - window;
                    } else {
                        run = 0;
                    }
                }
                if (!start || filled == side) continue;
                RuleApplication app;
                app.axis = axis;
                app.fixed = g.fixed_coords(axis, base);
                app.window_start = box.lo + static_cast<Coord>(*start);
                for (std::size_t t = 0; t < side; ++t) {
                    std::size_t idx = base + t * step;
                    if (mem[idx]) continue;
                    mem[idx] = 1;
                    app.added.push_back(g.point(idx));
                    for (std::size_t other = 0; other < k; ++other)
                        if (other != axis) dirty[other][g.line_id(idx, other)] = 1;
                }
                st.trace_.push_back(std::move(app));
                changed = true;
            }
        }
    }
    return st;
}

/// Replays a trace from the seed, checking every window precondition.
inline ClosureState replay_trace(const std::vector<Multidegree>& seed, int n, const Box& box,
                                 const std::vector<RuleApplication>& trace) {
    require_positive_n(n);
    ClosureState st(box, n);
    st.seed(seed);
    const auto& g = st.grid_;
    for (std::size_t e = 0; e < trace.size(); ++e) {
        const auto& app = trace[e];
        auto fail = [&](const std::string& why) {
            throw TraceError("trace entry " + std::to_string(e) + ": " + why);
        };
        if (app.axis >= box.k || app.fixed.size() + 1 != box.k) fail("malformed line");
        auto on_line = [&](Coord t) {
            std::vector<Coord> c;
            std::size_t f = 0;
            for (std::size_t j = 0; j < box.k; ++j) c.push_back(j == app.axis ? t : app.fixed[f++]);
            return Multidegree(std::move(c));
        };
        for (Coord t = app.window_start; t <= app.window_start + n; ++t) {
            auto p = on_line(t);
            if (!box.contains(p) || !st.members_[g.index(p)])
                fail("window point " + to_string(p) + " is not a member");
        }
        for (const auto& p : app.added) {
            if (!box.contains(p)) fail("added point " + to_string(p) + " outside box");
            if (on_line(p[app.axis]) != p) fail("added point " + to_string(p) + " is off the line");
            st.members_[g.index(p)] = 1;
        }
        st.trace_.push_back(app);
    }
    return st;
}

enum class FullnessStatus { full, not_full_by_rank, inconclusive };

inline std::string to_string(FullnessStatus s) {
    switch (s) {
        case FullnessStatus::full: return "FULL";
        case FullnessStatus::not_full_by_rank: return "NOT_FULL_BY_RANK";
        case FullnessStatus::inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

struct Verdict {
    FullnessStatus status = FullnessStatus::inconclusive;
    std::uint64_t bundle_count = 0;
    std::uint64_t expected_count = 0;  // (n+1)^k
    int margin = 0;
    std::optional<ClosureState> closure;  // certificate; absent when decided by rank
    std::vector<Multidegree> missing_sample;

    bool full() const { return status == FullnessStatus::full; }
};

inline std::uint64_t full_rank(std::size_t k, int n) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r = checked_mul<std::uint64_t>(r, static_cast<std::uint64_t>(n) + 1);
    return r;
}

inline int default_margin(int n) { return n + 1; }

/// [-margin, n + margin]^k, widened if necessary so every seed point fits.
inline Box closure_box(std::size_t k, int n, int margin, const std::vector<Multidegree>& seed) {
    if (margin < 0) throw std::invalid_argument("margin must be nonnegative");
    Coord lo = -margin, hi = static_cast<Coord>(n) + margin;
    for (const auto& p : seed)
        for (Coord x : p.coords()) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    return Box(lo, hi, k);
}

/// Fullness of the subcategory generated by the given bundles.
inline Verdict verify_fullness_points(std::size_t k, int n, const std::vector<Multidegree>& bundles,
                                      int margin, std::size_t missing_limit = 16) {
    require_valid_kn(k, n);
    Verdict v;
    v.margin = margin;
    v.bundle_count = bundles.size();
    v.expected_count = full_rank(k, n);
    if (v.bundle_count != v.expected_count) {
        v.status = FullnessStatus::not_full_by_rank;
        return v;
    }
    Box box = closure_box(k, n, margin, bundles);
    v.closure = close(bundles, n, box);
    v.missing_sample = v.closure->missing_in(Box(0, n, k), missing_limit);
    v.status = v.missing_sample.empty() ? FullnessStatus::full : FullnessStatus::inconclusive;
    return v;
}

inline Verdict verify_fullness(const LefschetzCollection& coll, int margin) {
    return verify_fullness_points(coll.k, coll.n, coll.flattened(), margin);
}

struct ResidualReport {
    std::vector<Violation> violations;
    std::vector<std::size_t> battery_pairs;  // pairs checked for each twist of the rectangular part
    Verdict verdict;

    bool ok() const { return violations.empty() && verdict.full(); }
};

/// The residual must be right-orthogonal to every twisted bundle of the
/// rectangular part, and together they must generate everything.
inline ResidualReport residual_check(const LefschetzCollection& rect_part, const OrbitSet& residual,
                                     int margin) {
    ResidualReport rep;
    const auto res = residual.bundles();
    std::vector<Multidegree> all;
    for (std::size_t i = 0; i < rect_part.blocks.size(); ++i) {
        std::size_t pairs = 0;
        for (const auto& b0 : rect_part.blocks[i].bundles()) {
            auto b = twist(b0, static_cast<Coord>(i));
            all.push_back(b);
            for (const auto& r : res) {
                ++pairs;
                if (!is_orthogonal_pair(rect_part.n, b, r)) rep.violations.push_back(ext_violation(rect_part.n, b, r));
            }
        }
        rep.battery_pairs.push_back(pairs);
    }
    all.insert(all.end(), res.begin(), res.end());
    rep.verdict = verify_fullness_points(rect_part.k, rect_part.n, all, margin);
    if (!rep.verdict.full()) {
        Violation v;
        v.kind = ViolationKind::fullness;
        v.witness = rep.verdict.missing_sample;
        v.message = "rectangular part and residual do not generate: " + to_string(rep.verdict.status);
        rep.violations.push_back(std::move(v));
    }
    return rep;
}

}  // namespace lefkit
