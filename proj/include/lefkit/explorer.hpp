#pragma once

// Search for invariant Lefschetz collections. Candidates are orbit subsets of
// a pool, enumerated in a fixed order, pruned by exceptionality and by
// K-theoretic rank arithmetic, and certified by the saturation engine.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lefkit/collections.hpp"
#include "lefkit/rep_theory.hpp"
#include "lefkit/saturation.hpp"

namespace lefkit {

enum class SearchTarget { rectangular_length_h, minimal };

struct SearchSpec {
    std::size_t k = 1;
    int n = 1;
    Box pool_box;
    SearchTarget target = SearchTarget::rectangular_length_h;
    std::uint64_t budget = 1'000'000;
    int margin = 2;
    bool prune = true;      // rank-arithmetic pruning (divisibility, orbit shapes, r_0 start)
    bool normalize = true;  // pool reps must have smallest coordinate 0
    unsigned threads = 1;
    std::optional<std::uint64_t> max_r0;  // minimal search: last r_0 level tried
};

inline SearchSpec default_search_spec(std::size_t k, int n, SearchTarget target) {
    require_valid_kn(k, n);
    SearchSpec s;
    s.k = k;
    s.n = n;
    s.pool_box = Box(0, n + 1, k);
    s.target = target;
    s.margin = default_margin(n);
    return s;
}

struct CertifiedCollection {
    LefschetzCollection collection;
    Verdict verdict;
};

struct SearchResult {
    std::vector<CertifiedCollection> found;
    std::vector<LefschetzCollection> inconclusive;
    bool exhausted = false;
    std::uint64_t nodes_visited = 0;
    std::optional<std::uint64_t> r0_level;  // minimal search: level of the hits
    bool pruned_by_divisibility = false;
};

/// Canonical reps inside the pool box, lex ascending.
inline std::vector<Multidegree> pool_orbits(const SearchSpec& spec) {
    if (spec.pool_box.k != spec.k) throw ArityMismatch("pool box arity differs from k");
    std::vector<Multidegree> out;
    for (const auto& p : spec.pool_box.points()) {
        if (!is_canonical(p)) continue;
        if (spec.normalize && p[spec.k - 1] != 0) continue;
        out.push_back(p);
    }
    return out;
}

namespace detail {

class BudgetGuard {
public:
    explicit BudgetGuard(std::uint64_t budget) : budget_(budget) {}
    // False once the budget is spent.
    bool visit() {
        if (nodes_ >= budget_) {
            aborted_ = true;
            return false;
        }
        ++nodes_;
        return true;
    }
    bool aborted() const { return aborted_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

struct PoolOrbit {
    Multidegree rep;
    std::vector<Multidegree> bundles;
    std::uint64_t size = 0;
    std::size_t shape = 0;  // index into partitions_of(k)
};

inline std::vector<PoolOrbit> describe_pool(std::size_t k, const std::vector<Multidegree>& reps) {
    const auto shapes = partitions_of(static_cast<int>(k));
    std::vector<PoolOrbit> out;
    for (const auto& r : reps) {
        PoolOrbit o;
        o.rep = r;
        o.bundles = orbit_of(r).elements;
        o.size = o.bundles.size();
        auto sh = stabilizer_shape(r);
        o.shape = static_cast<std::size_t>(std::find(shapes.begin(), shapes.end(), sh) - shapes.begin());
        out.push_back(std::move(o));
    }
    return out;
}

// Appending `added` (twisted by `shift`) to an exceptional list keeps it exceptional?
inline bool extends_exceptionally(int n, const std::vector<Multidegree>& existing,
                                  const std::vector<Multidegree>& added, Coord shift,
                                  std::vector<Multidegree>& twisted) {
    twisted.clear();
    for (const auto& b : added) twisted.push_back(twist(b, shift));
    for (std::size_t i = 0; i < twisted.size(); ++i) {
        for (const auto& e : existing)
            if (!orthogonal_coords(n, twisted[i].coords(), e.coords())) return false;
        for (std::size_t j = 0; j < i; ++j)
            if (!orthogonal_coords(n, twisted[i].coords(), twisted[j].coords())) return false;
    }
    return true;
}

template <typename T, typename F>
auto parallel_map(const std::vector<T>& items, unsigned threads, F fn) {
    using R = decltype(fn(items.front()));
    std::vector<std::optional<R>> slots(items.size());
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(items.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) slots[i] = fn(items[i]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < items.size(); i += threads) slots[i] = fn(items[i]);
            });
        }
        for (auto& th : pool) th.join();
    }
    std::vector<R> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// Evaluates candidates in parallel and merges in candidate order.
inline void certify(const std::vector<LefschetzCollection>& candidates, const SearchSpec& spec,
                    SearchResult& res) {
    auto verdicts = parallel_map(candidates, spec.threads,
                                 [&](const LefschetzCollection& c) { return verify_fullness(c, spec.margin); });
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (verdicts[i].full())
            res.found.push_back({candidates[i], std::move(verdicts[i])});
        else if (verdicts[i].status == FullnessStatus::inconclusive)
            res.inconclusive.push_back(candidates[i]);
    }
}

// Subsets of `pool` (by index list) in lex order with the given bundle count
// whose bundles, appended after `prefix` with the given twist, stay exceptional.
// `accept_shapes` filters partial and complete shape counts.
struct SubsetEnumerator {
    int n;
    const std::vector<PoolOrbit>& pool;
    const std::vector<std::size_t>& allowed;  // indices into pool, ascending
    std::uint64_t target;
    Coord shift;
    std::function<bool(const std::vector<std::uint64_t>&, bool complete)> accept_shapes;
    std::function<void(const std::vector<std::size_t>&, const std::vector<Multidegree>&)> emit;
    BudgetGuard& guard;
    std::size_t shape_count;

    void run(const std::vector<Multidegree>& prefix) {
        std::vector<std::size_t> chosen;
        std::vector<Multidegree> list = prefix;
        std::vector<std::uint64_t> shapes(shape_count, 0);
        rec(0, 0, chosen, list, shapes);
    }

    void rec(std::size_t pos, std::uint64_t count, std::vector<std::size_t>& chosen,
             std::vector<Multidegree>& list, std::vector<std::uint64_t>& shapes) {
        if (!guard.visit()) return;
        if (count == target) {
            if (accept_shapes(shapes, true)) emit(chosen, list);
            return;
        }
        std::vector<Multidegree> twisted;
        for (std::size_t a = pos; a < allowed.size(); ++a) {
            const auto& o = pool[allowed[a]];
            if (count + o.size > target) continue;
            ++shapes[o.shape];
            if (accept_shapes(shapes, false) && extends_exceptionally(n, list, o.bundles, shift, twisted)) {
                chosen.push_back(allowed[a]);
                list.insert(list.end(), twisted.begin(), twisted.end());
                rec(a + 1, count + o.size, chosen, list, shapes);
                list.resize(list.size() - twisted.size());
                chosen.pop_back();
            }
            --shapes[o.shape];
            if (guard.aborted()) return;
        }
    }
};

inline OrbitSet block_from(const std::vector<PoolOrbit>& pool, std::size_t k,
                           const std::vector<std::size_t>& idx) {
    std::vector<Multidegree> reps;
    for (auto i : idx) reps.push_back(pool[i].rep);
    return OrbitSet::from_points(k, reps);
}

}  // namespace detail

/// Orbit subsets S with (n+1)^{k-1} bundles such that <S, S(1), ..., S(n)>
/// is exceptional and certifies FULL.
inline SearchResult search_rectangular(const SearchSpec& spec) {
    require_valid_kn(spec.k, spec.n);
    if (spec.budget == 0) throw std::invalid_argument("budget must be positive");
    SearchResult res;
    const int h = spec.n + 1;
    const int k = static_cast<int>(spec.k);
    const auto shapes = partitions_of(k);
    detail::BudgetGuard guard(spec.budget);

    std::vector<std::uint64_t> quota(shapes.size(), UINT64_MAX);
    if (spec.prune) {
        if (h >= 2 && !divisibility_criterion(h, k).pass) {
            guard.visit();
            res.pruned_by_divisibility = true;
            res.exhausted = true;
            res.nodes_visited = guard.nodes();
            return res;
        }
        auto counts = orbit_type_counts(h, k);
        for (std::size_t j = 0; j < counts.size(); ++j) {
            if (counts[j] % static_cast<std::uint64_t>(h) != 0) {
                res.exhausted = true;
                res.nodes_visited = guard.nodes();
                return res;
            }
            quota[j] = counts[j] / static_cast<std::uint64_t>(h);
        }
    }

    const auto pool = detail::describe_pool(spec.k, pool_orbits(spec));
    std::vector<std::size_t> all(pool.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const std::uint64_t target = full_rank(spec.k - 1, spec.n);

    std::vector<LefschetzCollection> candidates;
    detail::SubsetEnumerator en{
        spec.n, pool, all, target, 0,
        [&](const std::vector<std::uint64_t>& sc, bool complete) {
            for (std::size_t j = 0; j < sc.size(); ++j) {
                if (quota[j] == UINT64_MAX) continue;
                if (sc[j] > quota[j] || (complete && sc[j] != quota[j])) return false;
            }
            return true;
        },
        [&](const std::vector<std::size_t>& idx, const std::vector<Multidegree>&) {
            auto block = detail::block_from(pool, spec.k, idx);
            auto coll = rectangular_collection(block, spec.n);
            // block exceptionality was checked during enumeration; the twists still need it
            if (check_exceptional(coll, 1).empty()) candidates.push_back(std::move(coll));
        },
        guard, shapes.size()};
    en.run({});
    detail::certify(candidates, spec, res);
    res.exhausted = !guard.aborted();
    res.nodes_visited = guard.nodes();
    return res;
}

/// Nested chains B_0 >= B_1 >= ... >= B_n with (n+1)^k bundles in total,
/// exceptional and FULL, trying r_0 = |B_0| in ascending order from the
/// invariant lower bound and stopping at the first level with hits.
inline SearchResult search_minimal(const SearchSpec& spec) {
    require_valid_kn(spec.k, spec.n);
    if (spec.budget == 0) throw std::invalid_argument("budget must be positive");
    SearchResult res;
    const int h = spec.n + 1;
    const int k = static_cast<int>(spec.k);
    const auto shapes = partitions_of(k);
    const std::uint64_t total = full_rank(spec.k, spec.n);
    detail::BudgetGuard guard(spec.budget);

    std::vector<std::uint64_t> need(shapes.size(), 0);
    std::uint64_t start = 1;
    if (spec.prune) {
        need = orbit_type_counts(h, k);
        start = k <= 6 ? invariant_bound(h, k).r0_min : lef_bounds(h, k).r0_min;
    }
    const std::uint64_t last = std::min(total, spec.max_r0.value_or(total));

    const auto pool = detail::describe_pool(spec.k, pool_orbits(spec));
    std::vector<std::size_t> all(pool.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

    for (std::uint64_t r0 = start; r0 <= last; ++r0) {
        std::vector<LefschetzCollection> candidates;
        // blocks[j]: chosen pool indices; sums[j]: shape counts of blocks 0..j combined
        std::vector<std::vector<std::size_t>> chain;
        std::vector<std::uint64_t> used(shapes.size(), 0);

        std::function<void(std::size_t, const std::vector<Multidegree>&, std::uint64_t)> extend;
        auto shape_ok = [&](const std::vector<std::uint64_t>& sc, bool complete, std::size_t j) {
            if (!spec.prune) return true;
            const std::uint64_t left_blocks = static_cast<std::uint64_t>(spec.n) - j;
            for (std::size_t s = 0; s < sc.size(); ++s) {
                std::uint64_t so_far = used[s] + sc[s];
                if (so_far > need[s]) return false;
                if (complete && need[s] - so_far > left_blocks * sc[s]) return false;
            }
            return true;
        };
        // j: index of the block being chosen; list: flattened bundles so far
        extend = [&](std::size_t j, const std::vector<Multidegree>& list, std::uint64_t placed) {
            const std::uint64_t remaining = total - placed;
            if (remaining == 0) {
                LefschetzCollection coll{spec.k, spec.n, {}};
                for (const auto& b : chain) coll.blocks.push_back(detail::block_from(pool, spec.k, b));
                candidates.push_back(std::move(coll));
                return;
            }
            if (j > static_cast<std::size_t>(spec.n)) return;
            const std::vector<std::size_t> allowed = j == 0 ? all : chain.back();
            const std::uint64_t prev = j == 0 ? r0 : [&] {
                std::uint64_t c = 0;
                for (auto i : chain.back()) c += pool[i].size;
                return c;
            }();
            const std::uint64_t left_after = static_cast<std::uint64_t>(spec.n) - j;
            for (std::uint64_t size = (j == 0 ? r0 : std::min(prev, remaining)); size >= 1; --size) {
                if (j == 0 && size != r0) break;
                if (remaining - size > left_after * size) break;  // later blocks are no larger
                detail::SubsetEnumerator en{
                    spec.n, pool, allowed, size, static_cast<Coord>(j),
                    [&](const std::vector<std::uint64_t>& sc, bool complete) { return shape_ok(sc, complete, j); },
                    [&](const std::vector<std::size_t>& idx, const std::vector<Multidegree>& next_list) {
                        std::vector<std::uint64_t> sc(shapes.size(), 0);
                        for (auto i : idx) ++sc[pool[i].shape];
                        for (std::size_t s = 0; s < sc.size(); ++s) used[s] += sc[s];
                        chain.push_back(idx);
                        extend(j + 1, next_list, placed + size);
                        chain.pop_back();
                        for (std::size_t s = 0; s < sc.size(); ++s) used[s] -= sc[s];
                    },
                    guard, shapes.size()};
                en.run(list);
                if (guard.aborted()) return;
            }
        };
        extend(0, {}, 0);
        detail::certify(candidates, spec, res);
        if (guard.aborted()) break;
        if (!res.found.empty()) {
            res.r0_level = r0;
            break;
        }
    }
    res.exhausted = !guard.aborted();
    res.nodes_visited = guard.nodes();
    return res;
}

inline SearchResult search(const SearchSpec& spec) {
    return spec.target == SearchTarget::minimal ? search_minimal(spec) : search_rectangular(spec);
}

}  // namespace lefkit
