#include <gtest/gtest.h>

#include "lefkit/explorer.hpp"
#include "lefkit/serialize.hpp"

using namespace lefkit;

namespace {

std::vector<std::string> fingerprints(const SearchResult& r) {
    std::vector<std::string> out;
    for (const auto& f : r.found) out.push_back(collection_to_json(f.collection).dump());
    return out;
}

SearchSpec spec_for(std::size_t k, int n, SearchTarget t, bool prune) {
    auto s = default_search_spec(k, n, t);
    s.prune = prune;
    return s;
}

}  // namespace

TEST(Pool, CanonicalNormalized) {
    auto s = default_search_spec(3, 1, SearchTarget::rectangular_length_h);
    std::vector<Multidegree> want{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {2, 0, 0}, {2, 1, 0}, {2, 2, 0}};
    EXPECT_EQ(pool_orbits(s), want);
    s.pool_box = Box(0, 1, 2);
    EXPECT_THROW(pool_orbits(s), ArityMismatch);
}

TEST(Rectangular, ThreeTwoHasNone) {
    auto r = search_rectangular(default_search_spec(3, 2, SearchTarget::rectangular_length_h));
    EXPECT_TRUE(r.exhausted);
    EXPECT_TRUE(r.found.empty());
    EXPECT_TRUE(r.pruned_by_divisibility);
}

TEST(Rectangular, ThreeThreeFindsStaircase) {
    auto r = search_rectangular(default_search_spec(3, 3, SearchTarget::rectangular_length_h));
    EXPECT_TRUE(r.exhausted);
    bool seen = false;
    for (const auto& f : r.found) seen |= f.collection == x3n_rectangular(3);
    EXPECT_TRUE(seen);
    EXPECT_EQ(r.found.size(), 2u);
}

TEST(Rectangular, SingleFactorIsBeilinson) {
    auto r = search_rectangular(default_search_spec(1, 1, SearchTarget::rectangular_length_h));
    ASSERT_EQ(r.found.size(), 1u);
    EXPECT_EQ(r.found[0].collection.blocks[0].reps(), std::vector<Multidegree>{{0}});
}

TEST(Rectangular, SmallerPoolSameAnswerForThreeTwo) {
    auto s = default_search_spec(3, 2, SearchTarget::rectangular_length_h);
    s.pool_box = Box(0, 2, 3);
    s.prune = false;
    auto r = search_rectangular(s);
    EXPECT_TRUE(r.exhausted);
    EXPECT_TRUE(r.found.empty());
}

TEST(Minimal, ThreeTwo) {
    auto r = search_minimal(default_search_spec(3, 2, SearchTarget::minimal));
    EXPECT_TRUE(r.exhausted);
    ASSERT_EQ(r.found.size(), 1u);
    EXPECT_EQ(r.found[0].collection, x32_minimal());
    EXPECT_EQ(r.r0_level, 13u);
}

TEST(Minimal, TwoOne) {
    auto r = search_minimal(default_search_spec(2, 1, SearchTarget::minimal));
    ASSERT_EQ(r.found.size(), 1u);
    EXPECT_EQ(r.found[0].collection, xk1(2));
    EXPECT_EQ(ranks(r.found[0].collection), (std::vector<std::uint64_t>{3, 1}));
}

TEST(Pruning, RectangularSameHits) {
    for (auto [k, n] : std::vector<std::pair<std::size_t, int>>{{1, 1}, {1, 3}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {2, 3}}) {
        auto a = search_rectangular(spec_for(k, n, SearchTarget::rectangular_length_h, true));
        auto b = search_rectangular(spec_for(k, n, SearchTarget::rectangular_length_h, false));
        ASSERT_TRUE(a.exhausted && b.exhausted);
        EXPECT_EQ(fingerprints(a), fingerprints(b)) << k << "," << n;
        EXPECT_LE(a.nodes_visited, b.nodes_visited);
    }
}

TEST(Pruning, MinimalSameHits) {
    for (auto [k, n] : std::vector<std::pair<std::size_t, int>>{{1, 2}, {2, 1}, {2, 2}, {3, 1}}) {
        auto a = search_minimal(spec_for(k, n, SearchTarget::minimal, true));
        auto b = search_minimal(spec_for(k, n, SearchTarget::minimal, false));
        ASSERT_TRUE(a.exhausted && b.exhausted);
        EXPECT_EQ(fingerprints(a), fingerprints(b)) << k << "," << n;
        EXPECT_EQ(a.r0_level, b.r0_level);
    }
}

TEST(Soundness, HitsReverifyFromJson) {
    std::vector<SearchResult> runs{
        search_rectangular(default_search_spec(3, 3, SearchTarget::rectangular_length_h)),
        search_minimal(default_search_spec(3, 2, SearchTarget::minimal)),
        search_minimal(default_search_spec(2, 2, SearchTarget::minimal)),
    };
    for (const auto& r : runs)
        for (const auto& f : r.found) {
            auto lc = collection_from_string(collection_to_json(f.collection).dump());
            EXPECT_TRUE(lc.issues.empty());
            const auto& c = lc.collection;
            EXPECT_TRUE(check_exceptional(c).empty());
            EXPECT_FALSE(check_lefschetz(c));
            EXPECT_EQ(c.bundle_count(), full_rank(c.k, c.n));
            EXPECT_TRUE(verify_fullness(c, default_margin(c.n)).full());
            ASSERT_TRUE(f.verdict.closure);
            EXPECT_TRUE(replay_trace(c.flattened(), c.n, f.verdict.closure->box(), f.verdict.closure->trace())
                            .same_members(*f.verdict.closure));
        }
}

TEST(Budget, TinyBudgetIsNotExhaustive) {
    auto s = default_search_spec(3, 3, SearchTarget::rectangular_length_h);
    s.budget = 1;
    auto r = search_rectangular(s);
    EXPECT_FALSE(r.exhausted);
    EXPECT_EQ(r.nodes_visited, 1u);
    auto m = default_search_spec(3, 2, SearchTarget::minimal);
    m.budget = 1;
    EXPECT_FALSE(search_minimal(m).exhausted);
    s.budget = 0;
    EXPECT_THROW(search_rectangular(s), std::invalid_argument);
}

TEST(Determinism, ThreadsDoNotChangeResults) {
    auto s = default_search_spec(3, 3, SearchTarget::rectangular_length_h);
    s.threads = 1;
    auto a = search(s);
    s.threads = 4;
    auto b = search(s);
    EXPECT_EQ(fingerprints(a), fingerprints(b));
    EXPECT_EQ(a.nodes_visited, b.nodes_visited);
    auto m = default_search_spec(3, 2, SearchTarget::minimal);
    m.threads = 3;
    EXPECT_EQ(fingerprints(search(m)), fingerprints(search_minimal(default_search_spec(3, 2, SearchTarget::minimal))));
}

TEST(MaxR0, StopsEarly) {
    auto s = default_search_spec(3, 2, SearchTarget::minimal);
    s.max_r0 = 12;
    auto r = search_minimal(s);
    EXPECT_TRUE(r.exhausted);
    EXPECT_TRUE(r.found.empty());
    EXPECT_FALSE(r.r0_level);
}
