#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lefkit/saturation.hpp"
#include "oracles.hpp"

using namespace lefkit;

namespace {

struct RandomCase {
    Box box;
    int n;
    std::vector<Multidegree> seed;
};

// 200 seeds with k <= 3, side <= 9 and a window that fits.
std::vector<RandomCase> random_cases() {
    std::mt19937_64 rng(2024);
    std::vector<RandomCase> out;
    for (int i = 0; i < 200; ++i) {
        std::size_t k = 1 + static_cast<std::size_t>(rng() % 3);
        int n = 1 + static_cast<int>(rng() % 3);
        Coord side = n + 1 + static_cast<Coord>(rng() % static_cast<std::uint64_t>(9 - n));
        Coord lo = -static_cast<Coord>(rng() % 4);
        Box box(lo, lo + side - 1, k);
        std::size_t total = box.points().size();
        std::size_t count = 1 + static_cast<std::size_t>(rng() % std::max<std::size_t>(2, total / 2));
        out.push_back({box, n, oracle::random_points(rng, box, count)});
    }
    return out;
}

std::set<Multidegree> as_set(const std::vector<Multidegree>& v) { return {v.begin(), v.end()}; }

// Fires rules in a random order until nothing changes.
std::set<Multidegree> shuffled_closure(std::set<Multidegree> s, int n, const Box& box, std::mt19937_64& rng) {
    std::vector<std::pair<Multidegree, std::size_t>> lines;
    for (const auto& p : box.points())
        for (std::size_t axis = 0; axis < box.k; ++axis)
            if (p[axis] == box.lo) lines.emplace_back(p, axis);
    bool changed = true;
    while (changed) {
        changed = false;
        std::shuffle(lines.begin(), lines.end(), rng);
        for (const auto& [base, axis] : lines) {
            std::vector<Coord> c(base.coords().begin(), base.coords().end());
            std::vector<Coord> starts;
            for (Coord t = box.lo; t + n <= box.hi; ++t) starts.push_back(t);
            std::shuffle(starts.begin(), starts.end(), rng);
            for (Coord st : starts) {
                bool full = true;
                for (Coord t = st; t <= st + n && full; ++t) {
                    c[axis] = t;
                    full = s.count(Multidegree(c)) > 0;
                }
                if (!full) continue;
                for (Coord t = box.lo; t <= box.hi; ++t) {
                    c[axis] = t;
                    changed |= s.insert(Multidegree(c)).second;
                }
                break;
            }
        }
    }
    return s;
}

}  // namespace

TEST(Closure, WindowRuleOnALine) {
    Box box(-3, 5, 1);
    auto st = close({{0}, {1}, {2}}, 2, box);
    EXPECT_EQ(st.member_count(), 9u);
    ASSERT_EQ(st.trace().size(), 1u);
    EXPECT_EQ(st.trace()[0].window_start, 0);
    EXPECT_EQ(st.trace()[0].added.size(), 6u);
    EXPECT_EQ(close({{0}, {2}}, 2, box).member_count(), 2u);
}

TEST(Closure, SeedOutsideBoxRejected) {
    EXPECT_THROW(close({{9, 9}}, 1, Box(0, 3, 2)), std::invalid_argument);
    EXPECT_THROW(close({{0, 0}}, 0, Box(0, 3, 2)), std::invalid_argument);
}

TEST(Closure, AgreesWithNaiveFixedPoint) {
    for (const auto& c : random_cases()) {
        auto st = close(c.seed, c.n, c.box);
        ASSERT_EQ(as_set(st.members()), oracle::closure(as_set(c.seed), c.n, c.box));
    }
}

TEST(Closure, Extensive) {
    for (const auto& c : random_cases()) {
        auto st = close(c.seed, c.n, c.box);
        for (const auto& p : c.seed) ASSERT_TRUE(st.contains(p));
    }
}

TEST(Closure, Monotone) {
    std::mt19937_64 rng(5);
    for (const auto& c : random_cases()) {
        auto small = c.seed;
        small.resize((small.size() + 1) / 2);
        auto big = c.seed;
        auto extra = oracle::random_points(rng, c.box, 3);
        big.insert(big.end(), extra.begin(), extra.end());
        auto a = close(small, c.n, c.box);
        auto b = close(big, c.n, c.box);
        for (const auto& p : a.members()) ASSERT_TRUE(b.contains(p));
    }
}

TEST(Closure, Idempotent) {
    for (const auto& c : random_cases()) {
        auto once = close(c.seed, c.n, c.box);
        auto twice = close(once.members(), c.n, c.box);
        ASSERT_TRUE(twice.same_members(once));
        ASSERT_TRUE(twice.trace().empty());
    }
}

TEST(Closure, OrderIndependent) {
    std::mt19937_64 rng(99);
    for (const auto& c : random_cases()) {
        auto st = as_set(close(c.seed, c.n, c.box).members());
        for (int rep = 0; rep < 2; ++rep) ASSERT_EQ(shuffled_closure(as_set(c.seed), c.n, c.box, rng), st);
    }
}

TEST(Closure, WindowProductGeneratesBox) {
    // A full product of windows [s_i, s_i + n] generates the whole box.
    std::mt19937_64 rng(3);
    for (int i = 0; i < 60; ++i) {
        std::size_t k = 1 + static_cast<std::size_t>(rng() % 3);
        int n = 1 + static_cast<int>(rng() % 2);
        Box box(-2, 5, k);
        std::vector<Coord> s(k);
        for (auto& x : s) x = -2 + static_cast<Coord>(rng() % static_cast<std::uint64_t>(8 - n));
        std::vector<Multidegree> seed;
        for (const auto& off : Box(0, n, k).points()) {
            std::vector<Coord> c(k);
            for (std::size_t j = 0; j < k; ++j) c[j] = s[j] + off[j];
            seed.emplace_back(c);
        }
        auto st = close(seed, n, box);
        ASSERT_EQ(st.member_count(), box.points().size());
        // Any missing point of the product blocks this.
        seed.erase(seed.begin() + static_cast<long>(rng() % seed.size()));
        if (k == 1) {
            ASSERT_LT(close(seed, n, box).member_count(), box.points().size());
        }
    }
}

TEST(Closure, TraceIsCanonicalAndDeterministic) {
    for (const auto& c : random_cases()) {
        auto a = close(c.seed, c.n, c.box);
        auto reversed = c.seed;
        std::reverse(reversed.begin(), reversed.end());
        auto b = close(reversed, c.n, c.box);
        ASSERT_EQ(a.trace(), b.trace());
    }
}

TEST(Replay, ReproducesClosure) {
    for (const auto& c : random_cases()) {
        auto st = close(c.seed, c.n, c.box);
        auto re = replay_trace(c.seed, c.n, c.box, st.trace());
        ASSERT_TRUE(re.same_members(st));
    }
}

TEST(Replay, RejectsTamperedTraces) {
    auto x = x32_minimal();
    auto seed = x.flattened();
    Box box = closure_box(3, 2, 2, seed);
    auto st = close(seed, 2, box);
    ASSERT_GT(st.trace().size(), 3u);

    auto skipped = st.trace();
    skipped.erase(skipped.begin());
    bool threw = false;
    try {
        replay_trace(seed, 2, box, skipped);
    } catch (const TraceError&) {
        threw = true;
    }
    EXPECT_TRUE(threw || !replay_trace(seed, 2, box, skipped).same_members(st));

    auto moved = st.trace();
    moved[0].window_start += 1;
    moved[0].fixed[0] = box.hi;
    EXPECT_THROW(replay_trace(seed, 2, box, moved), TraceError);

    auto off_line = st.trace();
    auto p = off_line[0].added[0];
    std::vector<Coord> c(p.coords().begin(), p.coords().end());
    c[(off_line[0].axis + 1) % 3] += 1;
    off_line[0].added[0] = Multidegree(c);
    EXPECT_THROW(replay_trace(seed, 2, box, off_line), TraceError);

    auto bad_axis = st.trace();
    bad_axis[0].axis = 7;
    EXPECT_THROW(replay_trace(seed, 2, box, bad_axis), TraceError);
}

TEST(Fullness, Verdicts) {
    auto v = verify_fullness(x32_minimal(), 2);
    EXPECT_EQ(v.status, FullnessStatus::full);
    EXPECT_EQ(v.bundle_count, 27u);
    EXPECT_EQ(v.expected_count, 27u);
    ASSERT_TRUE(v.closure);
    EXPECT_EQ(v.closure->box(), Box(-2, 4, 3));

    auto r = verify_fullness(x3n_rectangular(2), 3);
    EXPECT_EQ(r.status, FullnessStatus::not_full_by_rank);
    EXPECT_FALSE(r.closure);

    // Right count, nothing to grow from.
    std::vector<Multidegree> spread;
    for (int i = 0; i < 4; ++i) spread.push_back(Multidegree{3 * i, 0});
    auto inc = verify_fullness_points(2, 1, spread, 2);
    EXPECT_EQ(inc.status, FullnessStatus::inconclusive);
    EXPECT_FALSE(inc.missing_sample.empty());
    EXPECT_EQ(to_string(FullnessStatus::not_full_by_rank), "NOT_FULL_BY_RANK");
}

TEST(Fullness, MarginZeroStillDecides) {
    // The window box [0, n]^k is enough for the full box collection itself.
    std::vector<Multidegree> cube = Box(0, 2, 2).points();
    EXPECT_EQ(verify_fullness_points(2, 2, cube, 0).status, FullnessStatus::full);
    EXPECT_THROW(closure_box(2, 2, -1, cube), std::invalid_argument);
}

TEST(Fullness, BoxWidensToSeed) {
    auto b = closure_box(2, 1, 1, {Multidegree{7, -5}});
    EXPECT_EQ(b.lo, -5);
    EXPECT_EQ(b.hi, 7);
}

TEST(Residual, X32) {
    auto rep = residual_check(rectangular_part(x32_minimal()), x32_residual(), 3);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.battery_pairs, (std::vector<std::size_t>{42, 42, 42}));
    EXPECT_EQ(rep.verdict.bundle_count, 27u);
}

TEST(Residual, WrongResidualFails) {
    auto rep = residual_check(rectangular_part(x32_minimal()), OrbitSet::from_points(3, {{2, 0, 0}}), 3);
    EXPECT_FALSE(rep.ok());
    EXPECT_FALSE(rep.violations.empty());
}
