#include <gtest/gtest.h>

#include "lefkit/lattice.hpp"

using namespace lefkit;

TEST(Multidegree, ParseAndPrint) {
    EXPECT_EQ(parse_multidegree("(2,1,0)"), (Multidegree{2, 1, 0}));
    EXPECT_EQ(parse_multidegree(" ( 1 , -1 ,0 ) "), (Multidegree{1, -1, 0}));
    EXPECT_EQ(parse_multidegree("(+3)"), (Multidegree{3}));
    EXPECT_EQ(to_string(Multidegree{1, -1, 0}), "(1,-1,0)");
    for (const char* bad : {"", "()", "(1,)", "1,2", "(1;2)", "(1,2))", "(a)", "(1 2)", "(99999999999999999999)"})
        EXPECT_THROW(parse_multidegree(bad), ParseError) << bad;
}

TEST(Multidegree, CanonicalRep) {
    EXPECT_EQ(canonical_rep(Multidegree{0, 2, 1}), (Multidegree{2, 1, 0}));
    EXPECT_TRUE(is_canonical(Multidegree{2, 2, 0}));
    EXPECT_FALSE(is_canonical(Multidegree{0, 1}));
}

TEST(Multidegree, TwistAndOverflow) {
    EXPECT_EQ(twist(Multidegree{1, 0}, 2), (Multidegree{3, 2}));
    EXPECT_THROW(twist(Multidegree{INT64_MAX}, 1), ArithmeticError);
}

TEST(Multidegree, LexCompare) {
    EXPECT_EQ(lex_compare(Multidegree{1, 0}, Multidegree{0, 5}), std::strong_ordering::greater);
    EXPECT_EQ(lex_compare(Multidegree{1, 0}, Multidegree{1, 0}), std::strong_ordering::equal);
    EXPECT_THROW(lex_compare(Multidegree{1}, Multidegree{1, 0}), ArityMismatch);
}

TEST(Orbit, SizesAndShapes) {
    EXPECT_EQ(orbit_of(Multidegree{1, 0, 0}).elements.size(), 3u);
    EXPECT_EQ(orbit_of(Multidegree{2, 1, 0}).elements.size(), 6u);
    EXPECT_EQ(orbit_of(Multidegree{0, 0, 0}).elements.size(), 1u);
    EXPECT_EQ(stabilizer_shape(Multidegree{1, 0, 0}), Partition({2, 1}));
    EXPECT_EQ(stabilizer_shape(Multidegree{3, 1, 3, 1}), Partition({2, 2}));
    EXPECT_EQ(orbit_size_for_shape(Partition({2, 2})), 6u);
    auto o = orbit_of(Multidegree{0, 1, 0});
    EXPECT_EQ(o.rep, (Multidegree{1, 0, 0}));
    std::vector<Multidegree> want{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
    EXPECT_EQ(o.elements, want);
}

TEST(Box, PointsInLexOrder) {
    Box b(-1, 1, 2);
    auto pts = b.points();
    ASSERT_EQ(pts.size(), 9u);
    EXPECT_EQ(pts.front(), (Multidegree{-1, -1}));
    EXPECT_EQ(pts[1], (Multidegree{-1, 0}));
    EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
    EXPECT_TRUE(b.contains(Multidegree{0, 1}));
    EXPECT_FALSE(b.contains(Multidegree{0, 2}));
    EXPECT_FALSE(b.contains(Multidegree{0}));
    EXPECT_THROW(Box(2, 1, 2), std::invalid_argument);
}

TEST(OrbitSet, NormalizesAndFlattens) {
    auto s = OrbitSet::from_points(3, {{0, 1, 0}, {0, 0, 0}, {1, 0, 0}});
    std::vector<Multidegree> reps{{0, 0, 0}, {1, 0, 0}};
    EXPECT_EQ(s.reps(), reps);
    EXPECT_EQ(s.bundle_count(), 4u);
    std::vector<Multidegree> bundles{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
    EXPECT_EQ(s.bundles(), bundles);
    EXPECT_TRUE(s.contains_orbit(Multidegree{0, 0, 1}));
    EXPECT_THROW(OrbitSet::from_points(2, {{1, 0, 0}}), ArityMismatch);
}

TEST(OrbitSet, SetOperations) {
    auto s = OrbitSet::from_points(2, {{0, 0}, {1, 0}});
    auto t = s.with(Multidegree{1, 1});
    EXPECT_TRUE(s.is_subset_of(t));
    EXPECT_FALSE(t.is_subset_of(s));
    EXPECT_EQ(t.without(Multidegree{1, 1}), s);
    EXPECT_EQ(s.twisted(1).reps(), (std::vector<Multidegree>{{1, 1}, {2, 1}}));
}

TEST(OrbitSet, FlattenedOrderMatchesDefinition) {
    // Orbits by canonical rep ascending, elements ascending inside each orbit.
    auto s = OrbitSet::from_points(2, {{2, 0}, {1, 1}});
    std::vector<Multidegree> want{{1, 1}, {0, 2}, {2, 0}};
    EXPECT_EQ(s.bundles(), want);
}
