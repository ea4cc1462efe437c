#include <gtest/gtest.h>

#include "generators.hpp"
#include "lcatile/region.hpp"

using namespace lcatile;
using gen::q;

TEST(Region, UnionMergesAdjacentIntervals) {
    EXPECT_EQ(unite(gen::interval(0, 1), gen::interval(1, 2)), gen::interval(0, 2));
}

TEST(Region, IntersectAndSubtract) {
    EXPECT_EQ(intersect(gen::interval(0, 1), gen::interval(q(1, 2), q(3, 2))), gen::interval(q(1, 2), 1));
    EXPECT_EQ(subtract(gen::interval(0, 2), gen::interval(q(1, 2), 1)), gen::intervals({{0, q(1, 2)}, {1, 2}}));
}

TEST(Region, RejectsMalformedCells) {
    auto R = gen::real_line();
    EXPECT_THROW(Region(R, {Cell{{{q(1), q(1)}}, {}, {}, {}}}), InputError);
    EXPECT_THROW(Region(R, {Cell{{}, {}, {}, {}}}), ArityMismatch);
    auto T = GroupSignature{0, 0, 1, {}, Side::frequency};
    EXPECT_THROW(Region(T, {Cell{{}, {}, {{q(1, 2), q(3, 2)}}, {}}}), InputError);
    EXPECT_THROW(Region(gen::cyclic(4), {Cell{{}, {}, {}, {Integer(4)}}}), InputError);
    EXPECT_THROW(unite(gen::interval(0, 1), gen::points(4, {0})), SignatureMismatch);
}

TEST(Region, TranslateReferenceValues) {
    EXPECT_EQ(translate(gen::interval(0, 1), gen::real_point(q(5, 4))), gen::interval(q(5, 4), q(9, 4)));
    auto T = GroupSignature{0, 0, 1, {}, Side::frequency};
    Region arc(T, {Cell{{}, {}, {{q(3, 4), q(1)}}, {}}});
    Region want(T, {Cell{{}, {}, {{q(1, 4), q(1, 2)}}, {}}});
    EXPECT_EQ(translate(arc, GroupElement::make(T, {}, {}, {q(1, 2)}, {})), want);
    auto Z4 = gen::cyclic(4);
    EXPECT_EQ(translate(gen::points(4, {0}), GroupElement::make(Z4, {}, {}, {}, {Integer(3)})), gen::points(4, {3}));
}

TEST(Region, TorusArcWrapsAndRemerges) {
    auto T = GroupSignature{0, 0, 1, {}, Side::frequency};
    Region full(T, {Cell{{}, {}, {{q(0), q(1)}}, {}}});
    EXPECT_EQ(translate(full, GroupElement::make(T, {}, {}, {q(1, 3)}, {})), full);
    Region arc(T, {Cell{{}, {}, {{q(1, 2), q(1)}}, {}}});
    auto moved = translate(arc, GroupElement::make(T, {}, {}, {q(1, 4)}, {}));
    EXPECT_EQ(moved.cells().size(), 2u);
    EXPECT_EQ(haar_measure(moved), q(1, 2));
}

TEST(Region, RefineBreakpointsReferenceValues) {
    auto cells = refine_breakpoints({gen::interval(0, 1), gen::interval(q(1, 2), q(3, 2))});
    ASSERT_EQ(cells.size(), 3u);
    EXPECT_EQ(cells[0].real[0], (Interval{0, q(1, 2)}));
    EXPECT_EQ(cells[1].real[0], (Interval{q(1, 2), 1}));
    EXPECT_EQ(cells[2].real[0], (Interval{1, q(3, 2)}));

    auto one = refine_breakpoints({gen::interval(0, 1)});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].real[0], (Interval{0, 1}));

    auto omega = gen::intervals({{0, 1}, {q(5, 4), q(9, 4)}});
    auto D = gen::interval(0, 1);
    auto a = intersect(translate(omega, gen::real_point(-2)), D);
    auto b = intersect(translate(omega, gen::real_point(-1)), D);
    auto grid = refine_breakpoints({D, a, b});
    std::vector<Rational> cuts;
    for (const auto& c : grid) cuts.push_back(c.real[0].lo);
    cuts.push_back(grid.back().real[0].hi);
    EXPECT_EQ(cuts, (std::vector<Rational>{0, q(1, 4), 1}));
}

TEST(RegionProperties, BooleanIdentitiesOnRandomRegions) {
    gen::Source src(21);
    for (int trial = 0; trial < 300; ++trial) {
        auto s = src.signature();
        auto R = src.region(s), S = src.region(s);
        auto u = unite(R, S), i = intersect(R, S);
        EXPECT_EQ(haar_measure(R) + haar_measure(S), haar_measure(u) + haar_measure(i));
        EXPECT_EQ(subtract(R, subtract(R, S)), i);
        EXPECT_EQ(unite(subtract(R, S), i), R);
        EXPECT_TRUE(intersect(subtract(R, S), S).empty());
        EXPECT_EQ(unite(R, S), unite(S, R));
        EXPECT_EQ(Region(s, R.cells()), R);  // canonical form is idempotent
        auto g = src.element(s);
        auto moved = translate(R, g);
        EXPECT_EQ(haar_measure(moved), haar_measure(R));
        EXPECT_EQ(translate(moved, -g), R);
    }
}

TEST(RegionProperties, RefinementPartitionsEveryInput) {
    gen::Source src(22);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = src.signature();
        std::vector<Region> rs{src.region(s), src.region(s), src.region(s)};
        auto cells = refine_breakpoints(rs);
        Region all(s, cells);
        Rational total = 0;
        for (const auto& c : cells) total += haar_measure(c, s);
        EXPECT_EQ(total, haar_measure(all));  // cells are disjoint
        EXPECT_EQ(all, unite(unite(rs[0], rs[1]), rs[2]));
        for (const auto& r : rs)
            for (const auto& c : cells) {
                Region cr(s, {c});
                auto inside = intersect(cr, r);
                EXPECT_TRUE(inside.empty() || inside == cr);
            }
    }
}

TEST(RegionProperties, CanonicalFormIgnoresHowTheSetWasCut) {
    gen::Source src(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = src.signature();
        auto R = src.region(s, 4);
        auto pieces = refine_breakpoints({R, src.region(s)});
        std::vector<Cell> kept;
        for (const auto& c : pieces)
            if (!intersect(Region(s, {c}), R).empty()) kept.push_back(c);
        EXPECT_EQ(Region(s, kept), R);
    }
}
