#include <gtest/gtest.h>

#include "generators.hpp"
#include "lcatile/tiling.hpp"

using namespace lcatile;
using gen::q;

namespace {

Region two_piece() { return gen::intervals({{0, 1}, {q(5, 4), q(9, 4)}}); }

std::vector<Rational> reals(const std::vector<GroupElement>& v) {
    std::vector<Rational> out;
    for (const auto& g : v) out.push_back(g.real()[0]);
    return out;
}

// [0,1) u [n - 2^-(n-2), n - 2^-(n-1)) for n = 2..N, built independently of the oracle module
Region staircase(long N) {
    std::vector<std::pair<Rational, Rational>> parts{{0, 1}};
    for (long n = 2; n <= N; ++n) parts.emplace_back(Rational(n) - pow2(-(n - 2)), Rational(n) - pow2(-(n - 1)));
    return gen::intervals(parts);
}

}  // namespace

TEST(RelevantOffsets, ReferenceValues) {
    auto Z = gen::integer_lattice();
    EXPECT_EQ(reals(relevant_offsets(gen::interval(0, 2), Z, gen::interval(0, 1))), (std::vector<Rational>{0, 1}));
    EXPECT_EQ(reals(relevant_offsets(two_piece(), Z, gen::interval(0, 1))), (std::vector<Rational>{0, 1, 2}));
    EXPECT_EQ(reals(relevant_offsets(gen::interval(0, 1), gen::integer_lattice(2), gen::interval(0, 2))),
              (std::vector<Rational>{0}));
}

TEST(MultiplicityProfile, ReferenceValues) {
    auto Z = gen::integer_lattice();
    EXPECT_EQ(multiplicity_profile(gen::interval(0, 1), Z), (MultiplicityProfile{{1, q(1)}}));
    EXPECT_EQ(multiplicity_profile(gen::interval(0, 2), Z), (MultiplicityProfile{{2, q(1)}}));
    for (long N : {5, 10, 20}) {
        auto p = multiplicity_profile(staircase(N), Z);
        EXPECT_EQ(p, (MultiplicityProfile{{2, 1 - pow2(-(N - 1))}, {1, pow2(-(N - 1))}})) << N;
    }
    EXPECT_EQ(multiplicity_profile(gen::interval(0, q(3, 2)), Z), (MultiplicityProfile{{1, q(1, 2)}, {2, q(1, 2)}}));
}

TEST(IsKTiling, ReferenceValues) {
    auto Z = gen::integer_lattice();
    EXPECT_EQ(is_k_tiling(gen::interval(0, 2), Z), 2);
    EXPECT_FALSE(is_k_tiling(gen::interval(0, q(3, 2)), Z));
    EXPECT_EQ(is_k_tiling(two_piece(), Z), 2);
    EXPECT_FALSE(is_k_tiling(Region(gen::real_line()), Z));
}

TEST(DecomposeTiles, ReferenceValues) {
    auto Z = gen::integer_lattice();
    auto a = decompose_tiles(gen::interval(0, 2), Z);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0], gen::interval(0, 1));
    EXPECT_EQ(a[1], gen::interval(1, 2));
    auto b = decompose_tiles(two_piece(), Z);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0], gen::interval(0, 1));
    EXPECT_EQ(b[1], gen::interval(q(5, 4), q(9, 4)));
    auto c = decompose_tiles(gen::interval(0, 1), Z);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], gen::interval(0, 1));
    EXPECT_THROW(decompose_tiles(gen::interval(0, q(3, 2)), Z), NotKTiling);
}

TEST(Configurations, ReferenceValues) {
    auto Z = gen::integer_lattice();
    auto a = configurations(gen::interval(0, 2), Z);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].cell.real[0], (Interval{0, 1}));
    EXPECT_EQ(reals(a[0].offsets), (std::vector<Rational>{0, 1}));

    auto b = configurations(two_piece(), Z);
    ASSERT_EQ(b.size(), 2u);
    // sorted by offset list: (0,1) before (0,2)
    EXPECT_EQ(b[0].cell.real[0], (Interval{q(1, 4), 1}));
    EXPECT_EQ(reals(b[0].offsets), (std::vector<Rational>{0, 1}));
    EXPECT_EQ(b[1].cell.real[0], (Interval{0, q(1, 4)}));
    EXPECT_EQ(reals(b[1].offsets), (std::vector<Rational>{0, 2}));
    EXPECT_THROW(configurations(gen::interval(0, q(3, 2)), Z), NotKTiling);
}

TEST(Configurations, StaircaseCellsFollowTheSetDefinition) {
    // piece n sits over [1 - 2^-(n-2), 1 - 2^-(n-1)) with offset n - 1
    auto configs = fiber_configurations(staircase(5), gen::integer_lattice());
    ASSERT_EQ(configs.size(), 5u);
    for (const auto& c : configs) {
        if (c.offsets.size() == 1) {
            EXPECT_EQ(c.cell.real[0], (Interval{1 - pow2(-4), 1}));  // deficient tail
            continue;
        }
        ASSERT_EQ(c.offsets.size(), 2u);
        long m = to_long(c.offsets[1].real()[0].get_num());
        long n = m + 1;
        EXPECT_EQ(c.cell.real[0], (Interval{1 - pow2(-(n - 2)), 1 - pow2(-(n - 1))}));
    }
}

namespace {

// Cut D into random pieces and move each by a random lattice vector.

}  // namespace

TEST(TilingProperties, DoubleCountingIdentity) {
    gen::Source src(31);
    for (int trial = 0; trial < 150; ++trial) {
        auto s = src.signature();
        auto omega = src.region(s, 3);
        auto L = dyadic_lattice(src.integer(0, 1), s);
        auto p = multiplicity_profile(omega, L);
        Rational total = 0, weighted = 0;
        for (const auto& [k, m] : p) {
            EXPECT_GT(m, 0);
            total += m;
            weighted += m * k;
        }
        EXPECT_EQ(total, L.covolume());
        EXPECT_EQ(weighted, haar_measure(omega));
    }
}

TEST(TilingProperties, OneTilesFromCutAndShiftedDomains) {
    gen::Source src(32);
    for (int trial = 0; trial < 60; ++trial) {
        auto s = src.signature();
        auto L = dyadic_lattice(src.integer(0, 1), s);
        auto tile = gen::one_tile(src, L);
        EXPECT_EQ(is_k_tiling(tile, L), 1);
    }
}

TEST(TilingProperties, ConfigurationsPartitionTheDomain) {
    gen::Source src(33);
    for (int trial = 0; trial < 80; ++trial) {
        auto s = src.signature();
        auto omega = src.region(s, 3);
        auto L = dyadic_lattice(0, s);
        auto configs = fiber_configurations(omega, L);
        std::vector<Cell> cells;
        Rational total = 0;
        for (const auto& c : configs) {
            cells.push_back(c.cell);
            total += haar_measure(c.cell, s);
            auto w = corner(c.cell, s);
            for (const auto& l : c.offsets) EXPECT_TRUE(contains(omega, w + l));
            EXPECT_TRUE(std::is_sorted(c.offsets.begin(), c.offsets.end()));
            Region cell(s, {c.cell});
            for (const auto& l : c.offsets) EXPECT_EQ(intersect(translate(cell, l), omega), translate(cell, l));
        }
        EXPECT_EQ(total, L.covolume());
        EXPECT_EQ(Region(s, cells), fundamental_domain(L));
    }
}

TEST(TilingProperties, BruteForceProfileOnCyclicGroups) {
    gen::Source src(34);
    for (int trial = 0; trial < 200; ++trial) {
        long N = src.integer(1, 24);
        std::vector<long> divisors;
        for (long d = 1; d <= N; ++d)
            if (N % d == 0) divisors.push_back(d);
        long step = divisors[static_cast<std::size_t>(src.integer(0, static_cast<long>(divisors.size()) - 1))];
        std::vector<long> xs;
        for (long x = 0; x < N; ++x)
            if (src.coin()) xs.push_back(x);
        auto omega = gen::points(N, xs);
        auto L = gen::cyclic_subgroup(N, step);
        MultiplicityProfile want;
        for (long w = 0; w < step; ++w) {
            long count = 0;
            for (long t = 0; t < N; t += step)
                for (long x : xs) count += (x == (w + t) % N);
            want[count] += make_rational(1, N);
        }
        EXPECT_EQ(multiplicity_profile(omega, L), want);
    }
}
