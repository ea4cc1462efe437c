#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "generators.hpp"
#include "lcatile/oracle.hpp"
#include "lcatile/riesz.hpp"

using namespace lcatile;
using gen::q;

namespace {

std::vector<GroupElement> spatial(std::initializer_list<Rational> xs) {
    std::vector<GroupElement> out;
    for (const auto& x : xs) out.push_back(gen::real_point(x, Side::spatial));
    return out;
}

CosetUnion integer_cosets(std::initializer_list<Rational> xs) {
    auto S = GroupSignature{1, 0, 0, {}, Side::spatial};
    return CosetUnion::make(Lattice::from_generators(S, {{Rational(1)}}, {}, {}, {}), spatial(xs), Role::basis);
}

}  // namespace

TEST(GramBounds, ReferenceValues) {
    FiniteInstance half{16, {0, 1, 2, 3, 4, 5, 6, 7}, 8, {3}};
    auto g = gram_bounds(half);
    EXPECT_NEAR(g.A, 1, 1e-12);
    EXPECT_NEAR(g.B, 1, 1e-12);
    EXPECT_EQ(g.size, 8u);
    auto cert = riesz_bounds(half.region(), half.lattice(), half.tuple());
    EXPECT_NEAR(cert.A, g.A, 1e-12);

    auto inst = discretize(gen::interval(0, 2), {0, q(1, 2)}, 2, 4);
    EXPECT_EQ(inst.N, 8);
    EXPECT_EQ(inst.q, 2);
    EXPECT_EQ(inst.omega, (std::vector<long>{0, 1, 2, 3}));
    EXPECT_EQ(inst.a, (std::vector<long>{0, 2}));
    auto two = gram_bounds(inst);
    EXPECT_NEAR(two.A, 2, 1e-12);
    EXPECT_NEAR(two.B, 2, 1e-12);

    auto split = discretize(gen::intervals({{0, 1}, {q(5, 4), q(9, 4)}}), {0, q(1, 4)}, 4, 4);
    auto s = gram_bounds(split);
    EXPECT_NEAR(s.A, 2 - std::sqrt(2.0), 1e-10);
    EXPECT_NEAR(s.B, 2 + std::sqrt(2.0), 1e-10);
}

TEST(GramBounds, RejectsBadInstances) {
    EXPECT_THROW(gram_bounds(FiniteInstance{6, {0}, 4, {0}}), InputError);
    EXPECT_THROW(gram_bounds(FiniteInstance{6, {0, 0}, 3, {0}}), InputError);
    EXPECT_THROW(discretize(gen::interval(0, q(1, 3)), {0}, 2, 2), InputError);
    EXPECT_THROW(discretize(gen::interval(0, 1), {q(1, 3)}, 2, 2), InputError);
    EXPECT_THROW(discretize(gen::interval(0, 3), {0}, 2, 2), InputError);
}

TEST(OracleProperties, BruteForceProfileMatchesTiling) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        FiniteInstance inst;
        inst.N = 1 + static_cast<long>(rng() % 24);
        std::vector<long> divisors;
        for (long d = 1; d <= inst.N; ++d)
            if (inst.N % d == 0) divisors.push_back(d);
        inst.q = divisors[rng() % divisors.size()];
        for (long x = 0; x < inst.N; ++x)
            if (rng() & 1) inst.omega.push_back(x);
        if (inst.omega.empty()) continue;
        EXPECT_EQ(brute_force_profile(inst), multiplicity_profile(inst.region(), inst.lattice()));
    }
}

TEST(OracleProperties, TilesHitEveryCosetOnceOnCyclicGroups) {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 200; ++trial) {
        auto inst = random_finite_instance(rng, 24, 4);
        auto tiles = decompose_tiles(inst.region(), inst.lattice());
        ASSERT_EQ(static_cast<long>(tiles.size()), static_cast<long>(inst.omega.size() / inst.q));
        Region all(inst.frequency());
        for (const auto& t : tiles) {
            std::vector<long> hits(static_cast<std::size_t>(inst.q), 0);
            for (const auto& c : t.cells()) ++hits[static_cast<std::size_t>(to_long(c.finite[0]) % inst.q)];
            for (long h : hits) EXPECT_EQ(h, 1);
            EXPECT_TRUE(intersect(all, t).empty());
            all = unite(all, t);
        }
        EXPECT_EQ(all, inst.region());
    }
}

TEST(OracleProperties, DiscretizationPreservesBounds) {
    gen::Source src(63);
    auto Z = gen::integer_lattice();
    for (int trial = 0; trial < 60; ++trial) {
        const long M = 4, L = 8;
        long k = src.integer(1, 3);
        std::vector<std::pair<Rational, Rational>> parts;
        // k one-tiles of Z cut at quarter points, shifted into [0, L)
        for (long j = 0; j < k; ++j) {
            long cut = src.integer(1, 3);
            parts.emplace_back(make_rational(0, 1) + 2 * j, make_rational(cut, M) + 2 * j);
            Rational t = src.integer(0, 1) + 2 * j;
            parts.emplace_back(make_rational(cut, M) + t, 1 + t);
        }
        Region omega(gen::real_line(), {});
        bool overlap = false;
        for (const auto& [a, b] : parts) {
            auto piece = gen::interval(a, b);
            overlap = overlap || !intersect(omega, piece).empty();
            omega = unite(omega, piece);
        }
        if (overlap) continue;
        std::vector<Rational> a;
        std::vector<GroupElement> shifts;
        std::set<long> used;
        while (static_cast<long>(a.size()) < k) {
            long x = src.integer(0, L - 1);
            if (!used.insert(x).second) continue;
            a.push_back(make_rational(x, L));
            shifts.push_back(gen::real_point(a.back(), Side::spatial));
        }
        auto cert = riesz_bounds(omega, Z, shifts);
        auto g = gram_bounds(discretize(omega, a, M, L));
        EXPECT_NEAR(cert.A, g.A, 1e-9);
        EXPECT_NEAR(cert.B, g.B, 1e-9);
    }
}

TEST(TruncatedGram, OrthonormalInterval) {
    auto est = truncated_gram_estimate(gen::interval(0, 1), integer_cosets({0}), 1 << 12, 64);
    EXPECT_EQ(est.functions, 129u);
    EXPECT_GE(est.A_est, 0.9);
    EXPECT_LE(est.B_est, 1.1);
}

TEST(TruncatedGram, TwoCosetsOnTheDoubleInterval) {
    auto est = truncated_gram_estimate(gen::interval(0, 2), integer_cosets({0, q(1, 2)}), 1 << 8, 16);
    EXPECT_NEAR(est.A_est, 2, 0.1);
    EXPECT_NEAR(est.B_est, 2, 0.1);
}

TEST(TruncatedGram, SingularTupleCollapses) {
    auto omega = gen::intervals({{0, 1}, {q(5, 4), q(9, 4)}});
    auto est = truncated_gram_estimate(omega, integer_cosets({0, q(1, 2)}), 1 << 8, 16);
    EXPECT_LT(est.A_est, 1e-3);
    EXPECT_THROW(truncated_gram_estimate(gen::interval(0, 1), integer_cosets({0}), 1, 8), InputError);
}

TEST(Counterexample, RationalGapsHitZero) {
    auto half = counterexample_profile(100, q(1, 2));
    ASSERT_EQ(half.rows.size(), 100u);
    EXPECT_FALSE(half.rows[0].exact_zero);
    EXPECT_NEAR(half.rows[0].sigma_min_sq, 2, 1e-12);
    EXPECT_TRUE(half.rows[1].exact_zero);
    EXPECT_EQ(half.rows[1].sigma_min_sq, 0.0);

    auto third = counterexample_profile(10, q(1, 3));
    EXPECT_FALSE(third.rows[1].exact_zero);
    EXPECT_TRUE(third.rows[2].exact_zero);

    EXPECT_THROW(counterexample_profile(10, q(2)), InputError);
    EXPECT_THROW(counterexample_profile(10, 3.0), InputError);
    EXPECT_THROW(counterexample_profile(0, q(1, 2)), InputError);
}

TEST(Counterexample, GoldenGapDecays) {
    auto p = counterexample_profile(10000, (std::sqrt(5.0) - 1) / 2);
    EXPECT_LT(p.rows.back().running_min, 1e-4);
    for (std::size_t i = 1; i < p.rows.size(); ++i) {
        EXPECT_LE(p.rows[i].running_min, p.rows[i - 1].running_min);
        EXPECT_EQ(p.rows[i].n, static_cast<long>(i) + 1);
        EXPECT_GT(p.rows[i].sigma_min_sq, 0);
    }
}

TEST(Counterexample, FiberMatricesOfTheStaircase) {
    auto omega = omega0_truncation(6);
    auto gap = q(1, 3);
    auto profile = counterexample_profile(6, gap);
    long seen = 0;
    for (const auto& c : fiber_configurations(omega, gen::integer_lattice())) {
        if (c.offsets.size() != 2) continue;  // the deficient tail of the truncation
        ++seen;
        auto f = fiber_matrix(c, spatial({0, gap}));
        long n = to_long(c.offsets[1].real()[0].get_num());
        EXPECT_NEAR(sigma_range(f).min_sq, profile.rows[static_cast<std::size_t>(n - 1)].sigma_min_sq, 1e-12);
    }
    EXPECT_EQ(seen, 5);
}

TEST(Staircase, TruncationProfiles) {
    auto Z = gen::integer_lattice();
    for (long N : {5L, 10L, 20L}) {
        auto p = multiplicity_profile(omega0_truncation(N), Z);
        EXPECT_EQ(p, (MultiplicityProfile{{2, 1 - pow2(-(N - 1))}, {1, pow2(-(N - 1))}}));
    }
    EXPECT_EQ(omega0_truncation(1), gen::interval(0, 1));
}
