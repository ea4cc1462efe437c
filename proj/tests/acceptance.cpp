// One PASS/FAIL line per acceptance criterion. Tolerances and time limits are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "generators.hpp"
#include "lcatile.hpp"

using namespace lcatile;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass && secs <= limit_s;
    if (!pass) ++failures;
    std::printf("%s %s  %s: %s (%.2f s, limit %.0f s)\n", id, pass ? "PASS" : "FAIL", title, o.detail.c_str(), secs,
                limit_s);
    std::fflush(stdout);
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

GroupSignature line() { return GroupSignature{1, 0, 0, {}, Side::frequency}; }

Region intervals(const std::vector<std::pair<Rational, Rational>>& parts) {
    std::vector<Cell> cells;
    for (const auto& [a, b] : parts) cells.push_back(Cell{{Interval{a, b}}, {}, {}, {}});
    return Region(line(), cells);
}

Lattice Z() { return Lattice::from_generators(line(), {{Rational(1)}}, {}, {}, {}); }

std::vector<GroupElement> spatial(const std::vector<Rational>& xs) {
    std::vector<GroupElement> out;
    for (const auto& x : xs) out.push_back(GroupElement::make(dual_signature(line()), {x}, {}, {}, {}));
    return out;
}

Rational q(long a, long b = 1) { return make_rational(a, b); }

}  // namespace

int main() {
    criterion("AC1", "staircase truncation profiles", 1, [] {
        Rational prev = 1;
        for (long N : {5L, 10L, 20L}) {
            auto p = multiplicity_profile(omega0_truncation(N), Z());
            MultiplicityProfile want{{2, 1 - pow2(-(N - 1))}, {1, pow2(-(N - 1))}};
            if (p != want) return Outcome{false, "N=" + std::to_string(N) + " gave " + to_string(p)};
            if (p[1] >= prev) return Outcome{false, "deficiency does not shrink at N=" + std::to_string(N)};
            prev = p[1];
        }
        return Outcome{true, "exact {2 -> 1-2^-(N-1), 1 -> 2^-(N-1)} for N=5,10,20"};
    });

    criterion("AC2", "counterexample decay", 5, [] {
        auto half = counterexample_profile(100, q(1, 2));
        bool zero = half.rows[1].exact_zero && half.rows[1].sigma_min_sq == 0.0;
        auto golden = counterexample_profile(10000, (std::sqrt(5.0) - 1) / 2);
        double least = golden.rows.back().running_min;
        bool decays = least < 1e-4;
        return Outcome{zero && decays, std::string("gap 1/2 exact zero at n=2: ") + (zero ? "yes" : "no") +
                                           "; golden running min at 10^4 = " + num(least) + " (< 1e-4)"};
    });

    criterion("AC3", "fiber bounds vs brute-force Gram on Z_N", 30, [] {
        std::mt19937_64 rng(2024);
        double worst = 0;
        for (int i = 0; i < 200; ++i) {
            auto inst = random_finite_instance(rng, 64, 4);
            auto cert = riesz_bounds(inst.region(), inst.lattice(), inst.tuple());
            auto g = gram_bounds(inst);
            worst = std::max({worst, std::abs(cert.A - g.A), std::abs(cert.B - g.B)});
        }
        return Outcome{worst <= 1e-9, "200 instances, N <= 64, k <= 4, max deviation " + num(worst) + " (<= 1e-9)"};
    });

    criterion("AC4", "closed-form bounds", 5, [] {
        auto two = riesz_bounds(intervals({{0, 2}}), Z(), spatial({0, q(1, 2)}));
        auto split = riesz_bounds(intervals({{0, 1}, {q(5, 4), q(9, 4)}}), Z(), spatial({0, q(1, 4)}));
        auto g2 = gram_bounds(discretize(intervals({{0, 2}}), {0, q(1, 2)}, 2, 4));
        auto gs = gram_bounds(discretize(intervals({{0, 1}, {q(5, 4), q(9, 4)}}), {0, q(1, 4)}, 4, 4));
        const double lo = 2 - std::sqrt(2.0), hi = 2 + std::sqrt(2.0);
        bool ok = std::abs(two.A - 2) <= 1e-12 && std::abs(two.B - 2) <= 1e-12 && std::abs(g2.A - 2) <= 1e-12 &&
                  std::abs(g2.B - 2) <= 1e-12 && std::abs(split.A - lo) <= 1e-10 && std::abs(split.B - hi) <= 1e-10 &&
                  std::abs(gs.A - lo) <= 1e-10 && std::abs(gs.B - hi) <= 1e-10;
        return Outcome{ok, "[0,2): A=" + num(two.A) + " B=" + num(two.B) + "; two pieces: A=" + num(split.A) +
                               " B=" + num(split.B) + "; Z_N Gram agrees"};
    });

    criterion("AC5", "tile decomposition", 10, [] {
        gen::Source src(5);
        std::vector<GroupSignature> sigs{line(), GroupSignature{2, 0, 0, {}, Side::frequency},
                                         GroupSignature{1, 1, 0, {}, Side::frequency},
                                         GroupSignature{1, 0, 1, {3}, Side::frequency},
                                         GroupSignature{0, 1, 0, {4}, Side::frequency}};
        for (int i = 0; i < 100; ++i) {
            const auto& s = sigs[static_cast<std::size_t>(i) % sigs.size()];
            auto L = dyadic_lattice(src.integer(0, 1), s);
            long k = src.integer(1, 4);
            auto [omega, parts] = gen::k_tiling(src, L, k);
            auto tiles = decompose_tiles(omega, L);
            if (static_cast<long>(tiles.size()) != k) return Outcome{false, "wrong tile count at trial " + std::to_string(i)};
            Region all(s);
            for (const auto& t : tiles) {
                if (is_k_tiling(t, L) != 1) return Outcome{false, "a tile is not a 1-tile at trial " + std::to_string(i)};
                if (!intersect(all, t).empty()) return Outcome{false, "tiles overlap at trial " + std::to_string(i)};
                all = unite(all, t);
            }
            if (all != omega) return Outcome{false, "union differs at trial " + std::to_string(i)};
        }
        long checked = 0;
        for (long N = 1; N <= 10; ++N)
            for (long step = 1; step <= N; ++step) {
                if (N % step) continue;
                for (long mask = 1; mask < (1L << N); ++mask) {
                    FiniteInstance inst{N, {}, step, {}};
                    for (long x = 0; x < N; ++x)
                        if (mask >> x & 1) inst.omega.push_back(x);
                    if (!is_k_tiling(inst.region(), inst.lattice())) continue;
                    ++checked;
                    for (const auto& t : decompose_tiles(inst.region(), inst.lattice())) {
                        std::vector<int> hits(static_cast<std::size_t>(step), 0);
                        for (const auto& c : t.cells()) ++hits[static_cast<std::size_t>(to_long(c.finite[0]) % step)];
                        for (int h : hits)
                            if (h != 1) return Outcome{false, "Z_" + std::to_string(N) + " tile misses a coset"};
                    }
                }
            }
        return Outcome{true, "100 random k-tilings exact; " + std::to_string(checked) +
                                 " multi-tiling subsets of Z_N (N <= 10) checked exhaustively"};
    });

    for (long e : {4L, 8L, 16L}) {
        std::string id = "AC6";
        std::string title = "near-critical synthesis on [0,1], eps=1/" + std::to_string(e);
        criterion(id.c_str(), title.c_str(), 30, [e] {
            Rational eps = make_rational(1, e);
            auto omega = intervals({{0, 1}});
            auto S = sampling_set(omega, eps);
            auto I = interpolation_set(omega, eps);
            bool ok = S.density <= 1 + eps && S.certificate.A > 0 && S.density == haar_measure(S.omega_eps) &&
                      I.density >= 1 - eps && I.certificate.A > 0 && I.density == haar_measure(I.omega_eps);
            return Outcome{ok, "sampling D=" + S.density.get_str() + " A=" + num(S.certificate.A) +
                                   "; interpolation D=" + I.density.get_str() + " A=" + num(I.certificate.A) +
                                   "; D = m(Omega_eps) in both"};
        });
    }

    criterion("AC7", "universal tuple success rate", 60, [] {
        std::vector<TilingInstance> two{{intervals({{0, 2}}), Z()},
                                        {intervals({{0, 1}, {q(5, 4), q(9, 4)}}), Z()},
                                        {intervals({{0, q(1, 2)}, {1, 2}, {q(5, 2), 3}}), Z()}};
        std::vector<TilingInstance> three{{intervals({{0, 3}}), Z()},
                                          {intervals({{0, 1}, {q(5, 4), q(9, 4)}, {3, 4}}), Z()},
                                          {intervals({{0, 1}, {q(3, 2), q(5, 2)}, {q(10, 3), q(13, 3)}}), Z()}};
        std::string detail;
        bool ok = true;
        for (auto [k, family] : {std::pair{2L, &two}, std::pair{3L, &three}}) {
            int hits = 0;
            for (std::uint64_t seed = 0; seed < 1000; ++seed) {
                try {
                    sample_universal_tuple(Z(), static_cast<std::size_t>(k), *family, 1e-8, 1, seed);
                    ++hits;
                } catch (const TriesExhausted&) {
                }
            }
            ok = ok && hits >= 990;
            detail += (detail.empty() ? "" : "; ") + std::string("k=") + std::to_string(k) + ": " +
                      std::to_string(hits) + "/1000";
        }
        return Outcome{ok, detail + " first draws certified (>= 99%, tol 1e-8)"};
    });

    criterion("AC8", "quotient lift preserves Gram bounds", 5, [] {
        std::mt19937_64 rng(88);
        double worst = 0;
        int lifted = 0;
        for (int i = 0; i < 100; ++i) {
            auto base = random_finite_instance(rng, 16, 3);
            std::vector<long> seen;
            bool distinct = true;
            for (long a : base.a) {
                long r = a % (base.N / base.q);
                distinct = distinct && std::find(seen.begin(), seen.end(), r) == seen.end();
                seen.push_back(r);
            }
            if (!distinct) continue;
            auto gb = gram_bounds(base);
            for (long s : {2L, 4L}) {
                QuotientMap K(GroupSignature{0, 0, 0, {base.N * s}, Side::frequency}, {}, {s});
                auto sys = lift_basis(K, base.region(), CosetUnion::make(annihilator(base.lattice()), base.tuple(), Role::basis));
                FiniteInstance up{base.N * s, {}, base.q, {}};
                for (const auto& c : sys.preimage.cells()) up.omega.push_back(to_long(c.finite[0]));
                for (const auto& a : sys.system.shifts) up.a.push_back(to_long(a.finite()[0]));
                if (annihilator(sys.system.H) != up.lattice()) return Outcome{false, "lifted lattice mismatch"};
                auto gu = gram_bounds(up);
                worst = std::max({worst, std::abs(gu.A_raw - gb.A_raw), std::abs(gu.B_raw - gb.B_raw)});
                ++lifted;
            }
        }
        return Outcome{worst <= 1e-9, std::to_string(lifted) + " lifts with |K| in {2,4}, max deviation " + num(worst) +
                                          " (<= 1e-9)"};
    });

    std::printf("%s\n", failures ? "acceptance: FAILED" : "acceptance: all criteria passed");
    return failures ? 1 : 0;
}
