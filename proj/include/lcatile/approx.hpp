#pragma once

// Dyadic approximation of regions from outside and inside, and the near-critical
// sampling and interpolation sets built on top of it.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coset_union.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "region.hpp"
#include "riesz.hpp"
#include "tiling.hpp"

namespace lcatile {

struct CubeCover {
    long n = 0;
    std::vector<GroupElement> centres;  // sorted, all in the generation-n lattice
    Region omega_eps;
    Rational gap = 0;  // excess for a cover, deficit for a pack
    std::vector<std::string> warnings;
};

namespace detail {

/// Smallest side of any cell along a continuous axis; nullopt when there is none.
inline std::optional<Rational> min_feature(const Region& r) {
    std::optional<Rational> best;
    auto take = [&](const Interval& iv) {
        if (!best || iv.length() < *best) best = iv.length();
    };
    for (const auto& c : r.cells()) {
        for (const auto& iv : c.real) take(iv);
        for (const auto& iv : c.torus) take(iv);
    }
    return best;
}

inline long start_generation(const Region& r) {
    auto f = min_feature(r);
    long n = 0;
    if (f)
        while (pow2(-n) > *f) ++n;
    return n;
}

/// Centres of all generation-n cubes meeting a cell.
inline std::vector<GroupElement> cubes_meeting(const Cell& c, const GroupSignature& sig, long n) {
    const Rational w = pow2(-n), half = w / 2;
    std::vector<std::vector<Rational>> real_axes, torus_axes;
    for (const auto& iv : c.real) {
        std::vector<Rational> xs;
        Integer lo = floor_of((iv.lo - half) / w) + 1, hi = ceil_of((iv.hi + half) / w) - 1;
        for (Integer j = lo; j <= hi; ++j) xs.push_back(Rational(j) * w);
        real_axes.push_back(std::move(xs));
    }
    const long count = to_long(Integer(1) << static_cast<mp_bitcnt_t>(n));
    for (const auto& iv : c.torus) {
        std::vector<Rational> ts;
        for (long j = 0; j < count; ++j) {
            Rational t = w * j;
            for (int s = -1; s <= 1; ++s)
                if (iv.lo - half < t + s && t + s < iv.hi + half) {
                    ts.push_back(t);
                    break;
                }
        }
        torus_axes.push_back(std::move(ts));
    }
    std::vector<GroupElement> out;
    RationalVector real(sig.d), torus(sig.l);
    auto rec = [&](auto&& self, std::size_t axis) -> void {
        if (axis == sig.d + sig.l) {
            out.push_back(GroupElement::make(sig, real, c.integer, torus, c.finite));
            return;
        }
        const auto& choices = axis < sig.d ? real_axes[axis] : torus_axes[axis - sig.d];
        for (const auto& x : choices) {
            (axis < sig.d ? real[axis] : torus[axis - sig.d]) = x;
            self(self, axis + 1);
        }
    };
    rec(rec, 0);
    return out;
}

inline std::vector<GroupElement> candidates(const Region& r, long n) {
    std::set<GroupElement> all;
    for (const auto& c : r.cells())
        for (auto& g : cubes_meeting(c, r.signature(), n)) all.insert(std::move(g));
    return {all.begin(), all.end()};
}

inline Region union_of_cubes(const GroupSignature& sig, long n, const std::vector<GroupElement>& centres) {
    std::vector<Cell> cells;
    for (const auto& g : centres) {
        auto cube = dyadic_cube(n, g);
        cells.insert(cells.end(), cube.cells().begin(), cube.cells().end());
    }
    return Region(sig, cells);
}

inline void require_bounded(const Region& r, const Rational& eps) {
    if (eps <= 0) throw InputError("epsilon must be positive");
    if (r.signature().side != Side::frequency) throw SignatureMismatch("regions live in the frequency group");
}

}  // namespace detail

/// Union of every generation-n cube meeting C, for the first n whose excess is at most eps.
inline CubeCover outer_cube_cover(const Region& C, const Rational& eps, long max_generation = 40) {
    detail::require_bounded(C, eps);
    const auto& sig = C.signature();
    if (C.empty()) return CubeCover{0, {}, Region(sig), 0, {"empty region"}};
    const Rational m = haar_measure(C);
    for (long n = detail::start_generation(C); n <= max_generation; ++n) {
        auto centres = detail::candidates(C, n);
        auto cover = detail::union_of_cubes(sig, n, centres);
        Rational excess = haar_measure(cover) - m;
        if (excess <= eps) return CubeCover{n, std::move(centres), std::move(cover), excess, {}};
    }
    throw InputError("no cover within epsilon up to generation " + std::to_string(max_generation));
}

/// Union of every generation-n cube inside Omega, for the first n whose deficit is at most eps.
inline CubeCover inner_cube_pack(const Region& omega, const Rational& eps, long max_generation = 40) {
    detail::require_bounded(omega, eps);
    const auto& sig = omega.signature();
    const Rational m = haar_measure(omega);
    CubeCover out{0, {}, Region(sig), m, {}};
    if (!omega.empty()) {
        bool found = false;
        for (long n = detail::start_generation(omega); n <= max_generation && !found; ++n) {
            std::vector<GroupElement> inside;
            for (const auto& g : detail::candidates(omega, n))
                if (subtract(dyadic_cube(n, g), omega).empty()) inside.push_back(g);
            auto pack = detail::union_of_cubes(sig, n, inside);
            Rational deficit = m - haar_measure(pack);
            if (deficit <= eps) {
                out = CubeCover{n, std::move(inside), std::move(pack), deficit, {}};
                found = true;
            }
        }
        if (!found) throw InputError("no pack within epsilon up to generation " + std::to_string(max_generation));
    }
    if (out.centres.empty()) out.warnings.push_back("epsilon is at least the measure of the region; the pack is empty");
    return out;
}

struct SynthesisOptions {
    double tol = 1e-8;
    std::uint64_t seed = 0;
    long max_tries = 1000;
    long max_generation = 40;
    std::optional<QuotientMap> quotient;  // finite K; the region must be K-invariant
};

struct Synthesis {
    CubeCover cover;        // in the quotient when K is given
    Region omega_eps;       // in the ambient group
    Lattice lambda;         // Omega_eps k-tiles with lambda
    CosetUnion J;
    Rational density;
    UniversalTuple tuple;   // shifts found for the cube union (in the quotient when K is given)
    RieszCertificate certificate;
};

namespace detail {

inline Synthesis synthesize(const CubeCover& cover, Role role, const SynthesisOptions& opt,
                            const std::optional<QuotientMap>& K) {
    if (cover.centres.empty())
        throw InputError("the " + std::string(role == Role::sampling ? "cover" : "pack") +
                         " is empty; decrease epsilon");
    const auto& sig = cover.omega_eps.signature();
    Lattice lambda = dyadic_lattice(cover.n, sig);
    auto tuple = sample_universal_tuple(lambda, cover.centres.size(), {{cover.omega_eps, lambda}}, opt.tol,
                                       opt.max_tries, opt.seed);
    auto base = CosetUnion::make(annihilator(lambda), tuple.points, role);
    Synthesis s{cover, cover.omega_eps, lambda, base, 0, tuple, tuple.certificates.front()};
    if (K) {
        auto lifted = lift_basis(*K, cover.omega_eps, base);
        s.omega_eps = lifted.preimage;
        s.J = lifted.system;
        s.lambda = annihilator(s.J.H);
        s.certificate = riesz_bounds(s.omega_eps, s.lambda, s.J.shifts);
    }
    s.density = density(s.J);
    return s;
}

inline Region in_quotient(const Region& omega, const std::optional<QuotientMap>& K) {
    if (!K) return omega;
    if (!K->is_invariant(omega)) throw InputError("region is not invariant under K");
    return K->image(omega);
}

}  // namespace detail

/// J_eps = U (a_j + H) from the outer cover: a Riesz basis for the cover, hence a frame for Omega,
/// with density exactly the measure of the cover.
inline Synthesis sampling_set(const Region& omega, const Rational& eps, const SynthesisOptions& opt = {}) {
    auto base = detail::in_quotient(omega, opt.quotient);
    auto cover = outer_cube_cover(base, eps, opt.max_generation);
    return detail::synthesize(cover, Role::sampling, opt, opt.quotient);
}

/// J^eps from the inner pack: a Riesz basis for the pack, hence a Riesz sequence for Omega.
inline Synthesis interpolation_set(const Region& omega, const Rational& eps, const SynthesisOptions& opt = {}) {
    auto base = detail::in_quotient(omega, opt.quotient);
    auto pack = inner_cube_pack(base, eps, opt.max_generation);
    return detail::synthesize(pack, Role::interpolation, opt, opt.quotient);
}

}  // namespace lcatile
