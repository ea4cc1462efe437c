#pragma once

// Multiplicity of lattice translates, k-tiling checks, tile decomposition and
// fiber configurations. Everything is computed on the arrangement of the
// pieces (Omega - lambda) n D inside the canonical fundamental domain D, so all
// answers are exact.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "region.hpp"

namespace lcatile {

/// multiplicity -> Haar measure of the part of D where it is attained.
using MultiplicityProfile = std::map<long, Rational>;

struct FiberConfiguration {
    Cell cell;
    std::vector<GroupElement> offsets;  // sorted
};

/// All lambda in Lambda with (lambda + D) n Omega nonempty, sorted.
inline std::vector<GroupElement> relevant_offsets(const Region& omega, const Lattice& lambda, const Region& D) {
    require_same(omega.signature(), lambda.signature());
    require_same(omega.signature(), D.signature());
    if (omega.empty() || D.empty()) return {};
    auto bo = bounding_box(omega);
    auto bd = bounding_box(D);
    RationalVector rlo, rhi, ilo, ihi;
    for (std::size_t i = 0; i < bo.real_lo.size(); ++i) {
        rlo.push_back(bo.real_lo[i] - bd.real_hi[i]);
        rhi.push_back(bo.real_hi[i] - bd.real_lo[i]);
    }
    for (std::size_t i = 0; i < bo.int_lo.size(); ++i) {
        ilo.push_back(bo.int_lo[i] - bd.int_hi[i]);
        ihi.push_back(bo.int_hi[i] - bd.int_lo[i]);
    }
    std::vector<GroupElement> out;
    lambda.for_each_in_window(rlo, rhi, ilo, ihi, [&](const GroupElement& l) {
        if (!intersect(translate(D, l), omega).empty()) out.push_back(l);
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// Partition of the canonical fundamental domain D of Lambda into canonical cells, each with its
/// list of lambda such that cell + lambda lies in Omega. Cells with no offsets are included, so the
/// cell measures always add up to covol(Lambda). Does not require Omega to multi-tile.
inline std::vector<FiberConfiguration> fiber_configurations(const Region& omega, const Lattice& lambda) {
    require_same(omega.signature(), lambda.signature());
    const auto& sig = omega.signature();
    Region D = fundamental_domain(lambda);
    auto offsets = relevant_offsets(omega, lambda, D);

    std::vector<Region> layers{D};
    for (const auto& l : offsets) layers.push_back(intersect(translate(omega, -l), D));
    auto grid = refine_breakpoints(layers);

    std::map<std::vector<GroupElement>, std::vector<Cell>> by_offsets;
    for (const auto& cell : grid) {
        GroupElement w = corner(cell, sig);
        std::vector<GroupElement> hit;
        for (std::size_t j = 0; j < offsets.size(); ++j)
            if (contains(layers[j + 1], w)) hit.push_back(offsets[j]);
        by_offsets[std::move(hit)].push_back(cell);
    }

    std::vector<FiberConfiguration> out;
    for (auto& [offs, cells] : by_offsets) {
        Region merged(sig, cells);
        for (const auto& c : merged.cells()) out.push_back(FiberConfiguration{c, offs});
    }
    return out;
}

inline MultiplicityProfile profile_of(const std::vector<FiberConfiguration>& configs, const GroupSignature& sig) {
    MultiplicityProfile p;
    for (const auto& c : configs) p[static_cast<long>(c.offsets.size())] += haar_measure(c.cell, sig);
    return p;
}

inline MultiplicityProfile multiplicity_profile(const Region& omega, const Lattice& lambda) {
    return profile_of(fiber_configurations(omega, lambda), omega.signature());
}

inline std::optional<long> k_of(const MultiplicityProfile& p) {
    if (p.size() == 1 && p.begin()->first >= 1) return p.begin()->first;
    return std::nullopt;
}

inline std::optional<long> is_k_tiling(const Region& omega, const Lattice& lambda) {
    return k_of(multiplicity_profile(omega, lambda));
}

inline std::string to_string(const MultiplicityProfile& p) {
    std::string s = "{";
    for (const auto& [k, m] : p) s += (s.size() > 1 ? ", " : "") + std::to_string(k) + " -> " + m.get_str();
    return s + "}";
}

/// Fiber configurations of a k-tiling; throws NotKTiling otherwise.
inline std::vector<FiberConfiguration> configurations(const Region& omega, const Lattice& lambda) {
    auto configs = fiber_configurations(omega, lambda);
    auto p = profile_of(configs, omega.signature());
    if (!k_of(p)) throw NotKTiling("region does not multi-tile: profile " + to_string(p));
    return configs;
}

/// Omega = Omega_1 u ... u Omega_k with Omega_j the union of cell + (j-th smallest offset).
inline std::vector<Region> decompose_tiles(const Region& omega, const Lattice& lambda) {
    auto configs = configurations(omega, lambda);
    const auto& sig = omega.signature();
    std::size_t k = configs.front().offsets.size();
    std::vector<std::vector<Cell>> parts(k);
    for (const auto& c : configs) {
        Region cell(sig, {c.cell});
        for (std::size_t j = 0; j < k; ++j) {
            auto moved = translate(cell, c.offsets[j]).cells();
            parts[j].insert(parts[j].end(), moved.begin(), moved.end());
        }
    }
    std::vector<Region> out;
    for (auto& p : parts) out.emplace_back(sig, p);
    return out;
}

}  // namespace lcatile
