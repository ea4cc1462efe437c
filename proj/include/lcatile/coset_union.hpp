#pragma once

// Finite unions of cosets a_j + H of a uniform lattice H in the spatial group,
// the frequency sets produced by the constructions, and their uniform density.

#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace lcatile {

enum class Role { sampling, interpolation, basis };

inline std::string to_string(Role r) {
    switch (r) {
        case Role::sampling: return "sampling";
        case Role::interpolation: return "interpolation";
        case Role::basis: return "basis";
    }
    return "basis";
}

struct CosetUnion {
    Lattice H;
    std::vector<GroupElement> shifts;  // reduced into the fundamental box of H, pairwise distinct
    Role role = Role::basis;

    static CosetUnion make(const Lattice& H, const std::vector<GroupElement>& shifts, Role role) {
        CosetUnion J{H, {}, role};
        for (const auto& a : shifts) {
            auto r = H.reduce(a);
            for (const auto& b : J.shifts)
                if (b == r) throw InputError("duplicate shift " + to_string(a) + " modulo H");
            J.shifts.push_back(std::move(r));
        }
        return J;
    }
};

/// Uniform density k / covol(H). The spatial-side Haar measure gives the reference lattice
/// Z^d x {0} x (discrete part) covolume 1, so D(H_0) = 1.
inline Rational density(const CosetUnion& J) {
    if (J.H.signature().side != Side::spatial)
        throw SignatureMismatch("density is defined for lattices in the spatial group");
    return Rational(static_cast<long>(J.shifts.size())) / J.H.covolume();
}

}  // namespace lcatile
