#pragma once

// Elemental LCA groups R^d x Z^m x T^l x F, their points, characters and
// uniform lattices.
//
// A group value knows which side of the duality it lives on. Functions live
// on the spatial side G, frequency sets and the tiling lattice on the
// frequency side. The only place this matters is the Haar measure of the
// finite factor: counting measure on G, mass 1/|F| per point on the dual.

#include <complex>
#include <compare>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace lcatile {

enum class Side { spatial, frequency };

inline Side opposite(Side s) { return s == Side::spatial ? Side::frequency : Side::spatial; }

struct GroupSignature {
    std::size_t d = 0;
    std::size_t m = 0;
    std::size_t l = 0;
    std::vector<long> finite;
    Side side = Side::frequency;

    void validate() const {
        for (long q : finite)
            if (q < 1) throw InputError("cyclic order must be at least 1");
    }

    Integer finite_order() const {
        Integer n = 1;
        for (long q : finite) n *= q;
        return n;
    }

    /// Haar mass of a single point of the finite part.
    Rational point_mass() const {
        return side == Side::spatial ? Rational(1) : Rational(Integer(1), finite_order());
    }

    std::size_t continuous_dims() const { return d + l; }

    friend bool operator==(const GroupSignature&, const GroupSignature&) = default;
};

inline GroupSignature dual_signature(const GroupSignature& sig) {
    return GroupSignature{sig.d, sig.l, sig.m, sig.finite, opposite(sig.side)};
}

inline std::string describe(const GroupSignature& sig) {
    std::string s = "(d=" + std::to_string(sig.d) + ",m=" + std::to_string(sig.m) + ",l=" + std::to_string(sig.l) + ",[";
    for (std::size_t i = 0; i < sig.finite.size(); ++i) s += (i ? "," : "") + std::to_string(sig.finite[i]);
    return s + "]," + (sig.side == Side::spatial ? "spatial" : "frequency") + ")";
}

inline void require_same(const GroupSignature& a, const GroupSignature& b) {
    if (a != b) throw SignatureMismatch("signature mismatch: " + describe(a) + " vs " + describe(b));
}

class GroupElement {
public:
    GroupElement() = default;

    static GroupElement zero(const GroupSignature& sig) {
        GroupElement g;
        g.sig_ = sig;
        g.real_.assign(sig.d, Rational(0));
        g.integer_.assign(sig.m, Integer(0));
        g.torus_.assign(sig.l, Rational(0));
        g.finite_.assign(sig.finite.size(), Integer(0));
        return g;
    }

    static GroupElement make(const GroupSignature& sig, RationalVector real, IntegerVector integer,
                             RationalVector torus, IntegerVector finite) {
        if (real.size() != sig.d || integer.size() != sig.m || torus.size() != sig.l ||
            finite.size() != sig.finite.size())
            throw ArityMismatch("coordinate counts do not match signature " + describe(sig));
        GroupElement g;
        g.sig_ = sig;
        g.real_ = std::move(real);
        g.integer_ = std::move(integer);
        g.torus_ = std::move(torus);
        g.finite_ = std::move(finite);
        g.normalize();
        return g;
    }

    const GroupSignature& signature() const { return sig_; }
    const RationalVector& real() const { return real_; }
    const IntegerVector& integer() const { return integer_; }
    const RationalVector& torus() const { return torus_; }
    const IntegerVector& finite() const { return finite_; }

    GroupElement operator+(const GroupElement& o) const { return combine(o, 1); }
    GroupElement operator-(const GroupElement& o) const { return combine(o, -1); }
    GroupElement operator-() const { return zero(sig_) - *this; }

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.sig_ == b.sig_ && a.real_ == b.real_ && a.integer_ == b.integer_ && a.torus_ == b.torus_ &&
               a.finite_ == b.finite_;
    }

    /// Lexicographic on (real, integer, torus, finite).
    friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
        if (auto c = lex(a.real_, b.real_); c != 0) return c;
        if (auto c = lex(a.integer_, b.integer_); c != 0) return c;
        if (auto c = lex(a.torus_, b.torus_); c != 0) return c;
        return lex(a.finite_, b.finite_);
    }

private:
    template <class V>
    static std::strong_ordering lex(const V& a, const V& b) {
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
            if (a[i] < b[i]) return std::strong_ordering::less;
            if (b[i] < a[i]) return std::strong_ordering::greater;
        }
        return a.size() <=> b.size();
    }

    void normalize() {
        for (auto& t : torus_) t = frac(t);
        for (std::size_t i = 0; i < finite_.size(); ++i) finite_[i] = mod_floor(finite_[i], sig_.finite[i]);
    }

    GroupElement combine(const GroupElement& o, int sign) const {
        require_same(sig_, o.sig_);
        GroupElement g = *this;
        for (std::size_t i = 0; i < real_.size(); ++i) g.real_[i] += sign * o.real_[i];
        for (std::size_t i = 0; i < integer_.size(); ++i) g.integer_[i] += sign * o.integer_[i];
        for (std::size_t i = 0; i < torus_.size(); ++i) g.torus_[i] += sign * o.torus_[i];
        for (std::size_t i = 0; i < finite_.size(); ++i) g.finite_[i] += sign * o.finite_[i];
        g.normalize();
        return g;
    }

    GroupSignature sig_;
    RationalVector real_;
    IntegerVector integer_;
    RationalVector torus_;
    IntegerVector finite_;
};

inline std::string to_string(const GroupElement& g) {
    std::string s = "(";
    auto put = [&](const auto& v) {
        s += "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
        s += "]";
    };
    put(g.real());
    put(g.integer());
    put(g.torus());
    put(g.finite());
    return s + ")";
}

/// Exact phase of (x, gamma) in [0, 1): the character value is e^{2 pi i phase}.
inline Rational pairing_phase(const GroupElement& x, const GroupElement& gamma) {
    const auto& sx = x.signature();
    const auto& sg = gamma.signature();
    if (sx != dual_signature(sg))
        throw SignatureMismatch("pairing needs dual signatures, got " + describe(sx) + " and " + describe(sg));
    Rational phase = 0;
    for (std::size_t i = 0; i < sx.d; ++i) phase += x.real()[i] * gamma.real()[i];
    for (std::size_t i = 0; i < sx.m; ++i) phase += Rational(x.integer()[i]) * gamma.torus()[i];
    for (std::size_t i = 0; i < sx.l; ++i) phase += x.torus()[i] * Rational(gamma.integer()[i]);
    for (std::size_t i = 0; i < sx.finite.size(); ++i)
        phase += make_rational(x.finite()[i] * gamma.finite()[i], sx.finite[i]);
    return frac(phase);
}

inline std::complex<double> pairing(const GroupElement& x, const GroupElement& gamma) {
    return unit_phase(pairing_phase(x, gamma));
}

/// A uniform lattice stored as a product of one rational lattice per factor:
///   real   M Z^d
///   int    a full-rank sublattice of Z^m
///   torus  a lattice L containing Z^l, the subgroup being L / Z^l
///   finite the preimage in Z^r of a subgroup of F, containing diag(q) Z^r
class Lattice {
public:
    Lattice() = default;

    static Lattice from_generators(const GroupSignature& sig, const std::vector<RationalVector>& real_gens,
                                   const std::vector<RationalVector>& int_gens,
                                   const std::vector<RationalVector>& torus_gens,
                                   const std::vector<RationalVector>& finite_gens) {
        sig.validate();
        for (const auto& g : int_gens)
            for (const auto& x : g)
                if (!is_integer(x)) throw InputError("integer-factor lattice generator must be integral");
        for (const auto& g : finite_gens)
            for (const auto& x : g)
                if (!is_integer(x)) throw InputError("finite-factor lattice generator must be integral");
        Lattice lat;
        lat.sig_ = sig;
        lat.real_ = RationalLattice::from_generators(sig.d, real_gens);
        lat.int_ = RationalLattice::from_generators(sig.m, int_gens);
        auto tg = torus_gens;
        for (std::size_t i = 0; i < sig.l; ++i) {
            RationalVector e(sig.l, Rational(0));
            e[i] = 1;
            tg.push_back(std::move(e));
        }
        lat.torus_ = RationalLattice::from_generators(sig.l, tg);
        auto fg = finite_gens;
        for (std::size_t i = 0; i < sig.finite.size(); ++i) {
            RationalVector e(sig.finite.size(), Rational(0));
            e[i] = sig.finite[i];
            fg.push_back(std::move(e));
        }
        lat.finite_ = RationalLattice::from_generators(sig.finite.size(), fg);
        return lat;
    }

    static Lattice from_factors(const GroupSignature& sig, RationalLattice real, RationalLattice integer,
                                RationalLattice torus, RationalLattice finite) {
        return from_generators(sig, real.basis_vectors(), integer.basis_vectors(), torus.basis_vectors(),
                               finite.basis_vectors());
    }

    const GroupSignature& signature() const { return sig_; }
    const RationalLattice& real() const { return real_; }
    const RationalLattice& integer() const { return int_; }
    const RationalLattice& torus() const { return torus_; }
    const RationalLattice& finite() const { return finite_; }

    bool contains(const GroupElement& g) const {
        require_same(sig_, g.signature());
        return real_.contains(g.real()) && int_.contains(to_rational(g.integer())) && torus_.contains(g.torus()) &&
               finite_.contains(to_rational(g.finite()));
    }

    /// The representative of g + H lying in the fundamental box.
    GroupElement reduce(const GroupElement& g) const {
        require_same(sig_, g.signature());
        return GroupElement::make(sig_, real_.reduce(g.real()), to_integer(int_.reduce(to_rational(g.integer()))),
                                  torus_.reduce(g.torus()), to_integer(finite_.reduce(to_rational(g.finite()))));
    }

    /// Haar measure of a fundamental domain.
    Rational covolume() const {
        Rational c = real_.determinant() * int_.determinant() * torus_.determinant() * finite_.determinant();
        return c * sig_.point_mass();
    }

    /// Representatives of the torus subgroup in [0,1)^l.
    std::vector<RationalVector> torus_points() const { return box_points(torus_, RationalVector(sig_.l, Rational(1))); }

    std::vector<IntegerVector> finite_points() const {
        RationalVector q;
        for (long x : sig_.finite) q.push_back(Rational(x));
        std::vector<IntegerVector> out;
        for (auto& p : box_points(finite_, q)) out.push_back(to_integer(p));
        return out;
    }

    /// Calls f for every lattice element whose real coordinates lie in [real_lo, real_hi] and whose
    /// integer coordinates lie in [int_lo, int_hi] (closed boxes). Torus and finite parts range over
    /// the whole finite subgroups. Order is deterministic but not sorted.
    void for_each_in_window(const RationalVector& real_lo, const RationalVector& real_hi, const RationalVector& int_lo,
                            const RationalVector& int_hi, const std::function<void(const GroupElement&)>& f) const {
        std::vector<RationalVector> reals, ints;
        real_.for_each_point_in_box(real_lo, real_hi, [&](const RationalVector& x) { reals.push_back(x); });
        int_.for_each_point_in_box(int_lo, int_hi, [&](const RationalVector& x) { ints.push_back(x); });
        auto tori = torus_points();
        auto fins = finite_points();
        for (const auto& r : reals)
            for (const auto& i : ints)
                for (const auto& t : tori)
                    for (const auto& q : fins) f(GroupElement::make(sig_, r, to_integer(i), t, q));
    }

    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.sig_ == b.sig_ && a.real_ == b.real_ && a.int_ == b.int_ && a.torus_ == b.torus_ &&
               a.finite_ == b.finite_;
    }

    static RationalVector to_rational(const IntegerVector& v) {
        RationalVector r;
        r.reserve(v.size());
        for (const auto& x : v) r.emplace_back(x);
        return r;
    }

    static IntegerVector to_integer(const RationalVector& v) {
        IntegerVector r;
        r.reserve(v.size());
        for (const auto& x : v) {
            if (!is_integer(x)) throw InputError("non-integral coordinate " + x.get_str());
            r.push_back(x.get_num());
        }
        return r;
    }

private:
    // Lattice points in the half-open box prod [0, hi_i).
    static std::vector<RationalVector> box_points(const RationalLattice& lat, const RationalVector& hi) {
        std::vector<RationalVector> out;
        lat.for_each_point_in_box(RationalVector(lat.dim(), Rational(0)), hi, [&](const RationalVector& x) {
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] >= hi[i]) return;
            out.push_back(x);
        });
        return out;
    }

    GroupSignature sig_;
    RationalLattice real_, int_, torus_, finite_;
};

/// {gamma in dual : (h, gamma) = 1 for all h in H}.
inline Lattice annihilator(const Lattice& H) {
    const auto& sig = H.signature();
    RationalVector q;
    for (long x : sig.finite) q.push_back(Rational(x));
    return Lattice::from_factors(dual_signature(sig), H.real().dual(), H.torus().dual(), H.integer().dual(),
                                 H.finite().dual().scale_rows(q));
}

/// (2^-n Z)^d x Z^m x (2^-n Z / Z)^l x F.
inline Lattice dyadic_lattice(long n, const GroupSignature& sig) {
    if (n < 0) throw InputError("dyadic generation must be non-negative");
    Rational w = pow2(-n);
    return Lattice::from_factors(sig, RationalLattice::scaled_identity(sig.d, w),
                                 RationalLattice::scaled_identity(sig.m, 1), RationalLattice::scaled_identity(sig.l, w),
                                 RationalLattice::scaled_identity(sig.finite.size(), 1));
}

}  // namespace lcatile
