#pragma once

// Fiber matrices E[r][c] = (a_c, lambda_r), Riesz bounds of the periodized
// character system U_j (a_j + H), universal tuples, the converse check and the
// lift through a finite quotient.
//
// Reported bounds are the extreme squared singular values of the fiber
// matrices. They are the Riesz bounds for L^2(Omega) once the Haar measure is
// rescaled so that the fundamental domain of Lambda has mass 1; the constants
// for the unscaled measure are haar_scale * A and haar_scale * B with
// haar_scale = covol(Lambda).

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "coset_union.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "region.hpp"
#include "tiling.hpp"

namespace lcatile {

struct FiberMatrix {
    FiberConfiguration config;
    std::vector<std::vector<Rational>> phases;  // phases[r][c], exact
    Eigen::MatrixXcd entries;
};

inline FiberMatrix fiber_matrix(const FiberConfiguration& config, const std::vector<GroupElement>& a) {
    const std::size_t k = config.offsets.size();
    if (a.size() != k)
        throw ArityMismatch("tuple has " + std::to_string(a.size()) + " points but the configuration has " +
                            std::to_string(k) + " offsets");
    FiberMatrix f{config, std::vector<std::vector<Rational>>(k, std::vector<Rational>(k)),
                  Eigen::MatrixXcd(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k))};
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            f.phases[r][c] = pairing_phase(a[c], config.offsets[r]);
            f.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = unit_phase(f.phases[r][c]);
        }
    return f;
}

struct SigmaRange {
    double min_sq = 0;
    double max_sq = 0;
};

/// Extreme squared singular values. Two equal rows or columns make the matrix exactly singular,
/// and then the minimum is reported as an exact 0.
inline SigmaRange sigma_range(const FiberMatrix& f) {
    const std::size_t k = f.phases.size();
    if (k == 0) return {0, 0};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.entries);
    const auto& s = svd.singularValues();
    SigmaRange out{s(s.size() - 1) * s(s.size() - 1), s(0) * s(0)};
    bool repeated = false;
    for (std::size_t i = 0; i < k && !repeated; ++i)
        for (std::size_t j = i + 1; j < k && !repeated; ++j) {
            bool rows = true, cols = true;
            for (std::size_t t = 0; t < k; ++t) {
                rows = rows && f.phases[i][t] == f.phases[j][t];
                cols = cols && f.phases[t][i] == f.phases[t][j];
            }
            repeated = rows || cols;
        }
    if (repeated) out.min_sq = 0;
    return out;
}

struct ConfigBound {
    Cell cell;
    std::vector<GroupElement> offsets;
    double sigma_min_sq = 0;
    double sigma_max_sq = 0;
};

struct RieszCertificate {
    double A = 0;
    double B = 0;
    Rational haar_scale = 1;
    std::vector<ConfigBound> configs;
};

/// Bounds from precomputed configurations of a k-tiling.
inline RieszCertificate certify(const std::vector<FiberConfiguration>& configs, const std::vector<GroupElement>& a,
                                const Rational& haar_scale) {
    RieszCertificate cert;
    cert.haar_scale = haar_scale;
    cert.A = std::numeric_limits<double>::infinity();
    cert.B = 0;
    for (const auto& c : configs) {
        auto range = sigma_range(fiber_matrix(c, a));
        cert.A = std::min(cert.A, range.min_sq);
        cert.B = std::max(cert.B, range.max_sq);
        cert.configs.push_back(ConfigBound{c.cell, c.offsets, range.min_sq, range.max_sq});
    }
    if (configs.empty()) cert.A = 0;
    return cert;
}

inline RieszCertificate riesz_bounds(const Region& omega, const Lattice& lambda, const std::vector<GroupElement>& a) {
    return certify(configurations(omega, lambda), a, lambda.covolume());
}

struct TilingInstance {
    Region omega;
    Lattice lambda;
};

struct UniversalTuple {
    std::vector<GroupElement> points;
    double tol = 0;
    double min_sigma_min_sq = 0;  // minimum over every configuration of the family
    bool certified = false;
    std::vector<RieszCertificate> certificates;  // one per family member
};

namespace detail {

struct PreparedFamily {
    std::vector<std::vector<FiberConfiguration>> configs;
    std::vector<Rational> scales;
};

inline PreparedFamily prepare(const std::vector<TilingInstance>& family, std::size_t k) {
    PreparedFamily p;
    for (const auto& member : family) {
        auto configs = configurations(member.omega, member.lambda);
        std::size_t mk = configs.front().offsets.size();
        if (mk != k)
            throw NotKTiling("family member is a " + std::to_string(mk) + "-tiling, expected k = " + std::to_string(k));
        p.configs.push_back(std::move(configs));
        p.scales.push_back(member.lambda.covolume());
    }
    return p;
}

inline UniversalTuple evaluate(const PreparedFamily& p, const std::vector<GroupElement>& a, double tol) {
    UniversalTuple t{a, tol, std::numeric_limits<double>::infinity(), false, {}};
    for (std::size_t i = 0; i < p.configs.size(); ++i) {
        t.certificates.push_back(certify(p.configs[i], a, p.scales[i]));
        t.min_sigma_min_sq = std::min(t.min_sigma_min_sq, t.certificates.back().A);
    }
    t.certified = t.min_sigma_min_sq >= tol;
    return t;
}

// Uniform integer in [0, n) from a 64-bit engine, identical on every platform.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % n;
}

inline Rational uniform_unit(std::mt19937_64& rng) {
    return Rational(Integer(static_cast<unsigned long>(rng() >> 11)), Integer(1) << 53);
}

}  // namespace detail

/// Uniform draw at resolution 2^-53 from the fundamental box of H.
inline GroupElement draw_point(const Lattice& H, std::mt19937_64& rng) {
    const auto& s = H.signature();
    RationalVector real, torus;
    IntegerVector ints, fins;
    for (std::size_t i = 0; i < s.d; ++i) real.push_back(H.real().diagonal(i) * detail::uniform_unit(rng));
    for (std::size_t i = 0; i < s.m; ++i)
        ints.emplace_back(static_cast<unsigned long>(
            detail::uniform_below(rng, static_cast<std::uint64_t>(to_long(H.integer().diagonal(i).get_num())))));
    for (std::size_t i = 0; i < s.l; ++i) torus.push_back(H.torus().diagonal(i) * detail::uniform_unit(rng));
    for (std::size_t i = 0; i < s.finite.size(); ++i)
        fins.emplace_back(static_cast<unsigned long>(
            detail::uniform_below(rng, static_cast<std::uint64_t>(to_long(H.finite().diagonal(i).get_num())))));
    return GroupElement::make(s, real, ints, torus, fins);
}

inline UniversalTuple is_universal_for(const std::vector<GroupElement>& a, const std::vector<TilingInstance>& family,
                                       double tol) {
    return detail::evaluate(detail::prepare(family, a.size()), a, tol);
}

inline UniversalTuple sample_universal_tuple(const Lattice& lambda, std::size_t k,
                                             const std::vector<TilingInstance>& family, double tol, long max_tries,
                                             std::uint64_t seed) {
    if (family.empty()) throw InputError("universal tuple search needs a nonempty family");
    if (k == 0) throw InputError("tuple size must be positive");
    if (max_tries < 1) throw InputError("max_tries must be positive");
    auto prepared = detail::prepare(family, k);
    Lattice H = annihilator(lambda);
    std::mt19937_64 rng(seed);
    double best = -1;
    for (long attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<GroupElement> a;
        for (std::size_t j = 0; j < k; ++j) a.push_back(draw_point(H, rng));
        auto t = detail::evaluate(prepared, a, tol);
        if (t.certified) return t;
        best = std::max(best, t.min_sigma_min_sq);
    }
    throw TriesExhausted("no universal tuple after " + std::to_string(max_tries) +
                             " draws; best minimum squared singular value " + std::to_string(best),
                         best);
}

struct ConverseVerdict {
    bool possible = false;
    long k = 0;
    MultiplicityProfile profile;
};

/// A Riesz basis of the form U_{j<=k} (a_j + H) can exist only if Omega k-tiles with Lambda.
inline ConverseVerdict converse_check(const Region& omega, const Lattice& lambda, long k) {
    auto p = multiplicity_profile(omega, lambda);
    auto t = k_of(p);
    return ConverseVerdict{t && *t == k, k, p};
}

/// A finite subgroup K of the frequency group X, one cyclic piece per compact factor: the q-torsion
/// C_q of a torus factor (quotient map t -> q t) and the subgroup of order s of a cyclic factor Z_n
/// (quotient map x -> x mod n/s). Order 1 means the factor is untouched.
class QuotientMap {
public:
    QuotientMap(GroupSignature ambient, std::vector<long> torus_orders, std::vector<long> finite_orders)
        : ambient_(std::move(ambient)), torus_(std::move(torus_orders)), finite_(std::move(finite_orders)) {
        if (ambient_.side != Side::frequency) throw InputError("the quotient is taken in the frequency group");
        if (torus_.size() != ambient_.l || finite_.size() != ambient_.finite.size())
            throw ArityMismatch("quotient orders must be given for every torus and finite factor");
        for (long q : torus_)
            if (q < 1) throw InputError("K is not finite: torus kernel order must be a positive integer");
        for (std::size_t i = 0; i < finite_.size(); ++i)
            if (finite_[i] < 1 || ambient_.finite[i] % finite_[i] != 0)
                throw InputError("K is not a subgroup: order " + std::to_string(finite_[i]) + " does not divide " +
                                 std::to_string(ambient_.finite[i]));
    }

    const GroupSignature& ambient() const { return ambient_; }
    const std::vector<long>& torus_orders() const { return torus_; }
    const std::vector<long>& finite_orders() const { return finite_; }

    long order() const {
        long n = 1;
        for (long q : torus_) n *= q;
        for (long s : finite_) n *= s;
        return n;
    }

    GroupSignature quotient() const {
        GroupSignature y = ambient_;
        for (std::size_t i = 0; i < finite_.size(); ++i) y.finite[i] = ambient_.finite[i] / finite_[i];
        return y;
    }

    GroupElement project(const GroupElement& x) const {
        require_same(ambient_, x.signature());
        RationalVector torus;
        IntegerVector fins;
        for (std::size_t i = 0; i < torus_.size(); ++i) torus.push_back(x.torus()[i] * torus_[i]);
        auto y = quotient();
        for (std::size_t i = 0; i < finite_.size(); ++i) fins.push_back(mod_floor(x.finite()[i], y.finite[i]));
        return GroupElement::make(y, x.real(), x.integer(), torus, fins);
    }

    /// Elements of K.
    std::vector<GroupElement> kernel() const {
        std::vector<GroupElement> out{GroupElement::zero(ambient_)};
        auto extend = [&](auto&& make_step, long count) {
            std::vector<GroupElement> next;
            for (const auto& g : out)
                for (long j = 0; j < count; ++j) next.push_back(g + make_step(j));
            out = std::move(next);
        };
        for (std::size_t i = 0; i < torus_.size(); ++i)
            extend(
                [&](long j) {
                    auto e = GroupElement::zero(ambient_);
                    RationalVector t(ambient_.l, Rational(0));
                    t[i] = make_rational(j, torus_[i]);
                    return GroupElement::make(ambient_, e.real(), e.integer(), t, e.finite());
                },
                torus_[i]);
        for (std::size_t i = 0; i < finite_.size(); ++i)
            extend(
                [&](long j) {
                    auto e = GroupElement::zero(ambient_);
                    IntegerVector f(ambient_.finite.size(), Integer(0));
                    f[i] = j * (ambient_.finite[i] / finite_[i]);
                    return GroupElement::make(ambient_, e.real(), e.integer(), e.torus(), f);
                },
                finite_[i]);
        return out;
    }

    /// pi^{-1}(Q) for a region Q of the quotient.
    Region preimage(const Region& Q) const {
        require_same(quotient(), Q.signature());
        std::vector<Cell> out;
        for (const auto& c : Q.cells()) {
            std::vector<Cell> partial{Cell{c.real, c.integer, {}, {}}};
            for (std::size_t i = 0; i < torus_.size(); ++i) {
                std::vector<Cell> next;
                for (const auto& p : partial)
                    for (long j = 0; j < torus_[i]; ++j) {
                        Cell n = p;
                        n.torus.push_back(Interval{(c.torus[i].lo + j) / torus_[i], (c.torus[i].hi + j) / torus_[i]});
                        next.push_back(std::move(n));
                    }
                partial = std::move(next);
            }
            for (std::size_t i = 0; i < finite_.size(); ++i) {
                long step = ambient_.finite[i] / finite_[i];
                std::vector<Cell> next;
                for (const auto& p : partial)
                    for (long j = 0; j < finite_[i]; ++j) {
                        Cell n = p;
                        n.finite.push_back(c.finite[i] + j * step);
                        next.push_back(std::move(n));
                    }
                partial = std::move(next);
            }
            out.insert(out.end(), partial.begin(), partial.end());
        }
        return Region(ambient_, out);
    }

    /// pi(R).
    Region image(const Region& R) const {
        require_same(ambient_, R.signature());
        auto y = quotient();
        std::vector<Cell> out;
        for (const auto& c : R.cells()) {
            std::vector<Cell> partial{Cell{c.real, c.integer, {}, {}}};
            for (std::size_t i = 0; i < torus_.size(); ++i) {
                Rational lo = c.torus[i].lo * torus_[i], hi = c.torus[i].hi * torus_[i];
                auto arcs = hi - lo >= 1 ? std::vector<Interval>{Interval{0, 1}} : make_arc(lo, hi);
                std::vector<Cell> next;
                for (const auto& p : partial)
                    for (const auto& arc : arcs) {
                        Cell n = p;
                        n.torus.push_back(arc);
                        next.push_back(std::move(n));
                    }
                partial = std::move(next);
            }
            for (auto& p : partial) {
                for (std::size_t i = 0; i < finite_.size(); ++i) p.finite.push_back(mod_floor(c.finite[i], y.finite[i]));
                out.push_back(std::move(p));
            }
        }
        return Region(y, out);
    }

    /// The largest Q with pi^{-1}(Q) inside R, namely pi of the intersection of all R - k.
    Region invariant_core(const Region& R) const {
        Region core = R;
        for (const auto& k : kernel()) core = intersect(core, translate(R, -k));
        return image(core);
    }

    bool is_invariant(const Region& R) const { return preimage(image(R)) == R; }

    /// Spatial side of the quotient and of the ambient group.
    GroupSignature dual_quotient() const { return dual_signature(quotient()); }
    GroupSignature dual_ambient() const { return dual_signature(ambient_); }

    /// Characters of X/K as characters of X (elements of the annihilator of K).
    GroupElement embed(const GroupElement& c) const {
        require_same(dual_quotient(), c.signature());
        IntegerVector ints;
        IntegerVector fins;
        for (std::size_t i = 0; i < torus_.size(); ++i) ints.push_back(c.integer()[i] * torus_[i]);
        for (std::size_t i = 0; i < finite_.size(); ++i) fins.push_back(c.finite()[i] * finite_[i]);
        return GroupElement::make(dual_ambient(), c.real(), ints, c.torus(), fins);
    }

    Lattice embed(const Lattice& H) const {
        require_same(dual_quotient(), H.signature());
        RationalVector ts, fs;
        for (long q : torus_) ts.emplace_back(q);
        for (long s : finite_) fs.emplace_back(s);
        return Lattice::from_factors(dual_ambient(), H.real(), H.integer().scale_rows(ts), H.torus(),
                                     H.finite().scale_rows(fs));
    }

    bool annihilates_kernel(const GroupElement& c) const {
        require_same(dual_ambient(), c.signature());
        for (std::size_t i = 0; i < torus_.size(); ++i)
            if (mod_floor(c.integer()[i], torus_[i]) != 0) return false;
        for (std::size_t i = 0; i < finite_.size(); ++i)
            if (mod_floor(c.finite()[i], finite_[i]) != 0) return false;
        return true;
    }

    /// Representatives kappa_m of the dual group modulo the annihilator of K.
    std::vector<GroupElement> transversal() const {
        auto sig = dual_ambient();
        std::vector<GroupElement> out{GroupElement::zero(sig)};
        auto grow = [&](std::size_t slot, bool is_torus, long count) {
            std::vector<GroupElement> next;
            for (const auto& g : out)
                for (long j = 0; j < count; ++j) {
                    IntegerVector ints = g.integer(), fins = g.finite();
                    (is_torus ? ints : fins)[slot] = j;
                    next.push_back(GroupElement::make(sig, g.real(), ints, g.torus(), fins));
                }
            out = std::move(next);
        };
        for (std::size_t i = 0; i < torus_.size(); ++i) grow(i, true, torus_[i]);
        for (std::size_t i = 0; i < finite_.size(); ++i) grow(i, false, finite_[i]);
        return out;
    }

private:
    GroupSignature ambient_;
    std::vector<long> torus_;
    std::vector<long> finite_;
};

struct LiftedSystem {
    Region preimage;
    CosetUnion system;
};

/// {gamma_n + kappa_m}: the base system on Q in X/K lifted to pi^{-1}(Q). The base may be given
/// in characters of X/K or already as characters of X lying in the annihilator of K.
inline LiftedSystem lift_basis(const QuotientMap& K, const Region& Q, const CosetUnion& base) {
    Lattice H;
    std::vector<GroupElement> shifts;
    if (base.H.signature() == K.dual_quotient()) {
        H = K.embed(base.H);
        for (const auto& a : base.shifts) shifts.push_back(K.embed(a));
    } else if (base.H.signature() == K.dual_ambient()) {
        auto check = [&](const GroupElement& g) {
            if (!K.annihilates_kernel(g))
                throw InputError("base character " + to_string(g) + " is not in the annihilator of K");
        };
        // generators of H: the lattice is a product, so its per-factor basis vectors generate it
        const auto& s = base.H.signature();
        for (const auto& v : base.H.integer().basis_vectors())
            check(GroupElement::make(s, RationalVector(s.d, Rational(0)), Lattice::to_integer(v),
                                     RationalVector(s.l, Rational(0)), IntegerVector(s.finite.size(), Integer(0))));
        for (const auto& v : base.H.finite().basis_vectors())
            check(GroupElement::make(s, RationalVector(s.d, Rational(0)), IntegerVector(s.m, Integer(0)),
                                     RationalVector(s.l, Rational(0)), Lattice::to_integer(v)));
        for (const auto& a : base.shifts) check(a);
        H = base.H;
        shifts = base.shifts;
    } else {
        throw SignatureMismatch("base system lives in neither the dual of the quotient nor the dual group");
    }
    std::vector<GroupElement> lifted;
    for (const auto& a : shifts)
        for (const auto& kappa : K.transversal()) lifted.push_back(a + kappa);
    return LiftedSystem{K.preimage(Q), CosetUnion::make(H, lifted, base.role)};
}

}  // namespace lcatile
