#pragma once

// Finite unions of product cells: half-open rational intervals on real axes,
// half-open arcs inside [0,1) on torus axes, single points on integer and
// finite axes.
//
// A Region is always stored in canonical form. Cells are grouped by their
// discrete coordinates; within a group the continuous part is cut into
// maximal slabs along the first axis whose cross-sections are canonical in
// the remaining axes. The form depends only on the point set, so two regions
// are equal as sets iff they compare equal.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "rational.hpp"

namespace lcatile {

struct Interval {
    Rational lo, hi;

    Rational length() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x < hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct Cell {
    std::vector<Interval> real;
    IntegerVector integer;
    std::vector<Interval> torus;
    IntegerVector finite;

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Arc of the circle starting at lo with length hi - lo (at most 1), split at 0 when it wraps.
inline std::vector<Interval> make_arc(const Rational& lo, const Rational& hi) {
    Rational len = hi - lo;
    if (len <= 0 || len > 1) throw InputError("torus arc length must lie in (0, 1]");
    if (len == 1) return {Interval{0, 1}};
    Rational a = frac(lo);
    Rational b = a + len;
    if (b <= 1) return {Interval{a, b}};
    return {Interval{a, 1}, Interval{0, b - 1}};
}

namespace detail {

using Box = std::vector<Interval>;
using Key = std::pair<IntegerVector, IntegerVector>;

enum class BoolOp { unite, intersect, subtract };

inline bool apply(BoolOp op, bool a, bool b) {
    switch (op) {
        case BoolOp::unite: return a || b;
        case BoolOp::intersect: return a && b;
        case BoolOp::subtract: return a && !b;
    }
    return false;
}

// Canonical boxes (axes axis..dims-1) of op(A, B).
inline std::vector<Box> combine(const std::vector<const Box*>& a, const std::vector<const Box*>& b, std::size_t axis,
                                std::size_t dims, BoolOp op) {
    if (axis == dims) {
        if (apply(op, !a.empty(), !b.empty())) return {Box{}};
        return {};
    }
    if (a.empty() && (op != BoolOp::unite || b.empty())) return {};

    std::vector<Rational> cuts;
    for (const auto* s : {&a, &b})
        for (const Box* box : *s) {
            cuts.push_back((*box)[axis].lo);
            cuts.push_back((*box)[axis].hi);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Box> out;
    std::vector<Box> run;
    Rational run_lo, run_hi;
    bool have_run = false;
    auto flush = [&] {
        if (!have_run) return;
        for (auto& tail : run) {
            Box box;
            box.reserve(dims - axis);
            box.push_back(Interval{run_lo, run_hi});
            box.insert(box.end(), tail.begin(), tail.end());
            out.push_back(std::move(box));
        }
        have_run = false;
    };

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational& x0 = cuts[i];
        const Rational& x1 = cuts[i + 1];
        std::vector<const Box*> sa, sb;
        for (const Box* box : a)
            if ((*box)[axis].lo <= x0 && x1 <= (*box)[axis].hi) sa.push_back(box);
        for (const Box* box : b)
            if ((*box)[axis].lo <= x0 && x1 <= (*box)[axis].hi) sb.push_back(box);
        auto section = combine(sa, sb, axis + 1, dims, op);
        if (section.empty()) {
            flush();
            continue;
        }
        if (have_run && run_hi == x0 && section == run) {
            run_hi = x1;
            continue;
        }
        flush();
        run = std::move(section);
        run_lo = x0;
        run_hi = x1;
        have_run = true;
    }
    flush();
    return out;
}

inline Box box_of(const Cell& c) {
    Box b = c.real;
    b.insert(b.end(), c.torus.begin(), c.torus.end());
    return b;
}

inline Cell cell_of(const Key& key, const Box& box, std::size_t d) {
    Cell c;
    c.real.assign(box.begin(), box.begin() + static_cast<std::ptrdiff_t>(d));
    c.torus.assign(box.begin() + static_cast<std::ptrdiff_t>(d), box.end());
    c.integer = key.first;
    c.finite = key.second;
    return c;
}

}  // namespace detail

class Region {
public:
    Region() = default;
    explicit Region(GroupSignature sig) : sig_(std::move(sig)) {}

    /// Validates each cell and stores the canonical form of their union.
    Region(GroupSignature sig, const std::vector<Cell>& cells) : sig_(std::move(sig)) {
        sig_.validate();
        for (const auto& c : cells) validate(c);
        *this = combined(*this, cells, {}, detail::BoolOp::unite);
    }

    const GroupSignature& signature() const { return sig_; }
    const std::vector<Cell>& cells() const { return cells_; }
    bool empty() const { return cells_.empty(); }

    friend bool operator==(const Region& a, const Region& b) { return a.sig_ == b.sig_ && a.cells_ == b.cells_; }

    friend Region unite(const Region& a, const Region& b) {
        require_same(a.sig_, b.sig_);
        return combined(a, a.cells_, b.cells_, detail::BoolOp::unite);
    }
    friend Region intersect(const Region& a, const Region& b) {
        require_same(a.sig_, b.sig_);
        return combined(a, a.cells_, b.cells_, detail::BoolOp::intersect);
    }
    friend Region subtract(const Region& a, const Region& b) {
        require_same(a.sig_, b.sig_);
        return combined(a, a.cells_, b.cells_, detail::BoolOp::subtract);
    }

private:
    void validate(const Cell& c) const {
        if (c.real.size() != sig_.d || c.integer.size() != sig_.m || c.torus.size() != sig_.l ||
            c.finite.size() != sig_.finite.size())
            throw ArityMismatch("cell coordinate counts do not match signature " + describe(sig_));
        for (const auto& iv : c.real)
            if (!(iv.lo < iv.hi)) throw InputError("empty or reversed interval in cell");
        for (const auto& iv : c.torus)
            if (!(iv.lo < iv.hi) || iv.lo < 0 || iv.hi > 1) throw InputError("torus arc must satisfy 0 <= a < b <= 1");
        for (std::size_t i = 0; i < c.finite.size(); ++i)
            if (c.finite[i] < 0 || c.finite[i] >= sig_.finite[i])
                throw InputError("finite coordinate out of range");
    }

    static Region combined(const Region& like, const std::vector<Cell>& a, const std::vector<Cell>& b,
                           detail::BoolOp op) {
        std::map<detail::Key, std::pair<std::vector<detail::Box>, std::vector<detail::Box>>> groups;
        for (const auto& c : a) groups[{c.integer, c.finite}].first.push_back(detail::box_of(c));
        for (const auto& c : b) groups[{c.integer, c.finite}].second.push_back(detail::box_of(c));
        Region r(like.sig_);
        const std::size_t dims = like.sig_.continuous_dims();
        for (const auto& [key, boxes] : groups) {
            std::vector<const detail::Box*> pa, pb;
            for (const auto& x : boxes.first) pa.push_back(&x);
            for (const auto& x : boxes.second) pb.push_back(&x);
            for (const auto& box : detail::combine(pa, pb, 0, dims, op))
                r.cells_.push_back(detail::cell_of(key, box, like.sig_.d));
        }
        return r;
    }

    GroupSignature sig_;
    std::vector<Cell> cells_;
};

inline Rational haar_measure(const Cell& c, const GroupSignature& sig) {
    Rational m = sig.point_mass();
    for (const auto& iv : c.real) m *= iv.length();
    for (const auto& iv : c.torus) m *= iv.length();
    return m;
}

inline Rational haar_measure(const Region& r) {
    Rational total = 0;
    for (const auto& c : r.cells()) total += haar_measure(c, r.signature());
    return total;
}

inline bool contains(const Cell& c, const GroupElement& g) {
    for (std::size_t i = 0; i < c.real.size(); ++i)
        if (!c.real[i].contains(g.real()[i])) return false;
    for (std::size_t i = 0; i < c.torus.size(); ++i)
        if (!c.torus[i].contains(g.torus()[i])) return false;
    return c.integer == g.integer() && c.finite == g.finite();
}

inline bool contains(const Region& r, const GroupElement& g) {
    require_same(r.signature(), g.signature());
    for (const auto& c : r.cells())
        if (contains(c, g)) return true;
    return false;
}

inline Region translate(const Region& r, const GroupElement& g) {
    const auto& sig = r.signature();
    require_same(sig, g.signature());
    std::vector<Cell> out;
    for (const auto& c : r.cells()) {
        Cell base = c;
        for (std::size_t i = 0; i < sig.d; ++i) {
            base.real[i].lo += g.real()[i];
            base.real[i].hi += g.real()[i];
        }
        for (std::size_t i = 0; i < sig.m; ++i) base.integer[i] += g.integer()[i];
        for (std::size_t i = 0; i < sig.finite.size(); ++i)
            base.finite[i] = mod_floor(base.finite[i] + g.finite()[i], sig.finite[i]);
        std::vector<Cell> partial{base};
        for (std::size_t i = 0; i < sig.l; ++i) {
            auto arcs = make_arc(c.torus[i].lo + g.torus()[i], c.torus[i].hi + g.torus()[i]);
            std::vector<Cell> next;
            for (const auto& p : partial)
                for (const auto& arc : arcs) {
                    Cell q = p;
                    q.torus[i] = arc;
                    next.push_back(std::move(q));
                }
            partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    return Region(sig, out);
}

/// Closed bounding box of the real and integer coordinates. Throws on an empty region.
struct BoundingBox {
    RationalVector real_lo, real_hi, int_lo, int_hi;
};

inline BoundingBox bounding_box(const Region& r) {
    if (r.empty()) throw InputError("bounding box of an empty region");
    const auto& sig = r.signature();
    BoundingBox b;
    const Cell& first = r.cells().front();
    for (std::size_t i = 0; i < sig.d; ++i) {
        b.real_lo.push_back(first.real[i].lo);
        b.real_hi.push_back(first.real[i].hi);
    }
    for (std::size_t i = 0; i < sig.m; ++i) {
        b.int_lo.emplace_back(first.integer[i]);
        b.int_hi.emplace_back(first.integer[i]);
    }
    for (const auto& c : r.cells()) {
        for (std::size_t i = 0; i < sig.d; ++i) {
            b.real_lo[i] = std::min(b.real_lo[i], c.real[i].lo);
            b.real_hi[i] = std::max(b.real_hi[i], c.real[i].hi);
        }
        for (std::size_t i = 0; i < sig.m; ++i) {
            b.int_lo[i] = std::min(b.int_lo[i], Rational(c.integer[i]));
            b.int_hi[i] = std::max(b.int_hi[i], Rational(c.integer[i]));
        }
    }
    return b;
}

/// A partition of the union of `regions` into cells such that every input region is a union
/// of some of them. Cells come from the grid of all breakpoints, one discrete key at a time.
inline std::vector<Cell> refine_breakpoints(const std::vector<Region>& regions) {
    if (regions.empty()) return {};
    const auto& sig = regions.front().signature();
    for (const auto& r : regions) require_same(sig, r.signature());
    const std::size_t dims = sig.continuous_dims();

    std::map<detail::Key, std::vector<std::vector<Rational>>> cuts;
    for (const auto& r : regions)
        for (const auto& c : r.cells()) {
            auto& axes = cuts[{c.integer, c.finite}];
            axes.resize(dims);
            auto box = detail::box_of(c);
            for (std::size_t i = 0; i < dims; ++i) {
                axes[i].push_back(box[i].lo);
                axes[i].push_back(box[i].hi);
            }
        }

    std::vector<Cell> out;
    for (auto& [key, axes] : cuts) {
        for (auto& v : axes) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
        std::vector<const Cell*> candidates;
        for (const auto& r : regions)
            for (const auto& c : r.cells())
                if (c.integer == key.first && c.finite == key.second) candidates.push_back(&c);

        detail::Box box(dims);
        std::vector<std::size_t> idx(dims, 0);
        auto inside = [&](const Cell& c) {
            auto cb = detail::box_of(c);
            for (std::size_t i = 0; i < dims; ++i)
                if (!cb[i].contains(box[i].lo)) return false;
            return true;
        };
        auto recurse = [&](auto&& self, std::size_t axis) -> void {
            if (axis == dims) {
                for (const Cell* c : candidates)
                    if (inside(*c)) {
                        out.push_back(detail::cell_of(key, box, sig.d));
                        return;
                    }
                return;
            }
            for (std::size_t i = 0; i + 1 < axes[axis].size(); ++i) {
                box[axis] = Interval{axes[axis][i], axes[axis][i + 1]};
                self(self, axis + 1);
            }
        };
        recurse(recurse, 0);
    }
    return out;
}

/// Representative point of a cell (its lower corner).
inline GroupElement corner(const Cell& c, const GroupSignature& sig) {
    RationalVector real, torus;
    for (const auto& iv : c.real) real.push_back(iv.lo);
    for (const auto& iv : c.torus) torus.push_back(iv.lo);
    return GroupElement::make(sig, real, c.integer, torus, c.finite);
}

/// The box prod [0, b_ii) of the triangular basis on every factor.
inline Region fundamental_domain(const Lattice& H) {
    const auto& sig = H.signature();
    Cell base;
    for (std::size_t i = 0; i < sig.d; ++i) base.real.push_back(Interval{0, H.real().diagonal(i)});
    for (std::size_t i = 0; i < sig.l; ++i) base.torus.push_back(Interval{0, H.torus().diagonal(i)});
    std::vector<Cell> cells{base};
    auto expand = [&](const RationalLattice& lat, IntegerVector Cell::*field) {
        std::vector<Cell> next;
        for (const auto& c : cells) {
            std::vector<Cell> partial{c};
            for (std::size_t i = 0; i < lat.dim(); ++i) {
                std::vector<Cell> grown;
                long n = to_long(lat.diagonal(i).get_num());
                for (const auto& p : partial)
                    for (long v = 0; v < n; ++v) {
                        Cell q = p;
                        (q.*field).push_back(Integer(v));
                        grown.push_back(std::move(q));
                    }
                partial = std::move(grown);
            }
            next.insert(next.end(), partial.begin(), partial.end());
        }
        cells = std::move(next);
    };
    expand(H.integer(), &Cell::integer);
    expand(H.finite(), &Cell::finite);
    return Region(sig, cells);
}

/// lambda + [-w/2, w/2)^d x {0} x [-w/2, w/2)^l x {e} with w = 2^-n. Requires lambda in the
/// generation-n dyadic lattice.
inline Region dyadic_cube(long n, const GroupElement& lambda) {
    const auto& sig = lambda.signature();
    if (!dyadic_lattice(n, sig).contains(lambda))
        throw InputError("cube centre " + to_string(lambda) + " is not in the generation-" + std::to_string(n) +
                         " lattice");
    Rational half = pow2(-n - 1);
    Cell c;
    for (const auto& x : lambda.real()) c.real.push_back(Interval{x - half, x + half});
    c.integer = lambda.integer();
    c.finite = lambda.finite();
    std::vector<Cell> cells{c};
    for (const auto& t : lambda.torus()) {
        auto arcs = make_arc(t - half, t + half);
        std::vector<Cell> next;
        for (const auto& p : cells)
            for (const auto& arc : arcs) {
                Cell q = p;
                q.torus.push_back(arc);
                next.push_back(std::move(q));
            }
        cells = std::move(next);
    }
    return Region(sig, cells);
}

inline std::string to_string(const Region& r) {
    std::string s;
    for (const auto& c : r.cells()) {
        if (!s.empty()) s += " u ";
        std::string part;
        auto add = [&](const std::string& x) { part += part.empty() ? x : " x " + x; };
        for (const auto& iv : c.real) add("[" + iv.lo.get_str() + "," + iv.hi.get_str() + ")");
        for (const auto& z : c.integer) add("{" + z.get_str() + "}");
        for (const auto& iv : c.torus) add("T[" + iv.lo.get_str() + "," + iv.hi.get_str() + ")");
        for (const auto& z : c.finite) add("{" + z.get_str() + "}");
        s += part.empty() ? "{e}" : part;
    }
    return s.empty() ? "{}" : s;
}

}  // namespace lcatile
