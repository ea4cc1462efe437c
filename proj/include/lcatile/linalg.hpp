#pragma once

// Full-rank rational lattices in Q^n kept in column Hermite normal form.
//
// The basis is upper triangular with positive diagonal and every entry to the
// right of a diagonal entry reduced into [0, diagonal). Two lattices are equal
// iff their bases are equal. The triangular shape makes the half-open box
// prod_i [0, b_ii) a fundamental domain, which is what lets every fundamental
// domain in this library be an exact box region.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace lcatile {

using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;

class RationalLattice {
public:
    RationalLattice() = default;

    /// Lattice spanned by `generators` (each a vector of length `dim`).
    /// Throws InputError when the generators do not span Q^dim.
    static RationalLattice from_generators(std::size_t dim, const std::vector<RationalVector>& generators) {
        for (const auto& g : generators)
            if (g.size() != dim) throw ArityMismatch("lattice generator has wrong length");
        RationalLattice lat;
        lat.dim_ = dim;
        if (dim == 0) return lat;

        Integer den = 1;
        for (const auto& g : generators)
            for (const auto& x : g) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());

        std::vector<IntegerVector> cols;
        cols.reserve(generators.size());
        for (const auto& g : generators) {
            IntegerVector c(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                Rational scaled = g[i] * Rational(den);
                c[i] = scaled.get_num();
            }
            cols.push_back(std::move(c));
        }

        std::vector<IntegerVector> basis(dim);
        for (std::size_t row = dim; row-- > 0;) {
            std::size_t pivot = cols.size();
            for (;;) {
                pivot = cols.size();
                for (std::size_t c = 0; c < cols.size(); ++c) {
                    if (cols[c][row] == 0) continue;
                    if (pivot == cols.size() || abs(cols[c][row]) < abs(cols[pivot][row])) pivot = c;
                }
                if (pivot == cols.size()) throw InputError("lattice generators are not of full rank");
                bool reduced = true;
                for (std::size_t c = 0; c < cols.size(); ++c) {
                    if (c == pivot || cols[c][row] == 0) continue;
                    Integer q;
                    mpz_fdiv_q(q.get_mpz_t(), cols[c][row].get_mpz_t(), cols[pivot][row].get_mpz_t());
                    for (std::size_t i = 0; i <= row; ++i) cols[c][i] -= q * cols[pivot][i];
                    if (cols[c][row] != 0) reduced = false;
                }
                if (reduced) break;
            }
            if (cols[pivot][row] < 0)
                for (auto& x : cols[pivot]) x = -x;
            basis[row] = std::move(cols[pivot]);
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(pivot));
        }

        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t r = j; r-- > 0;) {
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), basis[j][r].get_mpz_t(), basis[r][r].get_mpz_t());
                if (q == 0) continue;
                for (std::size_t i = 0; i <= r; ++i) basis[j][i] -= q * basis[r][i];
            }
        }

        lat.basis_.assign(dim, RationalVector(dim, Rational(0)));
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t i = 0; i <= j; ++i) lat.basis_[i][j] = make_rational(basis[j][i], den);
        return lat;
    }

    static RationalLattice scaled_identity(std::size_t dim, const Rational& scale) {
        std::vector<RationalVector> gens(dim, RationalVector(dim, Rational(0)));
        for (std::size_t i = 0; i < dim; ++i) gens[i][i] = scale;
        return from_generators(dim, gens);
    }

    std::size_t dim() const { return dim_; }

    /// Entry (row, col); column `col` is the col-th basis vector.
    const Rational& at(std::size_t row, std::size_t col) const { return basis_[row][col]; }
    const Rational& diagonal(std::size_t i) const { return basis_[i][i]; }

    RationalVector column(std::size_t j) const {
        RationalVector c(dim_);
        for (std::size_t i = 0; i < dim_; ++i) c[i] = basis_[i][j];
        return c;
    }

    std::vector<RationalVector> basis_vectors() const {
        std::vector<RationalVector> out;
        for (std::size_t j = 0; j < dim_; ++j) out.push_back(column(j));
        return out;
    }

    /// Covolume |det B|.
    Rational determinant() const {
        Rational det = 1;
        for (std::size_t i = 0; i < dim_; ++i) det *= basis_[i][i];
        return det;
    }

    /// Solves B z = x.
    RationalVector coordinates(const RationalVector& x) const {
        check_length(x);
        RationalVector z(dim_);
        for (std::size_t i = dim_; i-- > 0;) {
            Rational s = x[i];
            for (std::size_t j = i + 1; j < dim_; ++j) s -= basis_[i][j] * z[j];
            z[i] = s / basis_[i][i];
        }
        return z;
    }

    bool contains(const RationalVector& x) const {
        for (const auto& z : coordinates(x))
            if (!is_integer(z)) return false;
        return true;
    }

    /// The unique point of x + L inside the box prod_i [0, b_ii).
    RationalVector reduce(const RationalVector& x) const {
        check_length(x);
        RationalVector y = x;
        for (std::size_t i = dim_; i-- > 0;) {
            Rational q(floor_of(y[i] / basis_[i][i]));
            if (q == 0) continue;
            for (std::size_t r = 0; r <= i; ++r) y[r] -= q * basis_[r][i];
        }
        return y;
    }

    /// {y : <x, y> in Z for all x in L}.
    RationalLattice dual() const {
        if (dim_ == 0) return *this;
        // Inverse of the upper-triangular basis, then transpose.
        std::vector<RationalVector> inv(dim_, RationalVector(dim_, Rational(0)));
        for (std::size_t j = 0; j < dim_; ++j) {
            inv[j][j] = Rational(1) / basis_[j][j];
            for (std::size_t i = j; i-- > 0;) {
                Rational s = 0;
                for (std::size_t t = i + 1; t <= j; ++t) s += basis_[i][t] * inv[t][j];
                inv[i][j] = -s / basis_[i][i];
            }
        }
        std::vector<RationalVector> gens(dim_, RationalVector(dim_));
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t i = 0; i < dim_; ++i) gens[j][i] = inv[j][i];  // column j of inv^T = row j of inv
        return from_generators(dim_, gens);
    }

    /// diag(s) * L.
    RationalLattice scale_rows(const RationalVector& s) const {
        check_length(s);
        auto gens = basis_vectors();
        for (auto& g : gens)
            for (std::size_t i = 0; i < dim_; ++i) g[i] *= s[i];
        return from_generators(dim_, gens);
    }

    /// Visits every lattice point x with lo <= x <= hi componentwise.
    template <class Visitor>
    void for_each_point_in_box(const RationalVector& lo, const RationalVector& hi, Visitor&& visit) const {
        check_length(lo);
        check_length(hi);
        RationalVector z(dim_), x(dim_, Rational(0));
        walk(dim_, lo, hi, z, visit);
    }

    friend bool operator==(const RationalLattice& a, const RationalLattice& b) {
        return a.dim_ == b.dim_ && a.basis_ == b.basis_;
    }

private:
    void check_length(const RationalVector& x) const {
        if (x.size() != dim_) throw ArityMismatch("vector length does not match lattice dimension");
    }

    template <class Visitor>
    void walk(std::size_t rows_left, const RationalVector& lo, const RationalVector& hi, RationalVector& z,
              Visitor& visit) const {
        if (rows_left == 0) {
            RationalVector x(dim_, Rational(0));
            for (std::size_t i = 0; i < dim_; ++i)
                for (std::size_t j = i; j < dim_; ++j) x[i] += basis_[i][j] * z[j];
            visit(x);
            return;
        }
        std::size_t row = rows_left - 1;
        Rational s = 0;
        for (std::size_t j = row + 1; j < dim_; ++j) s += basis_[row][j] * z[j];
        Integer zmin = ceil_of((lo[row] - s) / basis_[row][row]);
        Integer zmax = floor_of((hi[row] - s) / basis_[row][row]);
        for (Integer v = zmin; v <= zmax; ++v) {
            z[row] = v;
            walk(row, lo, hi, z, visit);
        }
    }

    std::size_t dim_ = 0;
    std::vector<RationalVector> basis_;  // basis_[row][col]
};

}  // namespace lcatile
