#pragma once

// Independent checks: a Gram oracle on Z_N built from residues and complex
// exponentials, a truncated Gram estimate for continuous instances, and the
// staircase decay profile.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "coset_union.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "region.hpp"
#include "tiling.hpp"

namespace lcatile {

/// Frequency group Z_N, Omega a subset, Lambda = q Z_N, shifts a_j in the spatial Z_N.
struct FiniteInstance {
    long N = 1;
    std::vector<long> omega;
    long q = 1;
    std::vector<long> a;

    void validate() const {
        if (N < 1) throw InputError("modulus must be positive");
        if (q < 1 || N % q != 0) throw InputError("q must divide N");
        std::set<long> seen;
        for (long w : omega)
            if (w < 0 || w >= N || !seen.insert(w).second) throw InputError("omega must be distinct residues mod N");
    }

    GroupSignature frequency() const { return GroupSignature{0, 0, 0, {N}, Side::frequency}; }

    Region region() const {
        std::vector<Cell> cells;
        for (long w : omega) cells.push_back(Cell{{}, {}, {}, {Integer(w)}});
        return Region(frequency(), cells);
    }

    Lattice lattice() const { return Lattice::from_generators(frequency(), {}, {}, {}, {{Rational(q)}}); }

    std::vector<GroupElement> tuple() const {
        std::vector<GroupElement> out;
        auto s = dual_signature(frequency());
        for (long x : a) out.push_back(GroupElement::make(s, {}, {}, {}, {Integer(x)}));
        return out;
    }
};

struct GramBounds {
    double A = 0;      // normalized so that a fundamental domain of Lambda has mass 1
    double B = 0;
    double A_raw = 0;  // with mass 1/N per point
    double B_raw = 0;
    std::size_t size = 0;
};

/// Extreme eigenvalues of the Gram matrix of {e_{a_j - h} chi_Omega : h in H, j}, H = (N/q) Z_N.
inline GramBounds gram_bounds(const FiniteInstance& inst) {
    inst.validate();
    const long step = inst.N / inst.q;
    std::vector<long> xs;
    for (long a : inst.a)
        for (long t = 0; t < inst.q; ++t) xs.push_back(((a - t * step) % inst.N + inst.N) % inst.N);
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXcd G(n, n);
    for (Eigen::Index u = 0; u < n; ++u)
        for (Eigen::Index v = 0; v < n; ++v) {
            std::complex<double> s = 0;
            long diff = xs[static_cast<std::size_t>(u)] - xs[static_cast<std::size_t>(v)];
            for (long w : inst.omega) {
                long r = ((diff * w) % inst.N + inst.N) % inst.N;
                s += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(inst.N));
            }
            G(u, v) = s;
        }
    GramBounds out;
    out.size = xs.size();
    if (n == 0) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G, Eigen::EigenvaluesOnly);
    double lo = std::max(0.0, eig.eigenvalues()(0)), hi = eig.eigenvalues()(n - 1);
    out.A = lo / static_cast<double>(inst.q);
    out.B = hi / static_cast<double>(inst.q);
    out.A_raw = lo / static_cast<double>(inst.N);
    out.B_raw = hi / static_cast<double>(inst.N);
    return out;
}

/// Multiplicities counted point by point: x in {0..q-1} against every element of q Z_N.
inline MultiplicityProfile brute_force_profile(const FiniteInstance& inst) {
    inst.validate();
    std::set<long> in(inst.omega.begin(), inst.omega.end());
    MultiplicityProfile p;
    for (long x = 0; x < inst.q; ++x) {
        long count = 0;
        for (long t = 0; t < inst.N; t += inst.q) count += in.count((x + t) % inst.N);
        p[count] += make_rational(1, inst.N);
    }
    return p;
}

/// A k-tiling instance: k distinct members of every coset of q Z_N, random shifts.
inline FiniteInstance random_finite_instance(std::mt19937_64& rng, long max_N, long max_k) {
    auto pick = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
    FiniteInstance inst;
    long k = pick(1, max_k);
    std::vector<std::pair<long, long>> shapes;
    for (long N = k; N <= max_N; ++N)
        for (long q = 1; q <= N; ++q)
            if (N % q == 0 && N / q >= k) shapes.emplace_back(N, q);
    auto [N, q] = shapes[static_cast<std::size_t>(pick(0, static_cast<long>(shapes.size()) - 1))];
    inst.N = N;
    inst.q = q;
    for (long r = 0; r < q; ++r) {
        std::vector<long> ts;
        for (long t = 0; t < N / q; ++t) ts.push_back(t);
        for (long j = 0; j < k; ++j) {
            auto idx = static_cast<std::size_t>(pick(j, static_cast<long>(ts.size()) - 1));
            std::swap(ts[static_cast<std::size_t>(j)], ts[idx]);
            inst.omega.push_back(r + q * ts[static_cast<std::size_t>(j)]);
        }
    }
    std::sort(inst.omega.begin(), inst.omega.end());
    for (long j = 0; j < k; ++j) inst.a.push_back(pick(0, N - 1));
    return inst;
}

/// Sampling a 1-D real instance with Lambda = Z on the grid (1/M)Z, frequencies read mod N = M L.
/// Requires endpoints in (1/M)Z, Omega inside a window of length L, and a_j L integral.
inline FiniteInstance discretize(const Region& omega, const std::vector<Rational>& a, long M, long L) {
    const auto& s = omega.signature();
    if (s.d != 1 || s.m || s.l || !s.finite.empty())
        throw InputError("discretization needs a region of the real line");
    if (M < 1 || L < 1) throw InputError("grid parameters must be positive");
    FiniteInstance inst;
    inst.N = M * L;
    inst.q = M;
    auto box = bounding_box(omega);
    if (box.real_hi[0] - box.real_lo[0] > L) throw InputError("region does not fit in one period");
    for (const auto& c : omega.cells()) {
        Rational lo = c.real[0].lo * M, hi = c.real[0].hi * M;
        if (!is_integer(lo) || !is_integer(hi)) throw InputError("endpoints are not on the grid");
        for (long j = to_long(lo.get_num()); j < to_long(hi.get_num()); ++j)
            inst.omega.push_back(((j % inst.N) + inst.N) % inst.N);
    }
    std::sort(inst.omega.begin(), inst.omega.end());
    for (const auto& x : a) {
        Rational y = x * L;
        if (!is_integer(y)) throw InputError("shift " + x.get_str() + " is not on the dual grid");
        inst.a.push_back(to_long(mod_floor(y.get_num(), inst.N)));
    }
    return inst;
}

struct GramEstimate {
    double A_est = 0;
    double B_est = 0;
    std::size_t functions = 0;
    std::size_t samples = 0;
};

/// Midpoint-rule Gram of {e_x chi_Omega : x in J, |x_i| <= window} for a region of R^d, with `grid`
/// sample points per unit length on every cell axis, normalized like the certificates.
inline GramEstimate truncated_gram_estimate(const Region& omega, const CosetUnion& J, long grid, const Rational& window) {
    const auto& s = omega.signature();
    if (s.d == 0 || s.m || s.l || !s.finite.empty()) throw InputError("Gram estimate needs a region of R^d");
    if (J.H.signature() != dual_signature(s)) throw SignatureMismatch("coset union is not in the dual group");
    if (grid < 1) throw InputError("grid must be positive");

    std::vector<std::vector<double>> xs;
    for (const auto& a : J.shifts) {
        RationalVector lo, hi;
        for (std::size_t i = 0; i < s.d; ++i) {
            lo.push_back(-window - a.real()[i]);
            hi.push_back(window - a.real()[i]);
        }
        J.H.real().for_each_point_in_box(lo, hi, [&](const RationalVector& h) {
            std::vector<double> x;
            for (std::size_t i = 0; i < s.d; ++i) x.push_back(to_double(a.real()[i] + h[i]));
            xs.push_back(std::move(x));
        });
    }

    struct AxisGrid {
        double start, h;
        long count;
    };
    std::vector<std::vector<AxisGrid>> cells;
    std::size_t samples = 0;
    for (const auto& c : omega.cells()) {
        std::vector<AxisGrid> axes;
        std::size_t cell_samples = 1;
        for (const auto& iv : c.real) {
            long count = std::max<long>(1, to_long(ceil_of(iv.length() * grid)));
            double h = to_double(iv.length()) / static_cast<double>(count);
            axes.push_back({to_double(iv.lo), h, count});
            cell_samples *= static_cast<std::size_t>(count);
        }
        samples += cell_samples;
        cells.push_back(std::move(axes));
    }
    GramEstimate out;
    out.functions = xs.size();
    out.samples = samples;
    if (xs.empty() || samples < xs.size())
        throw InputError("window too small: " + std::to_string(samples) + " sample points for " +
                         std::to_string(xs.size()) + " functions");

    // sum over a cell of e^{2 pi i delta . w} h^d, one closed-form geometric sum per axis
    auto cell_sum = [&](const std::vector<AxisGrid>& axes, const std::vector<double>& delta) {
        std::complex<double> total = 1;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const auto& g = axes[i];
            double theta = 2 * std::numbers::pi * delta[i] * g.h;
            std::complex<double> first = std::polar(g.h, 2 * std::numbers::pi * delta[i] * (g.start + g.h / 2));
            std::complex<double> z = std::polar(1.0, theta);
            std::complex<double> sum;
            if (std::abs(1.0 - z) < 1e-13) {
                sum = first * static_cast<double>(g.count);
            } else {
                sum = first * (1.0 - std::pow(z, static_cast<double>(g.count))) / (1.0 - z);
            }
            total *= sum;
        }
        return total;
    };

    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXcd G(n, n);
    std::vector<double> delta(s.d);
    for (Eigen::Index u = 0; u < n; ++u)
        for (Eigen::Index v = u; v < n; ++v) {
            for (std::size_t i = 0; i < s.d; ++i)
                delta[i] = xs[static_cast<std::size_t>(u)][i] - xs[static_cast<std::size_t>(v)][i];
            std::complex<double> g = 0;
            for (const auto& axes : cells) g += cell_sum(axes, delta);
            G(u, v) = g;
            G(v, u) = std::conj(g);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G, Eigen::EigenvaluesOnly);
    double scale = to_double(J.H.covolume());
    out.A_est = eig.eigenvalues()(0) * scale;
    out.B_est = eig.eigenvalues()(n - 1) * scale;
    return out;
}

/// [0,1) u [n - 2^-(n-2), n - 2^-(n-1)) for n = 2..N.
inline Region omega0_truncation(long N) {
    if (N < 1) throw InputError("truncation index must be positive");
    GroupSignature R{1, 0, 0, {}, Side::frequency};
    std::vector<Cell> cells{Cell{{Interval{0, 1}}, {}, {}, {}}};
    for (long n = 2; n <= N; ++n)
        cells.push_back(Cell{{Interval{Rational(n) - pow2(-(n - 2)), Rational(n) - pow2(-(n - 1))}}, {}, {}, {}});
    return Region(R, cells);
}

using Gap = std::variant<Rational, double>;

struct DecayRow {
    long n = 0;  // second offset; the first is always 0
    double sigma_min_sq = 0;
    double running_min = 0;
    bool exact_zero = false;
};

struct DecayProfile {
    std::vector<DecayRow> rows;
};

/// sigma_min^2 of [[1,1],[1,e^{2 pi i gap n}]] for n = 1..N_max, i.e. 4 sin^2(pi dist(n gap, Z) / 2).
inline DecayProfile counterexample_profile(long n_max, const Gap& gap) {
    if (n_max < 1) throw InputError("nmax must be positive");
    if (const auto* r = std::get_if<Rational>(&gap); r && is_integer(*r))
        throw InputError("the two shifts coincide modulo 1");
    if (const auto* x = std::get_if<double>(&gap); x && (!std::isfinite(*x) || *x == std::round(*x)))
        throw InputError("the two shifts coincide modulo 1");
    DecayProfile p;
    double running = std::numeric_limits<double>::infinity();
    for (long n = 1; n <= n_max; ++n) {
        DecayRow row{n, 0, 0, false};
        double dist;
        if (const auto* r = std::get_if<Rational>(&gap)) {
            Rational f = frac(*r * n);
            Rational d = std::min(f, Rational(1 - f));
            row.exact_zero = d == 0;
            dist = to_double(d);
        } else {
            double y = std::get<double>(gap) * static_cast<double>(n);
            dist = std::abs(y - std::round(y));
        }
        double sn = std::sin(std::numbers::pi * dist / 2);
        row.sigma_min_sq = row.exact_zero ? 0.0 : 4 * sn * sn;
        running = std::min(running, row.sigma_min_sq);
        row.running_min = running;
        p.rows.push_back(row);
    }
    return p;
}

}  // namespace lcatile
