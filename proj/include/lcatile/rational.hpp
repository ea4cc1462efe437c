#pragma once

// Exact scalars. Every coordinate, endpoint and lattice generator in the
// library is a GMP rational; doubles only appear after a phase has been
// reduced exactly.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace lcatile {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den = 1) {
    if (den == 0) throw InputError("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p/q", "p" or a finite decimal such as "-0.125" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) throw InputError("empty rational literal");

    auto parse_int = [&](const std::string& t) {
        if (t.empty() || t == "-" || t == "+") throw InputError("malformed rational literal '" + s + "'");
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i])))
                throw InputError("malformed rational literal '" + s + "'");
        return Integer(t[0] == '+' ? t.substr(1) : t, 10);
    };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        return make_rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Integer w = parse_int(whole);
        Integer f = frac.empty() ? Integer(0) : parse_int(frac);
        if (frac.size() && (frac[0] == '-' || frac[0] == '+'))
            throw InputError("malformed rational literal '" + s + "'");
        Integer num = abs(w) * scale + f;
        if (negative || w < 0) num = -num;
        return make_rational(num, scale);
    }
    return Rational(parse_int(s));
}

inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Integer floor_of(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer ceil_of(const Rational& r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

/// Representative of r modulo 1 in [0, 1).
inline Rational frac(const Rational& r) { return r - Rational(floor_of(r)); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// Non-negative residue of z modulo a positive modulus.
inline Integer mod_floor(const Integer& z, const Integer& modulus) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

inline Rational pow2(long e) {
    Integer p = 1;
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e < 0 ? -e : e));
    return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw InputError("integer " + z.get_str() + " out of machine range");
    return z.get_si();
}

/// e^{2 pi i phase}. The phase is reduced exactly to a quarter-turn plus a
/// remainder in [-1/8, 1/8) before any floating point is involved, so points
/// on the axes (1, i, -1, -i) come out exact.
inline std::complex<double> unit_phase(const Rational& phase) {
    Rational quarter_turns = frac(phase) * 4;
    Integer q = floor_of(quarter_turns + Rational(1, 2));
    Rational rest = quarter_turns - Rational(q);  // in [-1/2, 1/2)
    std::complex<double> base(1.0, 0.0);
    if (rest != 0) {
        double angle = std::numbers::pi / 2.0 * rest.get_d();
        base = {std::cos(angle), std::sin(angle)};
    }
    switch (mod_floor(q, 4).get_si()) {
        case 1: return {-base.imag(), base.real()};
        case 2: return {-base.real(), -base.imag()};
        case 3: return {base.imag(), -base.real()};
        default: return base;
    }
}

}  // namespace lcatile
