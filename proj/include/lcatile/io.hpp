#pragma once

// JSON and CSV forms of every value the command line reads or writes.
// Rationals are "p/q" strings, integers are JSON numbers, and parse errors name
// the offending field by its path, e.g. "region.cells[2].real[0][1]".

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "approx.hpp"
#include "coset_union.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "oracle.hpp"
#include "region.hpp"
#include "riesz.hpp"
#include "tiling.hpp"

namespace lcatile::io {

using nlohmann::ordered_json;
using Json = ordered_json;

inline constexpr const char* version = "lcatile 1.0.0";

inline void fail(const std::string& path, const std::string& what) { throw InputError(path + ": " + what); }

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing");
    return *it;
}

inline const Json* optional_field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

inline const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

inline std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline Rational rational(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) fail(path, "expected a rational \"p/q\" string");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return 0;
}

inline Integer integer(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Integer(j.get<long>());
    if (j.is_string()) {
        Rational r = rational(j, path);
        if (is_integer(r)) return r.get_num();
    }
    fail(path, "expected an integer");
    return 0;
}

inline long small_integer(const Json& j, const std::string& path) {
    Integer z = integer(j, path);
    if (!z.fits_slong_p()) fail(path, "integer out of range");
    return z.get_si();
}

inline double number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

inline Json to_json(const Rational& r) { return r.get_str(); }

inline Json to_json(const Integer& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

inline RationalVector rationals(const Json& j, const std::string& path) {
    RationalVector out;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(rational(j[i], item(path, i)));
    return out;
}

inline IntegerVector integers(const Json& j, const std::string& path) {
    IntegerVector out;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(integer(j[i], item(path, i)));
    return out;
}

inline Json to_json(const GroupElement& g);
inline Json to_json(const FiberConfiguration& c);

template <class V>
Json list(const V& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

inline void check_length(std::size_t got, std::size_t want, const std::string& path) {
    if (got != want)
        throw ArityMismatch(path + ": expected " + std::to_string(want) + " entries, got " + std::to_string(got));
}

// ---- signature

inline Json to_json(const GroupSignature& s) {
    Json j;
    j["d"] = s.d;
    j["m"] = s.m;
    j["l"] = s.l;
    j["finite"] = s.finite;
    j["side"] = s.side == Side::spatial ? "spatial" : "frequency";
    return j;
}

inline GroupSignature signature_from_json(const Json& j, const std::string& path) {
    GroupSignature s;
    auto dim = [&](const char* key) {
        long v = small_integer(field(j, key, path), path + "." + key);
        if (v < 0) fail(path + "." + key, "must be non-negative");
        return static_cast<std::size_t>(v);
    };
    s.d = dim("d");
    s.m = dim("m");
    s.l = dim("l");
    if (auto* f = optional_field(j, "finite", path)) {
        for (std::size_t i = 0; i < array(*f, path + ".finite").size(); ++i) {
            long q = small_integer((*f)[i], item(path + ".finite", i));
            if (q < 1) fail(item(path + ".finite", i), "cyclic orders must be positive");
            s.finite.push_back(q);
        }
    }
    if (auto* side = optional_field(j, "side", path)) {
        if (*side == "spatial") s.side = Side::spatial;
        else if (*side == "frequency") s.side = Side::frequency;
        else fail(path + ".side", "expected \"spatial\" or \"frequency\"");
    }
    return s;
}

// ---- elements

inline Json to_json(const GroupElement& g) {
    Json j;
    j["real"] = list(g.real());
    j["int"] = list(g.integer());
    j["torus"] = list(g.torus());
    j["finite"] = list(g.finite());
    return j;
}

inline GroupElement element_from_json(const Json& j, const GroupSignature& s, const std::string& path) {
    auto part = [&](const char* key) -> Json {
        auto* f = optional_field(j, key, path);
        return f ? *f : Json::array();
    };
    auto real = rationals(part("real"), path + ".real");
    auto ints = integers(part("int"), path + ".int");
    auto torus = rationals(part("torus"), path + ".torus");
    auto fins = integers(part("finite"), path + ".finite");
    check_length(real.size(), s.d, path + ".real");
    check_length(ints.size(), s.m, path + ".int");
    check_length(torus.size(), s.l, path + ".torus");
    check_length(fins.size(), s.finite.size(), path + ".finite");
    return GroupElement::make(s, real, ints, torus, fins);
}

inline std::vector<GroupElement> elements_from_json(const Json& j, const GroupSignature& s, const std::string& path) {
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(element_from_json(j[i], s, item(path, i)));
    return out;
}

// ---- lattices

inline Json columns(const RationalLattice& L, bool integral) {
    Json out = Json::array();
    for (const auto& v : L.basis_vectors()) {
        Json col = Json::array();
        for (const auto& x : v) col.push_back(integral ? to_json(x.get_num()) : to_json(x));
        out.push_back(col);
    }
    return out;
}

inline Json to_json(const Lattice& H) {
    Json j;
    j["signature"] = to_json(H.signature());
    j["real_gens"] = columns(H.real(), false);
    j["int_index"] = columns(H.integer(), true);
    j["torus_gens"] = columns(H.torus(), false);
    j["finite_gens"] = columns(H.finite(), true);
    return j;
}

inline Lattice lattice_from_json(const Json& j, const std::string& path) {
    auto s = signature_from_json(field(j, "signature", path), path + ".signature");
    auto gens = [&](const char* key, std::size_t dim) {
        std::vector<RationalVector> out;
        auto* f = optional_field(j, key, path);
        if (!f) return out;
        std::string p = path + "." + key;
        for (std::size_t i = 0; i < array(*f, p).size(); ++i) {
            out.push_back(rationals((*f)[i], item(p, i)));
            check_length(out.back().size(), dim, item(p, i));
        }
        return out;
    };
    auto real = gens("real_gens", s.d);
    auto ints = gens("int_index", s.m);
    auto torus = gens("torus_gens", s.l);
    auto fins = gens("finite_gens", s.finite.size());
    for (std::size_t i = 0; i < ints.size(); ++i)
        for (const auto& x : ints[i])
            if (!is_integer(x)) fail(item(path + ".int_index", i), "integer sublattice generators must be integral");
    for (std::size_t i = 0; i < fins.size(); ++i)
        for (const auto& x : fins[i])
            if (!is_integer(x)) fail(item(path + ".finite_gens", i), "finite generators must be integral");
    return Lattice::from_generators(s, real, ints, torus, fins);
}

// ---- regions

inline Json intervals_json(const std::vector<Interval>& v) {
    Json out = Json::array();
    for (const auto& iv : v) out.push_back(Json::array({to_json(iv.lo), to_json(iv.hi)}));
    return out;
}

inline Json to_json(const Cell& c) {
    Json j;
    j["real"] = intervals_json(c.real);
    j["int"] = list(c.integer);
    j["torus"] = intervals_json(c.torus);
    j["finite"] = list(c.finite);
    return j;
}

inline Cell cell_from_json(const Json& j, const GroupSignature& s, const std::string& path) {
    auto part = [&](const char* key) -> Json {
        auto* f = optional_field(j, key, path);
        return f ? *f : Json::array();
    };
    auto ivs = [&](const Json& a, const std::string& p) {
        std::vector<Interval> out;
        for (std::size_t i = 0; i < array(a, p).size(); ++i) {
            const auto& pair = array(a[i], item(p, i));
            if (pair.size() != 2) fail(item(p, i), "expected [lo, hi]");
            out.push_back(Interval{rational(pair[0], item(item(p, i), 0)), rational(pair[1], item(item(p, i), 1))});
        }
        return out;
    };
    Cell c{ivs(part("real"), path + ".real"), integers(part("int"), path + ".int"), ivs(part("torus"), path + ".torus"),
           integers(part("finite"), path + ".finite")};
    check_length(c.real.size(), s.d, path + ".real");
    check_length(c.integer.size(), s.m, path + ".int");
    check_length(c.torus.size(), s.l, path + ".torus");
    check_length(c.finite.size(), s.finite.size(), path + ".finite");
    try {
        Region(s, {c});
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return c;
}

inline Json to_json(const Region& r) {
    Json j;
    j["signature"] = to_json(r.signature());
    Json cells = Json::array();
    for (const auto& c : r.cells()) cells.push_back(to_json(c));
    j["cells"] = cells;
    return j;
}

inline Region region_from_json(const Json& j, const std::string& path) {
    auto s = signature_from_json(field(j, "signature", path), path + ".signature");
    std::vector<Cell> cells;
    const auto& cs = array(field(j, "cells", path), path + ".cells");
    for (std::size_t i = 0; i < cs.size(); ++i) cells.push_back(cell_from_json(cs[i], s, item(path + ".cells", i)));
    return Region(s, cells);
}

// ---- tuples and coset unions

inline Json tuple_to_json(const GroupSignature& s, const std::vector<GroupElement>& a) {
    Json j;
    j["signature"] = to_json(s);
    j["points"] = list(a);
    return j;
}

/// {"points": [...]} with an optional signature; without one the points live in `fallback`.
inline std::vector<GroupElement> tuple_from_json(const Json& j, const GroupSignature& fallback, const std::string& path) {
    GroupSignature s = fallback;
    if (auto* sig = optional_field(j, "signature", path)) {
        s = signature_from_json(*sig, path + ".signature");
        if (s != fallback)
            throw SignatureMismatch(path + ".signature: expected " + describe(fallback) + ", got " + describe(s));
    }
    return elements_from_json(field(j, "points", path), s, path + ".points");
}

inline Json to_json(const CosetUnion& J) {
    Json j;
    j["H"] = to_json(J.H);
    j["shifts"] = list(J.shifts);
    j["role"] = to_string(J.role);
    return j;
}

inline CosetUnion coset_union_from_json(const Json& j, const std::string& path) {
    auto H = lattice_from_json(field(j, "H", path), path + ".H");
    auto shifts = elements_from_json(field(j, "shifts", path), H.signature(), path + ".shifts");
    Role role = Role::basis;
    if (auto* r = optional_field(j, "role", path)) {
        if (*r == "sampling") role = Role::sampling;
        else if (*r == "interpolation") role = Role::interpolation;
        else if (*r == "basis") role = Role::basis;
        else fail(path + ".role", "expected sampling, interpolation or basis");
    }
    try {
        return CosetUnion::make(H, shifts, role);
    } catch (const InputError& e) {
        fail(path + ".shifts", e.what());
    }
    return {};
}

// ---- quotient data

inline Json to_json(const QuotientMap& K) {
    Json j;
    j["signature"] = to_json(K.ambient());
    j["torus_orders"] = K.torus_orders();
    j["finite_orders"] = K.finite_orders();
    return j;
}

inline QuotientMap quotient_from_json(const Json& j, const std::string& path) {
    auto s = signature_from_json(field(j, "signature", path), path + ".signature");
    auto orders = [&](const char* key, std::size_t n) {
        std::vector<long> out;
        if (auto* f = optional_field(j, key, path)) {
            for (std::size_t i = 0; i < array(*f, path + "." + key).size(); ++i)
                out.push_back(small_integer((*f)[i], item(path + "." + key, i)));
        } else {
            out.assign(n, 1);
        }
        check_length(out.size(), n, path + "." + key);
        return out;
    };
    try {
        return QuotientMap(s, orders("torus_orders", s.l), orders("finite_orders", s.finite.size()));
    } catch (const InputError& e) {
        fail(path, e.what());
    }
    throw InputError(path);
}

// ---- profiles, certificates, reports

inline Json to_json(const MultiplicityProfile& p) {
    Json out = Json::array();
    for (const auto& [k, m] : p) out.push_back(Json{{"multiplicity", k}, {"measure", to_json(m)}});
    return out;
}

inline MultiplicityProfile profile_from_json(const Json& j, const std::string& path) {
    MultiplicityProfile p;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) {
        auto p_i = item(path, i);
        p[small_integer(field(j[i], "multiplicity", p_i), p_i + ".multiplicity")] =
            rational(field(j[i], "measure", p_i), p_i + ".measure");
    }
    return p;
}

inline Json to_json(const FiberConfiguration& c) {
    return Json{{"cell", to_json(c.cell)}, {"offsets", list(c.offsets)}};
}

inline Json to_json(const RieszCertificate& c, const GroupSignature& s) {
    Json j;
    j["signature"] = to_json(s);
    j["A"] = c.A;
    j["B"] = c.B;
    j["haar_scale"] = to_json(c.haar_scale);
    Json rows = Json::array();
    for (const auto& r : c.configs)
        rows.push_back(Json{{"cell", to_json(r.cell)},
                            {"offsets", list(r.offsets)},
                            {"sigma_min_sq", r.sigma_min_sq},
                            {"sigma_max_sq", r.sigma_max_sq}});
    j["configs"] = rows;
    return j;
}

inline RieszCertificate certificate_from_json(const Json& j, const std::string& path) {
    auto s = signature_from_json(field(j, "signature", path), path + ".signature");
    RieszCertificate c;
    c.A = number(field(j, "A", path), path + ".A");
    c.B = number(field(j, "B", path), path + ".B");
    c.haar_scale = rational(field(j, "haar_scale", path), path + ".haar_scale");
    const auto& rows = array(field(j, "configs", path), path + ".configs");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto p = item(path + ".configs", i);
        c.configs.push_back(ConfigBound{cell_from_json(field(rows[i], "cell", p), s, p + ".cell"),
                                        elements_from_json(field(rows[i], "offsets", p), s, p + ".offsets"),
                                        number(field(rows[i], "sigma_min_sq", p), p + ".sigma_min_sq"),
                                        number(field(rows[i], "sigma_max_sq", p), p + ".sigma_max_sq")});
    }
    return c;
}

inline Json to_json(const FiniteInstance& f) {
    return Json{{"N", f.N}, {"omega", f.omega}, {"q", f.q}, {"a", f.a}};
}

inline FiniteInstance finite_instance_from_json(const Json& j, const std::string& path) {
    FiniteInstance f;
    f.N = small_integer(field(j, "N", path), path + ".N");
    f.q = small_integer(field(j, "q", path), path + ".q");
    for (const auto& [key, dst] : {std::pair{"omega", &f.omega}, std::pair{"a", &f.a}}) {
        const auto& a = array(field(j, key, path), path + "." + key);
        for (std::size_t i = 0; i < a.size(); ++i) dst->push_back(small_integer(a[i], item(path + "." + key, i)));
    }
    try {
        f.validate();
    } catch (const InputError& e) {
        fail(path, e.what());
    }
    return f;
}

// ---- manifest

struct Manifest {
    std::string subcommand;
    std::map<std::string, std::vector<std::string>> inputs;
    Json parameters = Json::object();
    std::string out;
    std::string format = "json";
    std::string version = io::version;
};

inline Json to_json(const Manifest& m) {
    Json j;
    j["subcommand"] = m.subcommand;
    Json in = Json::object();
    for (const auto& [k, v] : m.inputs) in[k] = v;
    j["inputs"] = in;
    j["parameters"] = m.parameters;
    j["out"] = m.out;
    j["format"] = m.format;
    j["version"] = m.version;
    return j;
}

inline Manifest manifest_from_json(const Json& j, const std::string& path) {
    Manifest m;
    auto str = [&](const char* key) {
        const auto& v = field(j, key, path);
        if (!v.is_string()) fail(path + "." + key, "expected a string");
        return v.get<std::string>();
    };
    m.subcommand = str("subcommand");
    const auto& in = field(j, "inputs", path);
    if (!in.is_object()) fail(path + ".inputs", "expected an object");
    for (const auto& [k, v] : in.items()) {
        for (std::size_t i = 0; i < array(v, path + ".inputs." + k).size(); ++i) {
            if (!v[i].is_string()) fail(item(path + ".inputs." + k, i), "expected a string");
            m.inputs[k].push_back(v[i].get<std::string>());
        }
    }
    m.parameters = field(j, "parameters", path);
    m.out = str("out");
    m.format = str("format");
    m.version = str("version");
    return m;
}

// ---- files and CSV

inline Json read_json_file(const std::string& file, const std::string& what) {
    std::ifstream in(file);
    if (!in) throw InputError(what + ": cannot open " + file);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(what + ": malformed JSON in " + file + " (" + e.what() + ")");
    }
}

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

/// Manifest as a leading comment line, then a header and the rows.
inline std::string csv(const Manifest& m, const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    out << "# manifest " << to_json(m).dump() << "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_quote(cells[i]);
        out << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out.str();
}

inline std::string offsets_text(const std::vector<GroupElement>& offs) {
    std::string s;
    for (const auto& g : offs) s += (s.empty() ? "" : " ") + to_string(g);
    return s;
}

inline std::string certificate_csv(const Manifest& m, const RieszCertificate& c, const GroupSignature& s) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : c.configs)
        rows.push_back({to_string(Region(s, {r.cell})), offsets_text(r.offsets), format_double(r.sigma_min_sq),
                        format_double(r.sigma_max_sq)});
    return csv(m, {"cell", "offsets", "sigma_min_sq", "sigma_max_sq"}, rows);
}

}  // namespace lcatile::io
