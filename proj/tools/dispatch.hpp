#pragma once

// Subcommand dispatch for the lcatile command line. Exit codes: 0 success,
// 1 input error, 2 mathematical negative (not a k-tiling, converse impossible,
// A below tolerance), 3 randomized search exhausted.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lcatile.hpp"
#include "lcatile/io.hpp"

namespace lcatile::cli {

using io::Json;

enum Exit { ok = 0, input_error = 1, negative = 2, exhausted = 3 };

struct Options {
    std::vector<std::string> regions, lattices;
    std::string tuple, basis, kernel, set, instance, epsilon, gap;
    std::optional<long> k;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    long max_tries = 1000;
    long nmax = 100;
    long count = 200;
    long max_n = 64;
    long max_k = 4;
    std::string out;
    std::string format;
};

struct Result {
    int code = ok;
    std::string artifact;
    std::string summary;
};

class Runner {
public:
    Runner(std::string subcommand, const Options& opt) : opt_(opt) {
        manifest_.subcommand = std::move(subcommand);
        manifest_.out = opt.out;
    }

    io::Manifest& manifest() { return manifest_; }
    const Options& options() const { return opt_; }

    void set_format(const std::string& fallback, bool csv_available) {
        manifest_.format = opt_.format.empty() ? fallback : opt_.format;
        if (manifest_.format != "json" && manifest_.format != "csv")
            throw InputError("--format: expected json or csv");
        if (manifest_.format == "csv" && !csv_available)
            throw InputError("--format: csv output is not available for " + manifest_.subcommand);
    }
    bool csv() const { return manifest_.format == "csv"; }

    Region region(std::size_t i = 0) {
        record("region", opt_.regions);
        if (opt_.regions.size() <= i) throw InputError("--region: missing");
        return io::region_from_json(io::read_json_file(opt_.regions[i], "--region"), "region");
    }

    Lattice lattice(std::size_t i = 0) {
        record("lattice", opt_.lattices);
        if (opt_.lattices.empty()) throw InputError("--lattice: missing");
        const auto& file = opt_.lattices[std::min(i, opt_.lattices.size() - 1)];
        return io::lattice_from_json(io::read_json_file(file, "--lattice"), "lattice");
    }

    std::vector<GroupElement> tuple(const GroupSignature& s) {
        record("tuple", {opt_.tuple});
        if (opt_.tuple.empty()) throw InputError("--tuple: missing");
        return io::tuple_from_json(io::read_json_file(opt_.tuple, "--tuple"), s, "tuple");
    }

    Json load(const char* name, const std::string& file) {
        record(name, {file});
        if (file.empty()) throw InputError(std::string("--") + name + ": missing");
        return io::read_json_file(file, std::string("--") + name);
    }

    void param(const std::string& key, Json value) { manifest_.parameters[key] = std::move(value); }

    Result json(Json body, int code, std::string summary) {
        Json j;
        j["manifest"] = io::to_json(manifest_);
        for (auto& [k, v] : body.items()) j[k] = v;
        return Result{code, j.dump(2) + "\n", std::move(summary)};
    }

    Result table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows, int code,
                 std::string summary) {
        return Result{code, io::csv(manifest_, header, rows), std::move(summary)};
    }

private:
    void record(const std::string& name, const std::vector<std::string>& files) {
        if (!files.empty() && !files.front().empty()) manifest_.inputs[name] = files;
    }

    Options opt_;
    io::Manifest manifest_;
};

inline Rational parse_epsilon(const std::string& text) {
    if (text.empty()) throw InputError("--epsilon: missing");
    Rational e;
    try {
        e = parse_rational(text);
    } catch (const InputError& err) {
        throw InputError(std::string("--epsilon: ") + err.what());
    }
    if (e <= 0) throw InputError("--epsilon: must be positive");
    return e;
}

inline Json raw_bounds(const RieszCertificate& c) {
    double s = to_double(c.haar_scale);
    return Json{{"A", s * c.A}, {"B", s * c.B}};
}

inline std::vector<std::vector<std::string>> profile_rows(const MultiplicityProfile& p) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [k, m] : p) rows.push_back({std::to_string(k), m.get_str()});
    return rows;
}

inline Result verify_tiling(Runner& r) {
    r.set_format("json", true);
    auto omega = r.region();
    auto lambda = r.lattice();
    auto p = multiplicity_profile(omega, lambda);
    auto k = k_of(p);
    int code = k ? ok : negative;
    std::string summary = k ? "k=" + std::to_string(*k) : "not a multi-tiling: profile " + to_string(p);
    if (r.csv()) return r.table({"multiplicity", "measure"}, profile_rows(p), code, summary);
    return r.json(Json{{"k", k ? Json(*k) : Json(nullptr)}, {"profile", io::to_json(p)}}, code, summary);
}

inline Result decompose(Runner& r) {
    r.set_format("json", false);
    auto omega = r.region();
    auto lambda = r.lattice();
    auto tiles = decompose_tiles(omega, lambda);
    Json list = Json::array();
    for (const auto& t : tiles) list.push_back(io::to_json(t));
    return r.json(Json{{"k", tiles.size()}, {"tiles", list}}, ok, "k=" + std::to_string(tiles.size()) + " tiles");
}

inline Result configurations_cmd(Runner& r) {
    r.set_format("json", true);
    auto omega = r.region();
    auto lambda = r.lattice();
    auto configs = configurations(omega, lambda);
    std::string summary = std::to_string(configs.size()) + " configurations, k=" +
                          std::to_string(configs.front().offsets.size());
    if (r.csv()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& c : configs)
            rows.push_back({to_string(Region(omega.signature(), {c.cell})), io::offsets_text(c.offsets)});
        return r.table({"cell", "offsets"}, rows, ok, summary);
    }
    return r.json(Json{{"k", configs.front().offsets.size()}, {"configurations", io::list(configs)}}, ok, summary);
}

inline Result frame_bounds(Runner& r) {
    r.set_format("json", true);
    r.param("tol", r.options().tol);
    auto omega = r.region();
    auto lambda = r.lattice();
    auto a = r.tuple(dual_signature(omega.signature()));
    auto cert = riesz_bounds(omega, lambda, a);
    bool basis = cert.A >= r.options().tol;
    int code = basis ? ok : negative;
    std::string summary = "A=" + io::format_double(cert.A) + " B=" + io::format_double(cert.B) +
                          (basis ? " (Riesz basis)" : " (not a Riesz basis)");
    if (r.csv()) return Result{code, io::certificate_csv(r.manifest(), cert, omega.signature()), summary};
    return r.json(Json{{"riesz_basis", basis},
                       {"certificate", io::to_json(cert, omega.signature())},
                       {"unnormalized", raw_bounds(cert)}},
                  code, summary);
}

inline Result find_tuple(Runner& r) {
    r.set_format("json", false);
    const auto& o = r.options();
    if (!o.k) throw InputError("-k: missing");
    if (*o.k < 1) throw InputError("-k: must be positive");
    r.param("k", *o.k);
    r.param("tol", o.tol);
    r.param("seed", o.seed);
    r.param("max_tries", o.max_tries);
    if (o.regions.empty()) throw InputError("--region: missing");
    if (o.lattices.size() != 1 && o.lattices.size() != o.regions.size())
        throw InputError("--lattice: give one lattice or one per region");
    std::vector<TilingInstance> family;
    for (std::size_t i = 0; i < o.regions.size(); ++i) {
        family.push_back(TilingInstance{r.region(i), r.lattice(i)});
        require_same(family.front().omega.signature(), family.back().omega.signature());
    }
    auto t = sample_universal_tuple(family.front().lambda, static_cast<std::size_t>(*o.k), family, o.tol, o.max_tries,
                                    o.seed);
    Json certs = Json::array();
    for (std::size_t i = 0; i < family.size(); ++i)
        certs.push_back(io::to_json(t.certificates[i], family[i].omega.signature()));
    return r.json(Json{{"tuple", io::tuple_to_json(dual_signature(family.front().omega.signature()), t.points)},
                       {"tol", t.tol},
                       {"min_sigma_min_sq", t.min_sigma_min_sq},
                       {"certificates", certs}},
                  ok, "universal tuple with min sigma_min^2 " + io::format_double(t.min_sigma_min_sq));
}

inline Result converse(Runner& r) {
    r.set_format("json", true);
    const auto& o = r.options();
    if (!o.k) throw InputError("-k: missing");
    r.param("k", *o.k);
    auto v = converse_check(r.region(), r.lattice(), *o.k);
    int code = v.possible ? ok : negative;
    std::string summary = v.possible ? "possible" : "impossible: multiplicity profile " + to_string(v.profile);
    if (r.csv()) return r.table({"multiplicity", "measure"}, profile_rows(v.profile), code, summary);
    return r.json(
        Json{{"verdict", v.possible ? "possible" : "impossible"}, {"k", v.k}, {"profile", io::to_json(v.profile)}},
        code, summary);
}

inline Result lift(Runner& r) {
    r.set_format("json", false);
    const auto& o = r.options();
    auto K = io::quotient_from_json(r.load("kernel", o.kernel), "kernel");
    auto Q = r.region();
    auto base = io::coset_union_from_json(r.load("basis", o.basis), "basis");
    auto lifted = lift_basis(K, Q, base);
    Json body{{"kernel", io::to_json(K)}, {"preimage", io::to_json(lifted.preimage)}, {"system", io::to_json(lifted.system)}};
    auto cert = riesz_bounds(lifted.preimage, annihilator(lifted.system.H), lifted.system.shifts);
    body["certificate"] = io::to_json(cert, lifted.preimage.signature());
    body["unnormalized"] = raw_bounds(cert);
    std::string summary = std::to_string(lifted.system.shifts.size()) + " cosets on the preimage";
    if (base.H.signature() == K.dual_quotient()) {
        auto bc = riesz_bounds(Q, annihilator(base.H), base.shifts);
        body["base_certificate"] = io::to_json(bc, Q.signature());
        body["base_unnormalized"] = raw_bounds(bc);
    }
    return r.json(body, ok, summary);
}

inline Result build_set(Runner& r, Role role) {
    r.set_format("json", false);
    const auto& o = r.options();
    Rational eps = parse_epsilon(o.epsilon);
    r.param("epsilon", eps.get_str());
    r.param("tol", o.tol);
    r.param("seed", o.seed);
    r.param("max_tries", o.max_tries);
    SynthesisOptions opt;
    opt.tol = o.tol;
    opt.seed = o.seed;
    opt.max_tries = o.max_tries;
    if (!o.kernel.empty()) opt.quotient = io::quotient_from_json(r.load("kernel", o.kernel), "kernel");
    auto omega = r.region();
    auto s = role == Role::sampling ? sampling_set(omega, eps, opt) : interpolation_set(omega, eps, opt);
    Json body;
    body["n"] = s.cover.n;
    body["cubes"] = s.cover.centres.size();
    body["omega_eps"] = io::to_json(s.omega_eps);
    body["measure"] = s.omega_eps.empty() ? "0" : haar_measure(s.omega_eps).get_str();
    body[role == Role::sampling ? "excess" : "deficit"] = s.cover.gap.get_str();
    body["warnings"] = s.cover.warnings;
    body["H"] = io::to_json(s.J.H);
    body["shifts"] = io::list(s.J.shifts);
    body["role"] = to_string(s.J.role);
    body["density"] = s.density.get_str();
    body["certificate"] = io::to_json(s.certificate, s.omega_eps.signature());
    body["unnormalized"] = raw_bounds(s.certificate);
    return r.json(body, ok, "density " + s.density.get_str() + ", A=" + io::format_double(s.certificate.A));
}

inline Result density_cmd(Runner& r) {
    r.set_format("json", false);
    auto J = io::coset_union_from_json(r.load("set", r.options().set), "set");
    auto d = density(J);
    return r.json(Json{{"value", d.get_str()}, {"reference", "Z^d x {0} x D"}}, ok, "density " + d.get_str());
}

inline Result oracle_check(Runner& r) {
    r.set_format("json", true);
    const auto& o = r.options();
    std::vector<FiniteInstance> instances;
    if (!o.instance.empty()) {
        instances.push_back(io::finite_instance_from_json(r.load("instance", o.instance), "instance"));
    } else {
        r.param("seed", o.seed);
        r.param("count", o.count);
        r.param("max_n", o.max_n);
        r.param("max_k", o.max_k);
        if (o.count < 1 || o.max_n < 1 || o.max_k < 1 || o.max_k > o.max_n)
            throw InputError("--count, --max-n, --max-k: must be positive with max-k <= max-n");
        std::mt19937_64 rng(o.seed);
        for (long i = 0; i < o.count; ++i) instances.push_back(random_finite_instance(rng, o.max_n, o.max_k));
    }
    const double tol = 1e-9;
    double worst = 0;
    Json rows = Json::array();
    std::vector<std::vector<std::string>> csv_rows;
    for (const auto& inst : instances) {
        auto cert = riesz_bounds(inst.region(), inst.lattice(), inst.tuple());
        auto g = gram_bounds(inst);
        double dev = std::max(std::abs(cert.A - g.A), std::abs(cert.B - g.B));
        worst = std::max(worst, dev);
        rows.push_back(Json{{"instance", io::to_json(inst)},
                            {"fiber", Json{{"A", cert.A}, {"B", cert.B}}},
                            {"gram", Json{{"A", g.A}, {"B", g.B}}},
                            {"deviation", dev}});
        csv_rows.push_back({std::to_string(inst.N), std::to_string(inst.q), std::to_string(inst.a.size()),
                            io::format_double(cert.A), io::format_double(g.A), io::format_double(cert.B),
                            io::format_double(g.B), io::format_double(dev)});
    }
    int code = worst <= tol ? ok : negative;
    std::string summary = std::to_string(instances.size()) + " instances, max deviation " + io::format_double(worst);
    if (r.csv())
        return r.table({"N", "q", "k", "A_fiber", "A_gram", "B_fiber", "B_gram", "deviation"}, csv_rows, code, summary);
    return r.json(Json{{"tolerance", tol}, {"max_deviation", worst}, {"agree", worst <= tol}, {"instances", rows}}, code,
                  summary);
}

inline Gap parse_gap(const std::string& text) {
    if (text.empty()) throw InputError("--gap: missing");
    if (text.find_first_of(".eE") == std::string::npos) {
        try {
            return parse_rational(text);
        } catch (const InputError& e) {
            throw InputError(std::string("--gap: ") + e.what());
        }
    }
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !std::isfinite(x)) throw InputError("--gap: expected p/q or a decimal number");
    return x;
}

inline Result counterexample(Runner& r) {
    r.set_format("csv", true);
    const auto& o = r.options();
    r.param("nmax", o.nmax);
    r.param("gap", o.gap);
    auto gap = parse_gap(o.gap);
    auto p = counterexample_profile(o.nmax, gap);
    double least = p.rows.back().running_min;
    std::string summary = "min sigma_min^2 up to n=" + std::to_string(o.nmax) + ": " + io::format_double(least);
    if (r.csv()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : p.rows)
            rows.push_back({std::to_string(row.n), io::format_double(row.sigma_min_sq), io::format_double(row.running_min),
                            row.exact_zero ? "1" : "0"});
        return r.table({"n", "sigma_min_sq", "running_min", "exact_zero"}, rows, ok, summary);
    }
    Json rows = Json::array();
    for (const auto& row : p.rows)
        rows.push_back(Json{{"n", row.n},
                            {"offsets", Json::array({0, row.n})},
                            {"sigma_min_sq", row.sigma_min_sq},
                            {"running_min", row.running_min},
                            {"exact_zero", row.exact_zero}});
    return r.json(Json{{"rows", rows}}, ok, summary);
}

inline int dispatch(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Multi-tiling, Riesz bases of characters and near-critical sampling sets"};
    app.require_subcommand(1);
    Options o;
    std::vector<std::pair<CLI::App*, std::function<Result(Runner&)>>> commands;

    auto add = [&](const std::string& name, const std::string& help, std::function<Result(Runner&)> run) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--out", o.out, "Write the artifact to this file instead of stdout");
        sub->add_option("--format", o.format, "json or csv");
        commands.emplace_back(sub, std::move(run));
        return sub;
    };
    auto region_lattice = [&](CLI::App* sub) {
        sub->add_option("--region", o.regions, "Region JSON file")->required();
        sub->add_option("--lattice", o.lattices, "Lattice JSON file")->required();
    };

    region_lattice(add("verify-tiling", "Multiplicity profile and k", verify_tiling));
    region_lattice(add("decompose", "Split a k-tiling into k one-tiles", decompose));
    region_lattice(add("configurations", "Fiber configurations of a k-tiling", configurations_cmd));
    {
        auto* sub = add("frame-bounds", "Riesz bounds of the coset system of a tuple", frame_bounds);
        region_lattice(sub);
        sub->add_option("--tuple", o.tuple, "Tuple JSON file")->required();
        sub->add_option("--tol", o.tol, "Smallest admissible A");
    }
    {
        auto* sub = add("find-tuple", "Random tuple that is universal for a family", find_tuple);
        sub->add_option("--region", o.regions, "Region JSON file (repeat for a family)")->required();
        sub->add_option("--lattice", o.lattices, "Lattice JSON file (one, or one per region)")->required();
        sub->add_option("-k", o.k, "Tuple size")->required();
        sub->add_option("--tol", o.tol);
        sub->add_option("--seed", o.seed);
        sub->add_option("--max-tries", o.max_tries);
    }
    {
        auto* sub = add("converse", "Whether a k-coset basis can exist", converse);
        region_lattice(sub);
        sub->add_option("-k", o.k, "Number of cosets")->required();
    }
    {
        auto* sub = add("lift", "Lift a coset basis through a finite quotient", lift);
        sub->add_option("--region", o.regions, "Region of the quotient")->required();
        sub->add_option("--basis", o.basis, "Coset union JSON file")->required();
        sub->add_option("--kernel", o.kernel, "Finite subgroup JSON file")->required();
    }
    for (auto [name, role] : {std::pair{"build-sampling-set", Role::sampling},
                              std::pair{"build-interpolation-set", Role::interpolation}}) {
        auto* sub = add(name, role == Role::sampling ? "Sampling set from an outer cube cover"
                                                     : "Interpolation set from an inner cube pack",
                        [role](Runner& r) { return build_set(r, role); });
        sub->add_option("--region", o.regions, "Region JSON file")->required();
        sub->add_option("--epsilon", o.epsilon, "Measure budget, p/q")->required();
        sub->add_option("--tol", o.tol);
        sub->add_option("--seed", o.seed);
        sub->add_option("--max-tries", o.max_tries);
        sub->add_option("--kernel", o.kernel, "Finite subgroup JSON file");
    }
    add("density", "Uniform density of a coset union", density_cmd)
        ->add_option("--set", o.set, "Coset union JSON file")
        ->required();
    {
        auto* sub = add("oracle-check", "Fiber bounds against brute-force Gram bounds on Z_N", oracle_check);
        sub->add_option("--instance", o.instance, "Single instance JSON file");
        sub->add_option("--seed", o.seed);
        sub->add_option("--count", o.count);
        sub->add_option("--max-n", o.max_n);
        sub->add_option("--max-k", o.max_k);
    }
    {
        auto* sub = add("counterexample", "Decay of fiber bounds on the staircase set", counterexample);
        sub->add_option("--nmax", o.nmax)->required();
        sub->add_option("--gap", o.gap, "a2 - a1 as p/q or a decimal")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    for (auto& [sub, run] : commands) {
        if (!sub->parsed()) continue;
        Runner runner(sub->get_name(), o);
        Result res;
        try {
            res = run(runner);
        } catch (const NotKTiling& e) {
            err << "error: " << e.what() << "\n";
            return negative;
        } catch (const TriesExhausted& e) {
            err << "error: " << e.what() << "\n";
            return exhausted;
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return input_error;
        }
        if (o.out.empty()) {
            out << res.artifact;
        } else {
            std::ofstream f(o.out, std::ios::binary);
            if (!f) {
                err << "error: --out: cannot write " << o.out << "\n";
                return input_error;
            }
            f << res.artifact;
        }
        err << res.summary << "\n";
        return res.code;
    }
    return input_error;
}

}  // namespace lcatile::cli
