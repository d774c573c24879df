#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stabmetric/fixtures.hpp"

using namespace stabmetric;

namespace {

struct Options {
    std::string model = "kronecker";
    double tol = -1.0;  // negative: per-check default
    std::uint64_t seed = 1;
    int resolution = 512;
    std::string format = "json";
    std::string out;
    bool timing = false;
};

// Positional arguments are JSON literals, or @path to read one from a file.
json parse_arg(const std::string& text) {
    std::string body = text;
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw InvalidInput("cannot read " + text.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        body = ss.str();
    }
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InvalidInput("cannot write " + o.out);
    f << text;
}

void emit_json(const Options& o, const json& j) { emit(o, j.dump(2) + "\n"); }

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + format_double(r[i]);
        s += "\n";
    }
    return s;
}

void require_count(const std::vector<std::string>& args, std::size_t n, const char* what) {
    if (args.size() != n) throw InvalidInput(std::string(what) + " expects " + std::to_string(n) + " JSON arguments");
}

double tol_or(const Options& o, double fallback) { return o.tol >= 0.0 ? o.tol : fallback; }

// Runs `body(space, parse)` for the model named in o.model.
template <class Body>
json with_space(const Options& o, Body&& body) {
    if (o.model == "kronecker") return body(kronecker_space(), kronecker_from_json);
    if (o.model == "kronecker-quotient") return body(kronecker_quotient_space(), kronecker_from_json);
    if (o.model == "corbit") return body(corbit_space(), complex_from_json);
    if (o.model == "r4") return body(r4_space(), r4_from_json);
    if (o.model == "quotient") return body(quotient_space(), quot_point_from_json);
    if (o.model == "euclidean")
        return body(euclidean_plane(), [](const json& j) -> Planar { return detail::number_array<2>(j); });
    throw UnknownKind("unknown model \"" + o.model + "\"");
}

json cmd_dist(const Options& o, const std::vector<std::string>& args) {
    require_count(args, 2, "dist");
    const json a = parse_arg(args[0]), b = parse_arg(args[1]);
    json out{{"model", o.model}};
    if (o.model == "poincare") {
        const double d = poincare_distance(HPoint(complex_from_json(a)), HPoint(complex_from_json(b)));
        out["distance"] = d;
        return out;
    }
    if (o.model == "kronecker") {
        const auto p = kronecker_from_json(a), q = kronecker_from_json(b);
        const double d = d_B_closed(p, q);
        const double oracle = dprime(p.x, q.x);
        out.update({{"distance", d}, {"oracle", oracle}, {"deviation", std::abs(d - oracle)}});
        return out;
    }
    if (o.model == "corbit") {
        const Complex l = complex_from_json(a), m = complex_from_json(b);
        const double d = c_orbit_distance(l, m);
        const Complex diff = m - l;
        const double oracle = std::max(std::abs(diff.real()), pi * std::abs(diff.imag()));
        out.update({{"distance", d}, {"oracle", oracle}, {"deviation", std::abs(d - oracle)}});
        return out;
    }
    return with_space(o, [&](const auto& space, auto parse) {
        out["distance"] = space.dist(parse(a), parse(b));
        return out;
    });
}

json cmd_quotient_dist(const Options& o, const std::vector<std::string>& args, const std::string& solver) {
    require_count(args, 2, "quotient-dist");
    const json a = parse_arg(args[0]), b = parse_arg(args[1]);
    const SolverParams params = solver.empty() ? SolverParams{} : solver_params_from_json(parse_arg(solver));
    json out{{"model", o.model}, {"solver", to_json(params)}};
    double closed = 0.0, solved = 0.0;
    Complex minimizer;
    if (o.model == "kronecker") {
        const auto p = kronecker_from_json(a), q = kronecker_from_json(b);
        closed = quot_dist_closed(p.x, q.x);
        solved = kronecker_quot_dist_inf(p, q, params);
        minimizer = quotient_minimizer(q.x, p.x);
        minimizer.imag(minimizer.imag() / pi);
    } else if (o.model == "r4" || o.model == "quotient") {
        const R4 x = o.model == "r4" ? r4_from_json(a) : quot_point_from_json(a).rep();
        const R4 y = o.model == "r4" ? r4_from_json(b) : quot_point_from_json(b).rep();
        closed = quot_dist_closed(x, y);
        solved = quot_dist_inf([](const R4& u, const R4& v) { return dprime(u, v); }, x, y,
                               [](const R4& u, Complex l) { return act_r4(u, l); }, params);
        minimizer = quotient_minimizer(y, x);
    } else {
        throw UnknownKind("quotient-dist supports models kronecker, r4, quotient");
    }
    out.update({{"closed", closed},
                {"solver_value", solved},
                {"deviation", std::abs(closed - solved)},
                {"minimizer", to_json(minimizer)}});
    return out;
}

json cmd_hn(const std::vector<std::string>& args) {
    require_count(args, 2, "hn");
    const auto p = kronecker_from_json(parse_arg(args[0]));
    const auto c = object_class_from_json(parse_arg(args[1]));
    json out = to_json(hn_profile(p, c));
    out["central_charge"] = to_json(central_charge(p, c));
    return out;
}

json cmd_cat0(const Options& o, const std::vector<std::string>& args) {
    require_count(args, 3, "cat0-check");
    return with_space(o, [&](const auto& space, auto parse) {
        const auto x = parse(parse_arg(args[0])), y = parse(parse_arg(args[1])), z = parse(parse_arg(args[2]));
        const auto cert = cat0_check(space, x, y, z, o.resolution, tol_or(o, 1e-9), o.seed);
        json out{{"model", o.model}, {"pass", !cert.has_value()}};
        if (cert) out["certificate"] = to_json(space, *cert);
        return out;
    });
}

json cmd_slim(const Options& o, const std::vector<std::string>& args, double delta) {
    require_count(args, 3, "slim-check");
    return with_space(o, [&](const auto& space, auto parse) {
        const auto x = parse(parse_arg(args[0])), y = parse(parse_arg(args[1])), z = parse(parse_arg(args[2]));
        const auto cert = slim_check(space, x, y, z, delta, o.resolution, o.seed);
        json out{{"model", o.model}, {"delta", delta}, {"pass", !cert.has_value()}};
        if (cert) out["certificate"] = to_json(space, *cert);
        return out;
    });
}

json cmd_geodesic(const Options& o, const std::vector<std::string>& args) {
    require_count(args, 3, "geodesic-check");
    return with_space(o, [&](const auto& space, auto parse) {
        const auto x = parse(parse_arg(args[0])), z = parse(parse_arg(args[1])), y = parse(parse_arg(args[2]));
        const auto res = nonunique_geodesic_check(space, x, z, y, o.resolution, o.seed);
        json out{{"model", o.model}};
        if (const auto* c = std::get_if<0>(&res)) {
            out["result"] = "certificate";
            out["certificate"] = to_json(space, *c);
        } else {
            out["result"] = to_json(std::get<Rejection>(res));
        }
        return out;
    });
}

json cmd_pa(const std::vector<std::string>& args, std::int64_t genus) {
    if (genus != 1) {
        if (args.size() > 1) throw InvalidInput("pa expects at most one matrix");
        const std::optional<Autoeq> f =
            args.empty() ? std::nullopt : std::optional<Autoeq>(autoeq_from_json(parse_arg(args[0])));
        return to_json(curve_pa_summary(genus, f));
    }
    if (args.empty()) throw MissingMatrix("genus 1 requires the induced SL(2,Z) matrix");
    require_count(args, 1, "pa");
    return pa_report(autoeq_from_json(parse_arg(args[0])));
}

MassSeed parse_mass_seed(const std::string& text) {
    if (text.empty()) return MassSeed{{{1.0, 0.0}}};
    const json j = parse_arg(text);
    if (!j.is_array()) throw InvalidInput("mass seed must be an array of [re, im] charges");
    MassSeed s;
    for (const auto& z : j) s.charges.push_back(detail::number_array<2>(z));
    s.validate();
    return s;
}

std::vector<std::vector<double>> mass_rows(const Mat2& m, const MassSeed& seed, int n) {
    const MassGrowth g = mass_growth_estimate(m, seed, n);
    std::vector<std::vector<double>> rows;
    for (int k = 1; k <= n; ++k) rows.push_back({static_cast<double>(k), g.rates[k - 1]});
    return rows;
}

std::string cmd_mass_growth(const Options& o, const std::vector<std::string>& args, int n, const std::string& seed) {
    require_count(args, 1, "mass-growth");
    const Autoeq f = autoeq_from_json(parse_arg(args[0]));
    const MassSeed s = parse_mass_seed(seed);
    if (o.format == "csv") return csv({"n", "a_n"}, mass_rows(f.as_mat2(), s, n));
    const MassGrowth g = mass_growth_estimate(f.as_mat2(), s, n);
    json out{{"matrix", to_json(f)}, {"n", n}, {"rates", g.rates}, {"decaying_seed", g.decaying_seed}};
    if (pa_classify(f).pseudo_anosov) {
        out["log_rho"] = translation_length(f);
        out["final_error"] = std::abs(g.rates.back() - translation_length(f));
    }
    return out.dump(2) + "\n";
}

std::string cmd_embed_check(const Options& o, std::size_t samples) {
    const IsometryReport r = isometry_report(samples, o.seed);
    if (o.format == "csv") {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < samples; ++i)
            rows.push_back({static_cast<double>(i), r.embed_deviation[i], r.quotient_deviation[i]});
        return csv({"index", "embed_deviation", "quotient_deviation"}, rows);
    }
    const double tol = tol_or(o, 1e-12);
    json out{{"samples", samples},
             {"seed", o.seed},
             {"max_embed_deviation", r.max_embed_deviation()},
             {"max_quotient_deviation", r.max_quotient_deviation()},
             {"tol", tol},
             {"pass", r.max_embed_deviation() <= tol && r.max_quotient_deviation() <= tol}};
    return out.dump(2) + "\n";
}

std::string cmd_sweep(const Options& o, const std::string& kind, int n, const std::string& deltas,
                      const std::string& matrix, const std::string& seed) {
    if (kind == "mass-growth") {
        const Autoeq f = matrix.empty() ? Autoeq{2, 1, 1, 1} : autoeq_from_json(parse_arg(matrix));
        return csv({"n", "a_n"}, mass_rows(f.as_mat2(), parse_mass_seed(seed), n));
    }
    if (kind == "slim-grid") {
        std::vector<double> ds{1.0, 2.0, 4.0, 8.0};
        if (!deltas.empty()) {
            ds.clear();
            for (const auto& v : parse_arg(deltas)) ds.push_back(detail::number(v));
        }
        const auto space = corbit_space();
        std::vector<std::vector<double>> rows;
        for (double d : ds) {
            const auto [x, y, z] = fixtures::slim_triangle(d);
            const auto cert = slim_check(space, x, y, z, d, o.resolution, o.seed);
            rows.push_back({d, cert ? cert->margin : 0.0});
        }
        return csv({"delta", "margin"}, rows);
    }
    if (kind == "isometry-samples") {
        const IsometryReport r = isometry_report(static_cast<std::size_t>(n), o.seed);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < r.samples; ++i)
            rows.push_back({static_cast<double>(i), r.embed_deviation[i], r.quotient_deviation[i]});
        return csv({"index", "embed_deviation", "quotient_deviation"}, rows);
    }
    throw UnknownKind("unknown sweep kind \"" + kind + "\"");
}

int cmd_fixtures(const Options& o, const std::string& filter) {
    RunConfig cfg;
    cfg.seed = o.seed;
    cfg.resolution = o.resolution;
    cfg.timing = o.timing;
    if (o.tol >= 0.0) cfg.tol_algebraic = o.tol;
    const auto reports = fixtures::run(filter, cfg);
    bool all = true;
    std::size_t certs = 0;
    if (o.format == "csv") {
        std::string s = "id,check,value,relation,bound,pass\n";
        for (const auto& r : reports) {
            all = all && r.pass;
            for (const auto& c : r.checks)
                s += r.id + ",\"" + c.name + "\"," + format_double(c.value) + "," + c.relation + "," +
                     format_double(c.bound) + "," + (c.pass ? "1" : "0") + "\n";
        }
        emit(o, s);
        return all ? 0 : 1;
    }
    json list = json::array();
    for (const auto& r : reports) {
        all = all && r.pass;
        certs += r.certificates.size();
        list.push_back(to_json(r, o.timing));
    }
    emit_json(o, {{"filter", filter},
                  {"seed", o.seed},
                  {"resolution", o.resolution},
                  {"fixtures", list},
                  {"certificate_count", certs},
                  {"pass", all}});
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bridgeland-metric toolkit: distances, curvature certificates and pseudo-Anosov dynamics"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--model", o.model, "kronecker | kronecker-quotient | corbit | r4 | quotient | euclidean | poincare");
    app.add_option("--tol", o.tol, "tolerance override");
    auto* seed_opt = app.add_option("--seed", o.seed, "RNG seed (falls back to STABMETRIC_SEED)");
    app.add_option("--resolution", o.resolution, "sampling resolution")->check(CLI::PositiveNumber);
    app.add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_flag("--timing", o.timing, "include wall time in fixture reports");

    std::vector<std::string> args;
    std::string solver, filter, kind, deltas, matrix, mass_seed;
    double delta = 1.0;
    std::int64_t genus = 1;
    int n = 200;
    std::size_t samples = 200;

    // Separate scalar positionals: a vector option would split "[a,b]" JSON arrays.
    std::array<std::string, 3> raw;
    auto positional = [&](CLI::App* sub, const char* help) {
        sub->add_option("first", raw[0], help);
        sub->add_option("second", raw[1]);
        sub->add_option("third", raw[2]);
    };
    auto* dist = app.add_subcommand("dist", "distance between two points of --model");
    positional(dist, "two points as JSON");
    auto* qdist = app.add_subcommand("quotient-dist", "C-quotient distance, closed form and solver");
    positional(qdist, "two points as JSON");
    qdist->add_option("--solver", solver, "solver params JSON");
    auto* hn = app.add_subcommand("hn", "HN filtration of a class at a Kronecker point");
    positional(hn, "point and class as JSON");
    auto* cat0 = app.add_subcommand("cat0-check", "search a triangle for a CAT(0) violation");
    positional(cat0, "three vertices as JSON");
    auto* slim = app.add_subcommand("slim-check", "search a triangle for a delta-slim violation");
    positional(slim, "three vertices as JSON");
    slim->add_option("--delta", delta, "slimness constant")->check(CLI::NonNegativeNumber);
    auto* geo = app.add_subcommand("geodesic-check", "certify x -> z -> y as a second geodesic");
    positional(geo, "x, z, y as JSON");
    auto* pa = app.add_subcommand("pa", "pseudo-Anosov classification of a curve autoequivalence");
    positional(pa, "SL(2,Z) matrix as JSON");
    pa->add_option("--genus", genus, "curve genus");
    auto* mg = app.add_subcommand("mass-growth", "mass growth rates a_1..a_n");
    positional(mg, "SL(2,Z) matrix as JSON");
    mg->add_option("-n", n, "iterations")->check(CLI::PositiveNumber);
    mg->add_option("--charges", mass_seed, "seed central charges JSON [[re,im],...]");
    auto* embed = app.add_subcommand("embed-check", "random isometry check of the embedding q");
    embed->add_option("--samples", samples, "number of pairs");
    auto* fix = app.add_subcommand("fixtures", "run the fixture suite");
    fix->add_option("filter", filter, "substring filter on fixture ids");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep as CSV");
    sweep->add_option("kind", kind, "mass-growth | slim-grid | isometry-samples")->required();
    sweep->add_option("-n", n, "iterations or sample count")->check(CLI::NonNegativeNumber);
    sweep->add_option("--deltas", deltas, "JSON array of deltas");
    sweep->add_option("--matrix", matrix, "SL(2,Z) matrix JSON");
    sweep->add_option("--charges", mass_seed, "seed central charges JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    for (const auto& r : raw)
        if (!r.empty()) args.push_back(r);

    try {
        if (seed_opt->count() == 0) {
            if (const char* env = std::getenv("STABMETRIC_SEED")) {
                try {
                    o.seed = std::stoull(env);
                } catch (const std::exception&) {
                    throw InvalidInput("STABMETRIC_SEED is not an unsigned integer");
                }
            }
        }
        if (*dist) emit_json(o, cmd_dist(o, args));
        else if (*qdist) emit_json(o, cmd_quotient_dist(o, args, solver));
        else if (*hn) emit_json(o, cmd_hn(args));
        else if (*cat0) emit_json(o, cmd_cat0(o, args));
        else if (*slim) emit_json(o, cmd_slim(o, args, delta));
        else if (*geo) emit_json(o, cmd_geodesic(o, args));
        else if (*pa) emit_json(o, cmd_pa(args, genus));
        else if (*mg) emit(o, cmd_mass_growth(o, args, n, mass_seed));
        else if (*embed) emit(o, cmd_embed_check(o, samples));
        else if (*fix) return cmd_fixtures(o, filter);
        else if (*sweep) emit(o, cmd_sweep(o, kind, n, deltas, matrix, mass_seed));
    } catch (const Error& e) {
        std::cout << json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cout << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    }
    return 0;
}
