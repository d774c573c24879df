#pragma once

// The counterexample and cross-check fixtures, one per statement, each
// producing certificates and named numeric checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stabmetric/dynamics.hpp"
#include "stabmetric/metriclab.hpp"
#include "stabmetric/quotient.hpp"
#include "stabmetric/report.hpp"
#include "stabmetric/stabmodel.hpp"

namespace stabmetric {

struct RunConfig {
    double tol_algebraic = 1e-12;
    double tol_sampled = 1e-9;
    int resolution = 512;
    std::uint64_t seed = 1;
    std::size_t samples = 100;
    bool timing = false;
};

struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::string relation;  // "<=", ">=", "=="
};

struct FixtureReport {
    FixtureReport() = default;
    FixtureReport(std::string id_, std::string statement_) : id(std::move(id_)), statement(std::move(statement_)) {}

    std::string id;
    std::string statement;
    json inputs = json::object();
    json certificates = json::array();
    std::vector<Check> checks;
    bool pass = true;
    double wall_ms = 0.0;

    void at_most(std::string name, double value, double bound) {
        add({std::move(name), value, bound, value <= bound, "<="});
    }
    void at_least(std::string name, double value, double bound) {
        add({std::move(name), value, bound, value >= bound, ">="});
    }
    void require(std::string name, bool ok) { add({std::move(name), ok ? 1.0 : 0.0, 1.0, ok, "=="}); }

    template <class Point>
    void certificate(const SpaceHandle<Point>& space, const std::optional<TriangleCertificate<Point>>& c,
                     const std::string& what, double tol) {
        require(what + " found", c.has_value());
        if (!c) return;
        certificates.push_back(to_json(space, *c));
        at_most(what + " recheck deviation", std::abs(recheck(space, *c) - c->margin), tol);
    }

    template <class Point>
    const TriangleCertificate<Point>* certificate(const SpaceHandle<Point>& space, const GeodesicCheck<Point>& r,
                                                  const std::string& what, double tol) {
        const auto* c = std::get_if<TriangleCertificate<Point>>(&r);
        require(what + " found", c != nullptr);
        if (!c) {
            json rej = to_json(std::get<Rejection>(r));
            rej["for"] = what;
            inputs["rejections"].push_back(rej);
            return nullptr;
        }
        certificates.push_back(to_json(space, *c));
        at_most(what + " recheck deviation", std::abs(recheck(space, *c) - c->margin), tol);
        return c;
    }

private:
    void add(Check c) {
        pass = pass && c.pass;
        checks.push_back(std::move(c));
    }
};

inline json to_json(const FixtureReport& r, bool timing) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"bound", c.bound},
                          {"pass", c.pass}});
    json out{{"id", r.id},           {"statement", r.statement},       {"inputs", r.inputs},
             {"certificates", r.certificates}, {"checks", checks}, {"pass", r.pass}};
    if (timing) out["wall_ms"] = r.wall_ms;
    return out;
}

namespace fixtures {

/// The C-orbit triangle Delta_delta: x1 = 0, x2 = 4 delta, x3 = 4 delta i / pi.
inline std::array<Complex, 3> slim_triangle(double delta) {
    return {Complex(0.0, 0.0), Complex(4.0 * delta, 0.0), Complex(0.0, 4.0 * delta / pi)};
}

/// sigma, sigma.lambda_1, sigma.lambda with lambda = r, lambda_1 = (r/2)(1 + i/(2 pi)).
inline std::array<Complex, 3> corbit_nonunique(double r) {
    return {Complex(0.0, 0.0), Complex(r / 2.0, r / (4.0 * pi)), Complex(r, 0.0)};
}

/// p1, p2, p3 in C: (r, 0, 2r, 0), (r, 0, 3r, r/2), (r, 0, 4r, 0).
inline std::array<R4, 3> quotient_triple(double r) {
    return {R4{r, 0.0, 2.0 * r, 0.0}, R4{r, 0.0, 3.0 * r, r / 2.0}, R4{r, 0.0, 4.0 * r, 0.0}};
}

inline FixtureReport c_orbit_metric(const RunConfig& cfg) {
    FixtureReport rep{"C-d_B", "the induced metric on a C-orbit is max(|Re lambda|, pi |Im lambda|)"};
    Rng rng(cfg.seed);
    const KroneckerPoint base(R4{0.3, 0.1, 0.8, -0.2});
    double worst_formula = 0.0, worst_model = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Complex lam(rng.uniform(-3.0, 3.0), rng.uniform(-1.0, 1.0));
        const double expect = std::max(std::abs(lam.real()), pi * std::abs(lam.imag()));
        worst_formula = std::max(worst_formula, std::abs(c_orbit_distance(0.0, lam) - expect));
        worst_model = std::max(worst_model, std::abs(d_B_closed(base, c_act(base, lam)) - expect));
    }
    rep.inputs = {{"samples", 1000}, {"seed", cfg.seed}, {"kronecker_base", to_json(base)}};
    rep.at_most("c_orbit_distance deviation", worst_formula, cfg.tol_algebraic);
    rep.at_most("Kronecker orbit d_B deviation", worst_model, cfg.tol_algebraic);
    return rep;
}

inline FixtureReport c_orbit_geodesic(const RunConfig& cfg) {
    FixtureReport rep{"C-orbit-geod", "straight lines are geodesics of a C-orbit"};
    const auto space = corbit_space();
    Rng rng(cfg.seed + 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
        const Complex a(rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0));
        const Complex b(rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0));
        worst = std::max(worst, geodesic_deviation(space, a, b, 64));
    }
    rep.inputs = {{"pairs", 20}, {"seed", cfg.seed + 1}, {"resolution", 64}};
    rep.at_most("max geodesic deviation", worst, cfg.tol_algebraic);
    return rep;
}

inline FixtureReport d_b_curvature_i(const RunConfig& cfg) {
    FixtureReport rep{"d_B-curvature(i)", "a C-orbit is not uniquely geodesic in any ball, hence not CAT(0)"};
    const auto space = corbit_space();
    const double r = 0.2;
    const auto [x, z, y] = corbit_nonunique(r);
    rep.inputs = {{"r", r}, {"resolution", cfg.resolution}};
    const auto result = nonunique_geodesic_check(space, x, z, y, cfg.resolution, cfg.seed);
    if (const auto* c = rep.certificate(space, result, "nonunique geodesic r=0.2", cfg.tol_algebraic)) {
        rep.at_most("additivity residual", c->parameter, cfg.tol_algebraic);
        rep.at_least("off-geodesic margin", c->margin, r / (4.0 * pi) - cfg.tol_sampled);
    }
    // Inside every ball B(sigma, r'): take r = r'/2 and check the three geodesics stay in the ball.
    for (double rp : {0.05, 0.25, 1.0}) {
        const auto [bx, bz, by] = corbit_nonunique(rp / 2.0);
        const auto res = nonunique_geodesic_check(space, bx, bz, by, cfg.resolution, cfg.seed);
        const std::string tag = "r'=" + format_double(rp);
        rep.require("nonunique geodesic in ball " + tag, std::holds_alternative<TriangleCertificate<Complex>>(res));
        double reach = 0.0;
        for (int k = 0; k <= 64; ++k) {
            const double t = k / 64.0;
            for (const Complex& p : {space.geodesic(bx, by, t), space.geodesic(bx, bz, t), space.geodesic(bz, by, t)})
                reach = std::max(reach, space.dist(bx, p));
        }
        rep.at_most("geodesics stay in ball " + tag + " (max radius reached)", reach, rp);
    }
    return rep;
}

inline FixtureReport d_b_curvature_ii(const RunConfig& cfg) {
    FixtureReport rep{"d_B-curvature(ii)", "a C-orbit is not delta-hyperbolic for any delta"};
    const auto space = corbit_space();
    rep.inputs = {{"deltas", json::array({1, 2, 4, 8})}, {"resolution", cfg.resolution}};
    for (double delta : {1.0, 2.0, 4.0, 8.0}) {
        const auto [x, y, z] = slim_triangle(delta);
        const auto cert = slim_check(space, x, y, z, delta, cfg.resolution, cfg.seed);
        const std::string tag = "delta=" + format_double(delta);
        if (delta == 1.0) {
            rep.certificate(space, cert, "slim violation " + tag, cfg.tol_algebraic);
        } else {
            rep.require("slim violation " + tag + " found", cert.has_value());
        }
        if (cert) {
            rep.at_most("margin - delta " + tag, std::abs(cert->margin - delta), cfg.tol_sampled);
            const Complex expect(2.0 * delta, 2.0 * delta / pi);
            rep.at_most("witness distance to x4 " + tag, space.dist(cert->witnesses[0], expect), cfg.tol_sampled);
        }
    }
    return rep;
}

inline FixtureReport quotient_formula(const RunConfig& cfg) {
    FixtureReport rep{"quotient-formula",
                      "the quotient of (R^4, l-infinity) by C is max(|D1 - D3|, |D2 - D4|) / 2"};
    Rng rng(cfg.seed + 2);
    double worst_solver = 0.0, worst_minimizer = 0.0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        R4 x{}, y{};
        for (auto& v : x) v = rng.uniform(-2.0, 2.0);
        for (auto& v : y) v = rng.uniform(-2.0, 2.0);
        const double closed = quot_dist_closed(x, y);
        const double solved = quot_dist_inf([](const R4& a, const R4& b) { return dprime(a, b); }, x, y,
                                            [](const R4& a, Complex l) { return act_r4(a, l); });
        worst_solver = std::max(worst_solver, std::abs(solved - closed));
        worst_minimizer = std::max(worst_minimizer, std::abs(dprime(act_r4(x, quotient_minimizer(x, y)), y) - closed));
    }
    rep.inputs = {{"pairs", cfg.samples}, {"seed", cfg.seed + 2}, {"solver", to_json(SolverParams{})}};
    rep.at_most("solver vs closed form", worst_solver, 1e-6);
    rep.at_most("analytic minimizer vs closed form", worst_minimizer, cfg.tol_algebraic);
    return rep;
}

inline FixtureReport bar_c_geod(const RunConfig& cfg) {
    FixtureReport rep{"bar-C-geod", "images of straight lines in C.C are geodesics of (C.C)/C"};
    Rng rng(cfg.seed + 3);
    const auto space = quotient_space();
    bool convex = true;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const R4 x = random_region_point(rng), y = random_region_point(rng);
        for (int k = 0; k <= 32; ++k) convex = convex && in_kronecker_region(lerp4(x, y, k / 32.0));
        worst = std::max(worst, geodesic_deviation(space, QuotPoint(x), QuotPoint(y), 64));
    }
    rep.inputs = {{"pairs", 20}, {"seed", cfg.seed + 3}};
    rep.require("straight lines stay in C.C", convex);
    rep.at_most("quotient line geodesic deviation", worst, cfg.tol_algebraic);
    return rep;
}

inline FixtureReport bar_c_noncat0(const RunConfig& cfg) {
    FixtureReport rep{"bar-C-nonCAT(0)", "(C.C)/C is not uniquely geodesic near p1, hence not CAT(0)"};
    const auto space = quotient_space();
    const double r = 0.2;
    const auto [p1, p2, p3] = quotient_triple(r);
    const QuotPoint q1(p1), q2(p2), q3(p3);
    rep.inputs = {{"r", r}, {"p1", p1}, {"p2", p2}, {"p3", p3}, {"resolution", cfg.resolution}};
    rep.at_most("d(p1,p2) - 0.1", std::abs(quot_dist_closed(q1, q2) - 0.1), cfg.tol_algebraic);
    rep.at_most("d(p2,p3) - 0.1", std::abs(quot_dist_closed(q2, q3) - 0.1), cfg.tol_algebraic);
    const auto res = nonunique_geodesic_check(space, q1, q2, q3, cfg.resolution, cfg.seed);
    if (const auto* c = rep.certificate(space, res, "nonunique geodesic", cfg.tol_algebraic)) {
        rep.at_most("additivity residual", c->parameter, cfg.tol_algebraic);
        rep.at_least("off-geodesic margin", c->margin, r / (4.0 * pi) - cfg.tol_sampled);
    }
    // Direct comparison-inequality violation: stronger than what non-uniqueness needs.
    const auto cat = cat0_check(space, q1, q2, q3, cfg.resolution, cfg.tol_sampled, cfg.seed);
    rep.certificate(space, cat, "CAT(0) comparison violation (direct)", cfg.tol_algebraic);
    return rep;
}

inline FixtureReport kronecker_quotient(const RunConfig& cfg) {
    FixtureReport rep{"quotient-d_B-Kronecker",
                      "q embeds C.C isometrically in Kronecker stability conditions; the C-quotient is not CAT(0)"};
    const std::size_t n = 200;
    const IsometryReport iso = isometry_report(n, cfg.seed + 4);
    rep.at_most("max |d_B(q x, q y) - d'(x, y)|", iso.max_embed_deviation(), cfg.tol_algebraic);
    rep.at_most("max quotient deviation", iso.max_quotient_deviation(), cfg.tol_algebraic);
    Rng rng(cfg.seed + 4);
    double worst_sampled = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = embed_q(random_region_point(rng)), q = embed_q(random_region_point(rng));
        for (std::uint64_t k : {1u, 5u, 10u})
            worst_sampled = std::max(worst_sampled, std::abs(d_B_sampled(p, q, k) - d_B_closed(p, q)));
    }
    rep.at_most("max |d_B_sampled(K in {1,5,10}) - d_B_closed|", worst_sampled, cfg.tol_algebraic);

    const auto space = kronecker_quotient_space();
    const auto [p1, p2, p3] = quotient_triple(0.2);
    const auto res = nonunique_geodesic_check(space, embed_q(p1), embed_q(p2), embed_q(p3), cfg.resolution, cfg.seed);
    rep.certificate(space, res, "nonunique geodesic via q", cfg.tol_algebraic);
    rep.inputs = {{"pairs", n}, {"seed", cfg.seed + 4}, {"solver", to_json(precise_solver())}};
    return rep;
}

inline FixtureReport pa_ell(const RunConfig&) {
    FixtureReport rep{"pA-ell", "an autoequivalence of an elliptic curve is pseudo-Anosov iff |trace| > 2"};
    json table = json::array();
    bool all = true;
    for (const auto& e : builtin_sl2z_table()) {
        json row = pa_report(e.matrix);
        const bool ok = pa_classify(e.matrix).type == e.expected &&
                        pa_classify(e.matrix).pseudo_anosov == (e.expected == MobiusType::hyperbolic);
        row["expected"] = to_string(e.expected);
        row["match"] = ok;
        all = all && ok;
        table.push_back(row);
    }
    rep.inputs = {{"table", table}};
    rep.require("trace test matches the 20-matrix table", all);
    return rep;
}

inline FixtureReport pa_not_ell(const RunConfig&) {
    FixtureReport rep{"pA-not-ell", "curves of genus != 1 have no pseudo-Anosov autoequivalences"};
    json rows = json::array();
    bool none = true;
    for (std::int64_t g : {0, 2, 3, 5}) {
        const CurveSummary s = curve_pa_summary(g, std::nullopt);
        none = none && !s.pseudo_anosov_possible;
        rows.push_back(to_json(s));
    }
    rep.inputs = {{"summaries", rows}};
    rep.require("genus != 1 reports nonexistence", none);
    return rep;
}

inline FixtureReport pa_hyperbolic(const RunConfig& cfg) {
    FixtureReport rep{"pA-hyperbolic",
                      "a pseudo-Anosov functor is a hyperbolic isometry of the C-quotient with translation length "
                      "log(stretch factor)"};
    const Autoeq cat{2, 1, 1, 1};
    const double expect = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    rep.at_most("|translation_length([[2,1],[1,1]]) - log((3+sqrt5)/2)|", std::abs(translation_length(cat) - expect),
                cfg.tol_algebraic);
    Rng rng(cfg.seed + 5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Autoeq f = random_hyperbolic(rng);
        worst = std::max(worst, std::abs(translation_length(f) - poincare_translation_length(f).length));
    }
    rep.at_most("max |log rho - arccosh(|tr|/2)| over 100 random", worst, cfg.tol_algebraic);
    const Mat2 m = cat.as_mat2();
    const double grid = min_displacement_on_grid(m);
    rep.at_least("grid min of d_P(z, A z)", grid, translation_length(cat) - 1e-3);
    const Complex ax = axis_point(m);
    rep.at_most("|d_P(axis, A axis) - log rho|", std::abs(poincare_distance(ax, mobius(m, ax)) - expect),
                cfg.tol_sampled);
    // inf over C of the GL~ displacement bound at the diagonal g_F equals log rho.
    const PseudoAnosovData pa = pseudo_anosov_data(cat);
    rep.at_most("|inf_C upper_bound(g_F) - log rho|", std::abs(inf_upper_bound_over_c(pa.g_f) - expect), 1e-6);
    rep.at_most("|displacement rate n=200 on axis - log rho|", std::abs(displacement_rate(m, 200, ax) - expect),
                cfg.tol_sampled);
    rep.inputs = {{"matrix", to_json(cat)}, {"seed", cfg.seed + 5}, {"axis_point", to_json(ax)}};
    return rep;
}

inline FixtureReport pa_mass_growth(const RunConfig& cfg) {
    FixtureReport rep{"pA-mass-growth", "mass growth of a pseudo-Anosov functor equals log(stretch factor)"};
    const Mat2 m = Autoeq{2, 1, 1, 1}.as_mat2();
    const double target = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    Rng rng(cfg.seed + 6);
    json seeds = json::array();
    std::vector<MassSeed> all{MassSeed{{{1.0, 0.0}}}};
    for (int i = 0; i < 5; ++i) {
        const double t = rng.uniform(0.0, 2.0);
        all.push_back(MassSeed{{{std::cos(pi * t), std::sin(pi * t)}, {rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)}}});
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        const MassGrowth g = mass_growth_estimate(m, all[i], 200);
        const std::string tag = "seed " + std::to_string(i);
        json zs = json::array();
        for (const auto& z : all[i].charges) zs.push_back(z);
        seeds.push_back(zs);
        rep.at_most("|a_200 - log rho| " + tag, std::abs(g.rates[199] - target), 0.02);
        rep.require("error at n=200 below n=50 " + tag,
                    std::abs(g.rates[199] - target) < std::abs(g.rates[49] - target));
    }
    rep.inputs = {{"matrix", to_json(m)}, {"seeds", seeds}, {"n", 200}};
    return rep;
}

inline FixtureReport entropy_chain(const RunConfig& cfg) {
    FixtureReport rep{"entropy-ge-translation",
                      "entropy bounds translation length from above; equality for elliptic-curve pseudo-Anosovs"};
    double worst_eq = 0.0, min_gap = std::numeric_limits<double>::infinity();
    for (const auto& e : builtin_sl2z_table()) {
        const double h = entropy_value(e.matrix);
        const double tl = poincare_translation_length(e.matrix).length;
        min_gap = std::min(min_gap, h - tl);
        if (pa_classify(e.matrix).pseudo_anosov) worst_eq = std::max(worst_eq, std::abs(h - translation_length(e.matrix)));
    }
    rep.at_most("max |entropy - translation length| on pA rows", worst_eq, cfg.tol_algebraic);
    rep.at_least("min (entropy - translation length) on table", min_gap, -cfg.tol_algebraic);
    return rep;
}

struct Entry {
    const char* id;
    std::function<FixtureReport(const RunConfig&)> run;
};

/// All fixtures, sorted by id.
inline std::vector<Entry> registry() {
    std::vector<Entry> all{
        {"C-d_B", c_orbit_metric},
        {"C-orbit-geod", c_orbit_geodesic},
        {"bar-C-geod", bar_c_geod},
        {"bar-C-nonCAT(0)", bar_c_noncat0},
        {"d_B-curvature(i)", d_b_curvature_i},
        {"d_B-curvature(ii)", d_b_curvature_ii},
        {"entropy-ge-translation", entropy_chain},
        {"pA-ell", pa_ell},
        {"pA-hyperbolic", pa_hyperbolic},
        {"pA-mass-growth", pa_mass_growth},
        {"pA-not-ell", pa_not_ell},
        {"quotient-d_B-Kronecker", kronecker_quotient},
        {"quotient-formula", quotient_formula},
    };
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return std::string(a.id) < b.id; });
    return all;
}

/// Runs every fixture whose id contains `filter`. A throwing fixture is
/// recorded as failed and the suite continues.
inline std::vector<FixtureReport> run(const std::string& filter, const RunConfig& cfg) {
    std::vector<FixtureReport> out;
    for (const auto& e : registry()) {
        if (std::string(e.id).find(filter) == std::string::npos) continue;
        const auto start = std::chrono::steady_clock::now();
        FixtureReport rep;
        try {
            rep = e.run(cfg);
        } catch (const std::exception& ex) {
            rep = FixtureReport{e.id, "fixture raised an error"};
            rep.inputs = {{"error", ex.what()}};
            rep.require("completed without error", false);
        }
        rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace fixtures
}  // namespace stabmetric
