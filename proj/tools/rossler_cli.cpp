// Command-line driver: reproducible experiments with file outputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rossler/knots.hpp"
#include "rossler/manifolds.hpp"
#include "rossler/periodic.hpp"
#include "rossler/return_map.hpp"

using json = nlohmann::json;
using namespace rossler;

namespace {

constexpr const char* kVersion = "rossler-lab 0.1.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CommonOpts {
    double a = 0.468, b = 0.3, c = 4.615;
    double rel_tol = 1e-10, abs_tol = 1e-12, max_step = 0.1;
    std::string out_dir = "out";
    unsigned workers = 0;
    std::uint64_t seed = 1;

    Params params() const { return {a, b, c}; }
    IntegratorConfig cfg() const {
        IntegratorConfig c_;
        c_.rel_tol = rel_tol;
        c_.abs_tol = abs_tol;
        c_.max_step = max_step;
        return c_;
    }
    json resolved() const {
        return json{{"a", a},       {"b", b},           {"c", c},
                    {"rel_tol", rel_tol}, {"abs_tol", abs_tol}, {"max_step", max_step},
                    {"out_dir", out_dir}, {"workers", workers}, {"seed", seed}};
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--a", o.a, "parameter a");
    cmd->add_option("--b", o.b, "parameter b");
    cmd->add_option("--c", o.c, "parameter c");
    cmd->add_option("--rel-tol", o.rel_tol, "integrator relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "integrator absolute tolerance");
    cmd->add_option("--max-step", o.max_step, "integrator step cap");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--workers", o.workers, "scan worker count (0 = cores)");
    cmd->add_option("--seed", o.seed, "random seed for projection retries");
}

json header(const CommonOpts& o) {
    return json{{"version", kVersion}, {"config", o.resolved()}};
}

void write_json(const CommonOpts& o, const std::string& name, const json& j) {
    std::filesystem::create_directories(o.out_dir);
    std::ofstream f(o.out_dir + "/" + name);
    f << j.dump(2) << "\n";
}

json spectrum_json(const Spectrum& s) {
    return json{{"gamma", s.gamma}, {"rho", s.rho}, {"omega", s.omega},
                {"complex_pair", s.is_complex_pair}};
}

int cmd_analyze(const CommonOpts& o) {
    json out = header(o);
    AssumptionStatus st = check_assumptions(o.params());
    json assumptions;
    for (auto [name, chk] : {std::pair{"a1", st.a1}, {"a2", st.a2}, {"a3", st.a3},
                             {"a4", st.a4}}) {
        assumptions[name] = {{"pass", chk.pass}, {"reason", chk.reason}};
    }
    out["assumptions"] = assumptions;
    out["assumptions_pass"] = st.all();
    bool analysis_error = false;
    try {
        FixedPoints fp = fixed_points(o.params());
        out["p_in"] = {fp.p_in.x, fp.p_in.y, fp.p_in.z};
        out["p_out"] = {fp.p_out.x, fp.p_out.y, fp.p_out.z};
        SaddleFocusReport r = saddle_report(o.params());
        out["spectrum_in"] = spectrum_json(r.spectrum_in);
        out["spectrum_out"] = spectrum_json(r.spectrum_out);
        out["nu_in"] = r.nu_in;
        out["nu_out"] = r.nu_out;
        out["shilnikov_in"] = r.shilnikov_in;
        out["shilnikov_out"] = r.shilnikov_out;
    } catch (const std::exception& e) {
        out["analysis_error"] = e.what();
        analysis_error = true;
    }
    std::cout << out.dump(2) << std::endl;
    if (st.all()) return analysis_error ? 2 : 0;
    // range failures exit 1; analysis-only failures exit 2
    if (!st.a1.pass) return 1;
    return analysis_error ? 2 : 1;
}

int cmd_section_curves(const CommonOpts& o, double x0, double x1, int n) {
    std::filesystem::create_directories(o.out_dir);
    std::ofstream f(o.out_dir + "/section_curves.csv");
    f << "curve,x,y,z\n";
    TangencyCurves tc = tangency_curves(o.params());
    for (int i = 0; i <= n; ++i) {
        double x = x0 + (x1 - x0) * i / n;
        for (auto [name, fn] :
             {std::pair<const char*, State3 (TangencyCurves::*)(double) const>{
                  "sigma", &TangencyCurves::sigma},
              {"l_p", &TangencyCurves::l_p},
              {"delta", &TangencyCurves::delta}}) {
            try {
                State3 s = (tc.*fn)(x);
                f << name << "," << fmt17(s.x) << "," << fmt17(s.y) << ","
                  << fmt17(s.z) << "\n";
            } catch (const UndefinedAtPole&) {
            }
        }
    }
    json out = header(o);
    out["file"] = o.out_dir + "/section_curves.csv";
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_trajectory(const CommonOpts& o, double x, double y, double z, double T) {
    Trajectory traj = integrate(o.params(), {x, y, z}, o.cfg(), 0.0, T);
    std::vector<CrossingEvent> evs = section_crossings(o.params(), traj);
    std::filesystem::create_directories(o.out_dir);
    std::ofstream f(o.out_dir + "/trajectory.csv");
    f << "t,x,y,z,event\n";
    std::size_t ei = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        while (ei < evs.size() && evs[ei].t <= traj.times[i]) {
            f << fmt17(evs[ei].t) << "," << fmt17(evs[ei].state.x) << ","
              << fmt17(evs[ei].state.y) << "," << fmt17(evs[ei].state.z) << ",crossing\n";
            ++ei;
        }
        f << fmt17(traj.times[i]) << "," << fmt17(traj.states[i].x) << ","
          << fmt17(traj.states[i].y) << "," << fmt17(traj.states[i].z) << ",\n";
    }
    json out = header(o);
    out["termination"] = traj.termination == Termination::reached_end ? "end"
                         : traj.termination == Termination::blow_up   ? "blow_up"
                                                                      : "step_underflow";
    out["crossings"] = evs.size();
    std::optional<double> viol = trapping_violation(o.params(), traj);
    out["trapping_violation"] = viol ? json(*viol) : json(nullptr);
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_return_map(const CommonOpts& o, int n_returns) {
    IntegratorConfig cfg = o.cfg();
    Trajectory settle = integrate(o.params(), {1, 1, 0}, cfg, 0.0, 80.0);
    CrossingResult cr = next_section_crossing(o.params(), settle.states.back(), cfg, -1);
    json out = header(o);
    if (cr.kind != CrossKind::crossing) {
        out["status"] = "no section crossing reached from the default state";
        std::cout << out.dump(2) << std::endl;
        return 0;
    }
    std::filesystem::create_directories(o.out_dir);
    std::ofstream f(o.out_dir + "/returns.csv");
    f << "u,v,u_next,v_next,flight_time,symbol\n";
    SectionPoint cur = cr.event.point;
    int done = 0, near_tangent = 0;
    for (int i = 0; i < n_returns; ++i) {
        ReturnResult rr = first_return(o.params(), cur, cfg);
        if (rr.outcome == ReturnOutcome::near_tangent) ++near_tangent;
        if (rr.outcome != ReturnOutcome::returned &&
            rr.outcome != ReturnOutcome::near_tangent)
            break;
        f << fmt17(cur.u) << "," << fmt17(cur.v) << "," << fmt17(rr.point.u) << ","
          << fmt17(rr.point.v) << "," << fmt17(rr.flight_time) << ",0\n";
        cur = rr.point;
        ++done;
    }
    out["returns"] = done;
    out["near_tangent"] = near_tangent;
    out["file"] = o.out_dir + "/returns.csv";
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_scan(const CommonOpts& o, const ScanGrid& grid) {
    DiscontinuityStructure ds = find_discontinuities(o.params(), grid, o.cfg(), o.workers);
    std::filesystem::create_directories(o.out_dir);
    std::ofstream f(o.out_dir + "/polylines.csv");
    f << "curve_id,u,v\n";
    for (std::size_t ci = 0; ci < ds.components.size(); ++ci)
        for (const SectionPoint& q : ds.components[ci])
            f << "component_" << ci << "," << fmt17(q.u) << "," << fmt17(q.v) << "\n";
    for (const SectionPoint& q : ds.delta_polyline)
        f << "delta," << fmt17(q.u) << "," << fmt17(q.v) << "\n";
    for (const SectionPoint& q : ds.rho_polyline)
        f << "rho," << fmt17(q.u) << "," << fmt17(q.v) << "\n";
    json out = header(o);
    out["found"] = ds.found;
    out["note"] = ds.note;
    out["components"] = ds.components.size();
    if (ds.found) {
        out["delta0"] = {ds.delta0.u, ds.delta0.v};
        out["p0_estimate"] = {ds.p0_estimate.u, ds.p0_estimate.v};
        out["resolution"] = ds.resolution;
    }
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_hetero_search(const CommonOpts& o, const std::string& free, double box,
                      int max_evals) {
    if (box <= 0.0 || free.size() != 2) {
        std::cerr << "hetero-search: --free needs two of a,b,c and --box > 0\n";
        return 64;
    }
    TrefoilSearchResult r =
        trefoil_search(o.params(), free[0], free[1], box, o.cfg(), max_evals);
    json out = header(o);
    out["status"] = r.found ? "found" : "not_found";
    out["best"] = {{"a", r.best.a}, {"b", r.best.b}, {"c", r.best.c}};
    out["best_mismatch"] = r.best_value;
    out["evaluations"] = r.evaluations;
    json steps = json::array();
    for (const SearchStep& s : r.improvements)
        steps.push_back({{"a", s.params.a}, {"b", s.params.b}, {"c", s.params.c},
                         {"value", s.value}});
    out["improvements"] = steps;

    TrefoilCertificate cert = certify_trefoil(r.best, o.cfg());
    json cj;
    cj["valid"] = cert.valid;
    cj["failures"] = cert.failures;
    cj["mismatch"] = cert.mismatch;
    cj["params"] = {{"a", cert.params.a}, {"b", cert.params.b}, {"c", cert.params.c}};
    cj["p0"] = {cert.p0.u, cert.p0.v};
    cj["crossing_count_on_section"] = cert.crossing_count_on_section;
    cj["transverse"] = cert.transverse;
    cj["knot_poly"] = cert.knot_poly;
    cj["closure_convention"] = cert.closure_convention;
    out["certificate"] = cj;
    write_json(o, "hetero_search.json", out);

    if (!cert.theta_curve.empty()) {
        std::ofstream f(o.out_dir + "/theta_curve.csv");
        f << "x,y,z\n";
        for (const State3& s : cert.theta_curve)
            f << fmt17(s.x) << "," << fmt17(s.y) << "," << fmt17(s.z) << "\n";
    }
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_orbits(const CommonOpts& o, int k, double index_radius) {
    IntegratorConfig cfg = o.cfg();
    std::vector<SectionPoint> seeds = orbit_seeds(o.params(), k, cfg, 400);
    std::vector<PeriodicOrbit> orbits = find_periodic(o.params(), k, seeds, cfg);
    json out = header(o);
    json arr = json::array();
    for (const PeriodicOrbit& orb : orbits) {
        json oj;
        oj["k"] = orb.k;
        oj["residual"] = orb.residual;
        oj["floquet_ratio"] = orb.floquet_ratio;
        json pts = json::array();
        for (const SectionPoint& q : orb.points) pts.push_back({q.u, q.v});
        oj["points"] = pts;
        IndexReport rep = fixed_point_index(o.params(), orb, index_radius, 256, cfg);
        if (rep.ok) oj["winding"] = rep.winding;
        else oj["winding_error"] = rep.error;
        arr.push_back(oj);
    }
    out["orbits"] = arr;
    out["seeds_tried"] = seeds.size();
    write_json(o, "orbits.json", out);
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_knots(const CommonOpts& o, bool use_template, int max_len,
              const std::string& single_word) {
    json out = header(o);
    json arr = json::array();
    auto report_word = [&](const std::string& w) {
        json r;
        r["word"] = w;
        try {
            std::vector<State3> curve = template_embed(w);
            GaussCode raw;
            AlexPoly ap = alexander_of_closed_curve(curve, o.seed);
            r["poly"] = ap.coeffs;
            r["poly_str"] = ap.str();
            auto id = torus_knot_id(ap, 16);
            if (id) r["torus"] = {id->first, id->second};
            (void)raw;
        } catch (const std::exception& e) {
            r["error"] = e.what();
        }
        arr.push_back(r);
    };
    if (!single_word.empty()) {
        report_word(single_word);
    } else if (use_template) {
        // one report per symbolic period dividing max_len (the periodic
        // points of f^max_len)
        for (const std::string& w : enumerate_words(max_len))
            if (max_len % static_cast<int>(w.size()) == 0) report_word(w);
    }
    out["reports"] = arr;
    out["count"] = arr.size();
    out["ordering_convention"] =
        "branch line by shift order; strip 1 untwisted behind, strip 2 in "
        "front with one half-twist (left strand over)";
    write_json(o, "knots.json", out);
    std::cout << out.dump(2) << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) + " - Rossler system laboratory"};
    app.set_config("--config", "", "key=value config file (flags override)");
    app.require_subcommand(1);

    CommonOpts o;

    auto* analyze = app.add_subcommand("analyze", "fixed points, spectra, assumptions");
    add_common(analyze, o);

    auto* curves = app.add_subcommand("section-curves", "sample sigma, l_p, delta");
    add_common(curves, o);
    double cx0 = -5.0, cx1 = 5.0;
    int cn = 400;
    curves->add_option("--x0", cx0);
    curves->add_option("--x1", cx1);
    curves->add_option("--n", cn);

    auto* trajcmd = app.add_subcommand("trajectory", "dump one trajectory as CSV");
    add_common(trajcmd, o);
    double tx = 1, ty = 1, tz = 0, tT = 100;
    trajcmd->add_option("--x", tx);
    trajcmd->add_option("--y", ty);
    trajcmd->add_option("--z", tz);
    trajcmd->add_option("--t", tT);

    auto* rmap = app.add_subcommand("return-map", "iterate the first-return map");
    add_common(rmap, o);
    int n_returns = 500;
    rmap->add_option("--returns", n_returns);

    auto* scan = app.add_subcommand("scan-discontinuities", "locate delta and rho");
    add_common(scan, o);
    ScanGrid grid{-3.0, 3.5, -0.5, 32.0, 121, 25};
    scan->add_option("--u0", grid.u0);
    scan->add_option("--u1", grid.u1);
    scan->add_option("--v0", grid.v0);
    scan->add_option("--v1", grid.v1);
    scan->add_option("--nu", grid.nu);
    scan->add_option("--nv", grid.nv);

    auto* hetero = app.add_subcommand("hetero-search", "two-parameter trefoil search");
    add_common(hetero, o);
    std::string free_params = "ac";
    double box = 0.05;
    int max_evals = 400;
    hetero->add_option("--free", free_params, "two of a,b,c");
    hetero->add_option("--box", box, "search half-width");
    hetero->add_option("--max-evals", max_evals);

    auto* orbits = app.add_subcommand("orbits", "periodic orbits of the return map");
    add_common(orbits, o);
    int k = 1;
    double index_radius = 1e-3;
    orbits->add_option("--k", k, "period in section returns");
    orbits->add_option("--index-radius", index_radius);

    auto* knots = app.add_subcommand("knots", "template knot reports");
    add_common(knots, o);
    bool use_template = false;
    int max_len = 4;
    std::string word;
    knots->add_flag("--template", use_template, "periodic words on L(0,1)");
    knots->add_option("--max-len", max_len, "report words of period dividing this");
    knots->add_option("--word", word, "single word report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(o);
        if (curves->parsed()) return cmd_section_curves(o, cx0, cx1, cn);
        if (trajcmd->parsed()) return cmd_trajectory(o, tx, ty, tz, tT);
        if (rmap->parsed()) return cmd_return_map(o, n_returns);
        if (scan->parsed()) return cmd_scan(o, grid);
        if (hetero->parsed()) return cmd_hetero_search(o, free_params, box, max_evals);
        if (orbits->parsed()) return cmd_orbits(o, k, index_radius);
        if (knots->parsed()) return cmd_knots(o, use_template, max_len, word);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 64;
}
