#include "spax/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spax/assignment.hpp"
#include "spax/csv.hpp"
#include "spax/metrics.hpp"
#include "spax/policy.hpp"
#include "spax/rng.hpp"
#include "spax/scenario_io.hpp"
#include "spax/svcm.hpp"
#include "spax/synth.hpp"

namespace fs = std::filesystem;

namespace spax {
namespace {

constexpr const char* kVersion = "spax 0.1.0";

// Every run writes a manifest capturing config, seeds and file digests, so any
// artifact can be regenerated from the manifest alone.
class Manifest {
  public:
    Manifest(std::string subcommand, std::string out_dir)
        : sub_(std::move(subcommand)), dir_(std::move(out_dir)) {
        j_["tool"] = kVersion;
        j_["subcommand"] = sub_;
        j_["digest_algorithm"] = "fnv1a64";
    }

    void arg(const std::string& key, const nlohmann::json& value) { j_["config"][key] = value; }

    void input(const std::string& path) {
        j_["inputs"][path] = digest_hex(read_text_file(path));
    }

    void output(const std::string& name, const std::string& content) {
        fs::create_directories(dir_);
        write_text_file(dir_ + "/" + name, content);
        j_["outputs"][name] = digest_hex(content);
    }

    void write() {
        fs::create_directories(dir_);
        // Warn when the same root seed already produced a different stage here.
        const std::string path = dir_ + "/manifest.json";
        if (fs::exists(path) && j_["config"].contains("seed")) {
            try {
                nlohmann::json prev = nlohmann::json::parse(read_text_file(path));
                if (prev.contains("config") && prev["config"].contains("seed") &&
                    prev["config"]["seed"] == j_["config"]["seed"] &&
                    prev["subcommand"] != sub_) {
                    std::cerr << "warning: seed " << j_["config"]["seed"]
                              << " was already used by subcommand '"
                              << prev["subcommand"].get<std::string>()
                              << "' in this directory\n";
                }
            } catch (...) {
            }
        }
        write_text_file(path, j_.dump(2) + "\n");
    }

    static std::string digest_hex(const std::string& content) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(content)));
        return buf;
    }

  private:
    std::string sub_;
    std::string dir_;
    nlohmann::json j_;
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> g;
    if (text.find(':') != std::string::npos) {
        double a, step, b;
        char c1, c2;
        std::istringstream is(text);
        if (!(is >> a >> c1 >> step >> c2 >> b) || c1 != ':' || c2 != ':' || step <= 0)
            throw InputError("malformed grid '" + text + "' (expected lo:step:hi)");
        for (double v = a; v <= b + 1e-9; v += step) g.push_back(std::min(v, b));
    } else {
        std::istringstream is(text);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) continue;
            g.push_back(std::strtod(tok.c_str(), nullptr));
        }
    }
    if (g.empty()) throw InputError("malformed grid '" + text + "'");
    return g;
}

struct ScenarioArgs {
    std::string tracts, physicians, distances, config, coverage;

    void attach(CLI::App* cmd, bool required = true) {
        auto* t = cmd->add_option("--tracts", tracts, "tracts.csv path");
        auto* p = cmd->add_option("--physicians", physicians, "physicians.csv path");
        if (required) {
            t->required();
            p->required();
        }
        cmd->add_option("--distances", distances,
                        "distances.csv path (omit to use great-circle distances)");
        cmd->add_option("--config", config, "key=value parameter file");
        cmd->add_option("--coverage", coverage, "coverage mode: max or fixed:<alpha>");
    }

    ScenarioInstance load(Manifest& man) const {
        SystemParameters params;
        if (!config.empty()) {
            params = load_params(config);
            man.input(config);
        }
        if (!coverage.empty()) {
            if (coverage == "max") {
                params.coverage = {CoverageMode::max_coverage, 1.0};
            } else if (coverage.rfind("fixed:", 0) == 0) {
                params.coverage.kind = CoverageMode::fixed_fraction;
                params.coverage.alpha = std::strtod(coverage.c_str() + 6, nullptr);
            } else {
                throw InputError("bad --coverage value '" + coverage + "'");
            }
            params.validate();
        }
        man.input(tracts);
        man.input(physicians);
        std::optional<std::string> dist;
        if (!distances.empty()) {
            man.input(distances);
            dist = distances;
        }
        return load_scenario(tracts, physicians, dist, params);
    }
};

int cmd_synth(std::uint64_t seed, int n_tracts, int n_physicians, const std::string& profile,
              const std::string& out_dir) {
    if (n_physicians <= 0)
        n_physicians = std::max(1, static_cast<int>(std::lround(n_tracts * 2000.0 / 1618.0)));
    Manifest man("synth", out_dir);
    man.arg("seed", seed);
    man.arg("tracts", n_tracts);
    man.arg("physicians", n_physicians);
    man.arg("profile", profile);
    SyntheticState st = generate_synthetic_state_full(seed, n_tracts, n_physicians,
                                                      synth_profile_from_string(profile));
    man.output("tracts.csv", tracts_to_csv(st.scenario));
    man.output("physicians.csv", physicians_to_csv(st.scenario));
    man.output("distances.csv", distances_to_csv(st.scenario));
    man.output("hospitals.csv", hospitals_to_csv(st.hospitals));
    man.output("params.cfg", params_to_text(st.scenario.params));
    man.write();
    std::cout << "synthetic state written to " << out_dir << " (" << n_tracts << " tracts, "
              << n_physicians << " physicians, " << st.scenario.distances.size() << " arcs)\n";
    return 0;
}

int cmd_solve(const ScenarioArgs& sa, const std::string& out_dir, bool audit,
              const std::string& dump_path) {
    Manifest man("solve", out_dir);
    man.arg("audit", audit);
    ScenarioInstance s = sa.load(man);
    if (!sa.coverage.empty()) man.arg("coverage", sa.coverage);

    if (!dump_path.empty()) {
        AssignmentLp al = build_lp(s);
        lp::dump_lp(al.lp, dump_path);
    }

    SolveOptions so;
    so.audit = audit;
    AssignmentOutcome res = solve_assignment(s, so);
    if (!res.ok) {
        std::cerr << "error: " << res.message << "\n";
        man.arg("error", res.message);
        man.write();
        return res.max_achievable_coverage > 0 ||
                       s.params.coverage.kind == CoverageMode::fixed_fraction
                   ? 2
                   : 3;
    }

    std::vector<AccessibilityMeasures> per_scope;
    for (Scope sc : {Scope::overall, Scope::medicaid, Scope::other})
        per_scope.push_back(compute_measures(s, res.solution, sc));

    man.output("assignment.csv", assignment_to_csv(s, res.solution));
    man.output("relaxations.csv", relaxations_to_csv(s, res.solution));
    man.output("measures.csv", measures_to_csv(s, per_scope));
    man.output("measures.geojson", measures_to_geojson(s, per_scope));
    man.arg("achieved_coverage", res.solution.achieved_coverage_fraction);
    man.arg("total_distance", res.solution.total_distance);
    man.write();

    for (const auto& m : per_scope) {
        const StateSummary st = aggregate(m);
        std::cout << to_string(st.scope) << ": coverage " << format_double(st.coverage)
                  << ", travel cost " << format_double(st.travel_cost) << " mi, congestion "
                  << format_double(st.congestion) << "\n";
    }
    if (!res.solution.relaxation_report.empty())
        std::cout << res.solution.relaxation_report.size()
                  << " physicians below the LC floor (see relaxations.csv)\n";
    return 0;
}

int cmd_sweep(const ScenarioArgs& sa, const std::string& kind_str, const std::string& grid_str,
              const std::string& out_dir, bool audit) {
    Manifest man("sweep", out_dir);
    ScenarioInstance s = sa.load(man);
    const PolicyKind kind = policy_kind_from_string(kind_str);
    const std::vector<double> grid =
        grid_str.empty() ? default_grid(kind) : parse_grid(grid_str);
    man.arg("kind", kind_str);
    man.arg("grid", grid);
    man.arg("audit", audit);

    SweepResult r = run_sweep(s, kind, grid, audit);

    std::vector<ParetoCandidate> cands;
    for (const auto& e : r.entries) {
        if (!e.error.empty()) continue;
        ParetoCandidate c;
        c.label = std::string(to_string(kind)) + ":" + format_double(e.lambda);
        c.transform = {kind, e.lambda};
        c.medicaid_coverage = e.summary[static_cast<int>(Scope::medicaid)].coverage;
        c.medicaid_tc = e.summary[static_cast<int>(Scope::medicaid)].travel_cost;
        c.medicaid_cg = e.summary[static_cast<int>(Scope::medicaid)].congestion;
        c.other_coverage = e.summary[static_cast<int>(Scope::other)].coverage;
        c.other_tc = e.summary[static_cast<int>(Scope::other)].travel_cost;
        c.other_cg = e.summary[static_cast<int>(Scope::other)].congestion;
        cands.push_back(std::move(c));
    }
    const std::vector<int> kept = pareto_filter(cands);

    man.output("sweep.csv", sweep_to_csv(r));
    man.output("pareto.csv", pareto_to_csv(cands, kept));
    man.write();
    std::cout << "swept " << r.entries.size() << " lambda values; " << kept.size()
              << " approximately Pareto-optimal\n";
    for (const auto& e : r.entries)
        if (!e.error.empty()) std::cerr << "warning: " << e.error << "\n";
    return 0;
}

int cmd_montecarlo(const ScenarioArgs& sa, int draws, std::uint64_t seed, int threads,
                   const std::string& out_dir) {
    Manifest man("montecarlo", out_dir);
    man.arg("draws", draws);
    man.arg("seed", seed);
    ScenarioInstance s = sa.load(man);

    McSummary mc = sample_pam_realizations(s, draws, seed, threads);

    // Per-tract means in the measures.csv schema so `infer` can consume them.
    CsvWriter means({"tract_id", "scope", "coverage", "travel_cost", "congestion"});
    CsvWriter vars({"tract_id", "scope", "coverage_var", "travel_cost_var", "congestion_var"});
    for (Scope sc : {Scope::overall, Scope::medicaid, Scope::other}) {
        const int k = static_cast<int>(sc);
        const auto vc = mc.tract_variance(sc, "coverage");
        const auto vt = mc.tract_variance(sc, "travel_cost");
        const auto vg = mc.tract_variance(sc, "congestion");
        for (int i = 0; i < s.n_tracts(); ++i) {
            means.begin_row();
            means.add(s.tracts[i].ext_id);
            means.add(std::string(to_string(sc)));
            means.add(mc.coverage[k].mean[i]);
            means.add(mc.travel_cost[k].mean[i]);
            means.add(mc.congestion[k].mean[i]);
            vars.begin_row();
            vars.add(s.tracts[i].ext_id);
            vars.add(std::string(to_string(sc)));
            vars.add(vc[i]);
            vars.add(vt[i]);
            vars.add(vg[i]);
        }
    }
    CsvWriter per_draw({"draw", "scope", "coverage", "travel_cost", "congestion"});
    for (int d = 0; d < draws; ++d) {
        for (Scope sc : {Scope::overall, Scope::medicaid, Scope::other}) {
            const auto& st = mc.per_draw[static_cast<int>(sc)][d];
            per_draw.begin_row();
            per_draw.add(static_cast<std::int64_t>(d));
            per_draw.add(std::string(to_string(sc)));
            per_draw.add(st.coverage);
            per_draw.add(st.travel_cost);
            per_draw.add(st.congestion);
        }
    }
    man.output("measures.csv", means.str());
    man.output("mc_variance.csv", vars.str());
    man.output("mc_draws.csv", per_draw.str());
    man.write();
    std::cout << "ran " << draws << " participation draws (seed " << seed << ")\n";
    return 0;
}

std::vector<double> response_from_measures(const CsvTable& t, const std::string& response,
                                           const ScenarioInstance& s) {
    // response = <measure>_<scope>, e.g. tc_medicaid, coverage_overall, cg_other.
    const auto us = response.rfind('_');
    if (us == std::string::npos)
        throw InputError("bad --response '" + response + "' (expected e.g. tc_medicaid)");
    const std::string meas = response.substr(0, us);
    const std::string scope = response.substr(us + 1);
    std::string col;
    if (meas == "tc" || meas == "travel_cost") col = "travel_cost";
    else if (meas == "coverage") col = "coverage";
    else if (meas == "cg" || meas == "congestion") col = "congestion";
    else throw InputError("unknown measure '" + meas + "' in --response");
    scope_from_string(scope);

    const int c_id = t.required_column("tract_id");
    const int c_scope = t.required_column("scope");
    const int c_val = t.required_column(col);
    std::map<std::int64_t, double> by_id;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.cell(r, c_scope) != scope) continue;
        by_id[t.integer(r, c_id)] = t.number(r, c_val);
    }
    if (by_id.empty()) throw InputError("no rows for scope '" + scope + "' in measures file");
    std::vector<double> y(s.n_tracts(), std::nan(""));
    for (const auto& tr : s.tracts) {
        auto it = by_id.find(tr.ext_id);
        if (it != by_id.end()) y[tr.idx] = it->second;
    }
    return y;
}

int cmd_infer(const ScenarioArgs& sa, const std::string& measures_path,
              const std::string& response, const std::string& covariates_arg,
              const std::string& hospitals_path, double alpha, int n_boot, int basis_knots,
              int max_cycles, std::uint64_t seed, int threads, const std::string& out_dir) {
    Manifest man("infer", out_dir);
    man.arg("response", response);
    man.arg("covariates", covariates_arg);
    man.arg("alpha", alpha);
    man.arg("n_boot", n_boot);
    man.arg("basis_knots", basis_knots);
    man.arg("seed", seed);
    ScenarioInstance s = sa.load(man);
    man.input(measures_path);
    CsvTable mt = CsvTable::read_file(measures_path);
    const std::vector<double> y = response_from_measures(mt, response, s);

    // Covariates come from tracts.csv; density/divratio (and hospdist, given a
    // hospitals file) are computed on the fly when the column is absent.
    std::vector<LatLon> centroids;
    std::vector<double> pops;
    for (const auto& t : s.tracts) {
        centroids.push_back(t.centroid);
        pops.push_back(t.pop_total());
    }
    std::vector<std::string> names;
    std::vector<std::vector<double>> X;
    std::istringstream is(covariates_arg);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        std::string name = tok.rfind("cov_", 0) == 0 ? tok : "cov_" + tok;
        const int ci = s.covariate_index(name);
        std::vector<double> col;
        if (ci >= 0) {
            bool any = false;
            for (const auto& t : s.tracts) {
                col.push_back(t.covariates[ci]);
                any = any || std::isfinite(t.covariates[ci]);
            }
            if (!any) col.clear();
        }
        if (col.empty()) {
            if (name == "cov_density") {
                std::vector<WeightedPoint> pts;
                for (const auto& t : s.tracts) pts.push_back({t.centroid, t.pop_total()});
                col = kde_density(pts, centroids, std::max(1.0, silverman_bandwidth(pts))).values;
            } else if (name == "cov_divratio") {
                const int nw = s.covariate_index("cov_nonwhite");
                if (nw < 0)
                    throw InputError("cov_divratio needs cov_nonwhite in tracts.csv");
                std::vector<std::vector<double>> groups;
                for (const auto& t : s.tracts) {
                    const double p = std::max(1.0, t.pop_total());
                    groups.push_back({p * t.covariates[nw], p * (1 - t.covariates[nw])});
                }
                col = diversity_ratio(centroids, groups).values;
            } else if (name == "cov_hospdist" && !hospitals_path.empty()) {
                man.input(hospitals_path);
                col = hospital_distance_surface(centroids, load_hospitals(hospitals_path)).values;
            } else {
                throw InputError("covariate '" + name +
                                 "' not present in tracts.csv and not computable");
            }
        }
        names.push_back(name);
        X.push_back(std::move(col));
    }
    if (names.empty()) throw InputError("no covariates given");

    FitOptions fo;
    fo.basis.knots_per_dim = basis_knots;
    fo.max_cycles = max_cycles;
    ModelFit fit = fit_svcm(y, names, X, centroids, fo);
    fit.response_name = response;
    BandOptions bo;
    bo.alpha = alpha;
    bo.n_boot = n_boot;
    bo.seed = seed;
    bo.n_threads = threads;
    simultaneous_band(fit, 0, bo);

    std::vector<std::int64_t> ids;
    for (const auto& t : s.tracts) ids.push_back(t.ext_id);
    man.output("fit.json", fit_to_json(fit));
    man.output("coefficients.csv", coefficients_to_csv(fit, ids));
    man.output("significance.geojson", significance_to_geojson(fit, ids));
    man.write();

    std::cout << "fit " << fit.covariate_names.size() << " surfaces on "
              << fit.sites.size() << " tracts (" << fit.dropped_rows
              << " dropped); AIC " << format_double(fit.aic) << ", residual Moran I "
              << format_double(fit.resid_moran.I) << "\n";
    for (const auto& surf : fit.surfaces) {
        const SignificanceMap m = significance_map(surf);
        std::cout << "  " << surf.covariate << ": "
                  << (m.shape.verdict == ShapeVerdict::constant ? "constant" : "nonconstant")
                  << (m.shape.verdict == ShapeVerdict::constant && m.shape.significant
                          ? (m.shape.sign > 0 ? ", significant positive" : ", significant negative")
                          : "")
                  << ", " << m.n_positive << "+ / " << m.n_negative << "- tracts\n";
    }
    if (!fit.converged) {
        std::cerr << "warning: backfitting did not converge in " << fit.cycles << " cycles\n";
    }
    return 0;
}

int cmd_report(const std::string& run_dir) {
    const std::string mpath = run_dir + "/manifest.json";
    if (!fs::exists(mpath)) throw InputError("no manifest.json in " + run_dir);
    nlohmann::json man = nlohmann::json::parse(read_text_file(mpath));
    std::cout << "run: " << man.value("subcommand", "?") << " (" << man.value("tool", "?")
              << ")\n";
    if (man.contains("config")) std::cout << "config: " << man["config"].dump() << "\n";

    const std::string measures = run_dir + "/measures.csv";
    if (fs::exists(measures)) {
        CsvTable t = CsvTable::read_file(measures);
        const int c_scope = t.required_column("scope");
        const int c_cov = t.required_column("coverage");
        const int c_tc = t.required_column("travel_cost");
        const int c_cg = t.required_column("congestion");
        for (const std::string scope : {"overall", "medicaid", "other"}) {
            double cov = 0, tc = 0, cg = 0;
            int n = 0;
            for (std::size_t r = 0; r < t.rows(); ++r) {
                if (t.cell(r, c_scope) != scope) continue;
                const double c = t.number(r, c_cov);
                if (std::isnan(c)) continue;
                cov += c;
                tc += t.number(r, c_tc);
                cg += t.number(r, c_cg);
                ++n;
            }
            if (n)
                std::cout << scope << " (tract means, n=" << n << "): coverage "
                          << format_double(cov / n) << ", travel cost " << format_double(tc / n)
                          << ", congestion " << format_double(cg / n) << "\n";
        }
    }
    const std::string sweep = run_dir + "/sweep.csv";
    if (fs::exists(sweep)) std::cout << "sweep results in " << sweep << "\n";
    const std::string fitj = run_dir + "/fit.json";
    if (fs::exists(fitj)) {
        nlohmann::json f = nlohmann::json::parse(read_text_file(fitj));
        std::cout << "fit: AIC " << f.value("aic", 0.0) << ", edf " << f.value("edf", 0.0)
                  << ", converged " << f.value("converged", false) << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"spax: spatial accessibility measurement and inference"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic state");
    std::uint64_t synth_seed = 1;
    int synth_tracts = 100, synth_phys = 0;
    std::string synth_profile = "georgia-like", synth_out = "run";
    synth->add_option("--seed", synth_seed, "root RNG seed");
    synth->add_option("--tracts", synth_tracts, "number of census tracts")->required();
    synth->add_option("--physicians", synth_phys,
                      "number of physicians (default scales with tracts)");
    synth->add_option("--profile", synth_profile, "uniform | georgia-like");
    synth->add_option("--out", synth_out, "output directory");

    // solve
    auto* solve = app.add_subcommand("solve", "solve the assignment model and write measures");
    ScenarioArgs solve_sa;
    solve_sa.attach(solve);
    std::string solve_out = "run";
    std::string solve_dump;
    bool solve_audit = false;
    solve->add_option("--out", solve_out, "output directory");
    solve->add_flag("--audit", solve_audit, "re-verify every constraint family on the flows");
    solve->add_option("--dump-lp", solve_dump, "write a plain-text LP dump to this path");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a policy lambda sweep");
    ScenarioArgs sweep_sa;
    sweep_sa.attach(sweep);
    std::string sweep_kind, sweep_grid, sweep_out = "run";
    bool sweep_audit = false;
    sweep->add_option("--kind", sweep_kind,
                      "mobility | pam-threshold | mc-threshold | pam-scale | mc-scale")
        ->required();
    sweep->add_option("--grid", sweep_grid, "lo:step:hi or comma list (default: paper grid)");
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_flag("--audit", sweep_audit, "audit every solve");

    // montecarlo
    auto* mc = app.add_subcommand("montecarlo", "Bernoulli pam participation draws");
    ScenarioArgs mc_sa;
    mc_sa.attach(mc);
    int mc_draws = 20, mc_threads = 0;
    std::uint64_t mc_seed = 1;
    std::string mc_out = "run";
    mc->add_option("--draws", mc_draws, "number of draws")->required();
    mc->add_option("--seed", mc_seed, "root RNG seed");
    mc->add_option("--threads", mc_threads, "worker threads (0 = hardware)");
    mc->add_option("--out", mc_out, "output directory");

    // infer
    auto* infer = app.add_subcommand("infer", "space-varying coefficient regression");
    ScenarioArgs infer_sa;
    infer_sa.attach(infer);
    std::string infer_measures, infer_response, infer_covs, infer_hospitals, infer_out = "run";
    double infer_alpha = 0.05;
    int infer_boot = 500, infer_knots = 8, infer_cycles = 200, infer_threads = 0;
    std::uint64_t infer_seed = 1;
    infer->add_option("--measures", infer_measures, "measures.csv from solve/montecarlo")
        ->required();
    infer->add_option("--response", infer_response,
                      "<measure>_<scope>, e.g. tc_medicaid or coverage_overall")
        ->required();
    infer->add_option("--covariates", infer_covs, "comma-separated covariate names")->required();
    infer->add_option("--hospitals", infer_hospitals, "hospitals.csv (for cov_hospdist)");
    infer->add_option("--alpha", infer_alpha, "band level (default 0.05)");
    infer->add_option("--nboot", infer_boot, "bootstrap replicates (default 500)");
    infer->add_option("--basis-knots", infer_knots, "knots per dimension (default 8)");
    infer->add_option("--max-cycles", infer_cycles, "backfitting cycle cap (default 200)");
    infer->add_option("--seed", infer_seed, "root RNG seed");
    infer->add_option("--threads", infer_threads, "worker threads (0 = hardware)");
    infer->add_option("--out", infer_out, "output directory");

    // report
    auto* report = app.add_subcommand("report", "summarize a run directory");
    std::string report_dir = "run";
    report->add_option("--run", report_dir, "run directory with manifest.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (synth->parsed())
            return cmd_synth(synth_seed, synth_tracts, synth_phys, synth_profile, synth_out);
        if (solve->parsed()) return cmd_solve(solve_sa, solve_out, solve_audit, solve_dump);
        if (sweep->parsed())
            return cmd_sweep(sweep_sa, sweep_kind, sweep_grid, sweep_out, sweep_audit);
        if (mc->parsed()) return cmd_montecarlo(mc_sa, mc_draws, mc_seed, mc_threads, mc_out);
        if (infer->parsed())
            return cmd_infer(infer_sa, infer_measures, infer_response, infer_covs,
                             infer_hospitals, infer_alpha, infer_boot, infer_knots, infer_cycles,
                             infer_seed, infer_threads, infer_out);
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace spax
