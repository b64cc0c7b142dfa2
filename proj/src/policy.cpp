#include "spax/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "spax/csv.hpp"
#include "spax/rng.hpp"

namespace spax {

const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::mobility_interpolation: return "mobility";
        case PolicyKind::pam_threshold: return "pam-threshold";
        case PolicyKind::mc_threshold: return "mc-threshold";
        case PolicyKind::pam_scale: return "pam-scale";
        case PolicyKind::mc_scale: return "mc-scale";
    }
    return "mobility";
}

PolicyKind policy_kind_from_string(const std::string& s) {
    if (s == "mobility") return PolicyKind::mobility_interpolation;
    if (s == "pam-threshold") return PolicyKind::pam_threshold;
    if (s == "mc-threshold") return PolicyKind::mc_threshold;
    if (s == "pam-scale") return PolicyKind::pam_scale;
    if (s == "mc-scale") return PolicyKind::mc_scale;
    throw InputError("unknown policy kind: '" + s + "'");
}

void PolicyTransform::validate() const {
    const double eps = 1e-12;
    switch (kind) {
        case PolicyKind::mobility_interpolation:
        case PolicyKind::pam_threshold:
        case PolicyKind::mc_threshold:
            if (lambda < -eps || lambda > 1 + eps)
                throw std::invalid_argument("lambda out of range [0,1]");
            break;
        case PolicyKind::pam_scale:
        case PolicyKind::mc_scale:
            if (lambda < 0.5 - eps || lambda > 2 + eps)
                throw std::invalid_argument("lambda out of range [0.5,2]");
            break;
    }
}

std::vector<double> default_grid(PolicyKind k) {
    std::vector<double> g;
    const bool scale =
        (k == PolicyKind::pam_scale || k == PolicyKind::mc_scale);
    const double lo = scale ? 0.5 : 0.0;
    const double hi = scale ? 2.0 : 1.0;
    for (int i = 0;; ++i) {
        const double v = lo + 0.05 * i;
        if (v > hi + 1e-9) break;
        g.push_back(std::min(v, hi));
    }
    return g;
}

ScenarioInstance apply_transform(const ScenarioInstance& scenario, const PolicyTransform& t) {
    t.validate();
    ScenarioInstance s = scenario;
    switch (t.kind) {
        case PolicyKind::mobility_interpolation:
            for (auto& tr : s.tracts)
                tr.mob_medicaid = tr.mob_medicaid + t.lambda * (tr.mob_other - tr.mob_medicaid);
            break;
        case PolicyKind::pam_threshold:
            for (auto& p : s.physicians) p.pam = std::min(t.lambda, p.pam);
            break;
        case PolicyKind::mc_threshold:
            for (auto& p : s.physicians) p.mc = std::min(t.lambda, p.mc);
            break;
        case PolicyKind::pam_scale:
            for (auto& p : s.physicians) p.pam = std::min(t.lambda * p.pam, 1.0);
            break;
        case PolicyKind::mc_scale:
            for (auto& p : s.physicians) p.mc = std::min(t.lambda * p.mc, 1.0);
            break;
    }
    return s;
}

namespace {

std::uint64_t scenario_param_digest(const ScenarioInstance& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](double v) {
        char bytes[sizeof v];
        std::memcpy(bytes, &v, sizeof v);
        h = fnv1a64(std::string_view(bytes, sizeof v), h);
    };
    for (const auto& t : s.tracts) {
        mix(t.mob_medicaid);
        mix(t.mob_other);
    }
    for (const auto& p : s.physicians) {
        mix(p.pam);
        mix(p.mc);
    }
    return h;
}

}  // namespace

SweepResult run_sweep(const ScenarioInstance& scenario, PolicyKind kind,
                      const std::vector<double>& grid, bool audit) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sweep: lambda grid must be strictly increasing");

    SweepResult r;
    r.kind = kind;
    std::vector<lp::VarStatus> warm;
    for (double lambda : grid) {
        SweepEntry e;
        e.lambda = lambda;
        const ScenarioInstance s = apply_transform(scenario, PolicyTransform{kind, lambda});
        e.scenario_digest = scenario_param_digest(s);
        SolveOptions so;
        so.audit = audit;
        so.warm = warm.empty() ? nullptr : &warm;
        AssignmentOutcome res = solve_assignment(s, so);
        if (!res.ok) {
            e.solve_status = res.solution.lp_status;
            e.error = "lambda " + format_double(lambda) + ": " + res.message;
        } else {
            e.solve_status = res.solution.lp_status;
            e.iterations = res.solution.iterations;
            for (Scope sc : {Scope::overall, Scope::medicaid, Scope::other})
                e.summary[static_cast<int>(sc)] = aggregate(compute_measures(s, res.solution, sc));
            warm = res.solution.basis;  // reuse within the sweep
        }
        r.entries.push_back(std::move(e));
    }
    return r;
}

std::vector<double> McSummary::tract_mean(Scope s, const std::string& measure) const {
    const int k = static_cast<int>(s);
    const McAccumulator* acc = measure == "coverage"      ? &coverage[k]
                               : measure == "travel_cost" ? &travel_cost[k]
                                                          : &congestion[k];
    return acc->mean;
}

std::vector<double> McSummary::tract_variance(Scope s, const std::string& measure) const {
    const int k = static_cast<int>(s);
    const McAccumulator* acc = measure == "coverage"      ? &coverage[k]
                               : measure == "travel_cost" ? &travel_cost[k]
                                                          : &congestion[k];
    std::vector<double> v(acc->mean.size(), 0.0);
    if (acc->n > 1)
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = acc->m2[i] / (static_cast<double>(acc->n) - 1);
    return v;
}

namespace {

void welford_add(McAccumulator& acc, const std::vector<double>& x) {
    if (acc.mean.empty()) {
        acc.mean.assign(x.size(), 0.0);
        acc.m2.assign(x.size(), 0.0);
    }
    ++acc.n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - acc.mean[i];
        acc.mean[i] += d / static_cast<double>(acc.n);
        acc.m2[i] += d * (x[i] - acc.mean[i]);
    }
}

}  // namespace

McSummary sample_pam_realizations(const ScenarioInstance& scenario, int n_draws,
                                  std::uint64_t seed, int n_threads) {
    if (n_draws < 1) throw std::invalid_argument("montecarlo: n_draws must be >= 1");
    McSummary out;
    out.n_draws = n_draws;
    out.seed = seed;

    struct DrawResult {
        AccessibilityMeasures m[3];
        StateSummary s[3];
        bool ok = false;
        std::string error;
    };
    std::vector<DrawResult> results(n_draws);

    auto run_draw = [&](int d) {
        ScenarioInstance s = scenario;
        Rng rng = Rng::substream(seed, "pamdraw:" + std::to_string(d));
        // Each draw realizes participation as Bernoulli(pam_j) in {0,1}.
        for (auto& p : s.physicians) p.pam = rng.bernoulli(p.pam) ? 1.0 : 0.0;
        AssignmentOutcome res = solve_assignment(s, {});
        DrawResult& dr = results[d];
        if (!res.ok) {
            dr.error = res.message;
            return;
        }
        for (Scope sc : {Scope::overall, Scope::medicaid, Scope::other}) {
            dr.m[static_cast<int>(sc)] = compute_measures(s, res.solution, sc);
            dr.s[static_cast<int>(sc)] = aggregate(dr.m[static_cast<int>(sc)]);
        }
        dr.ok = true;
    };

    int hw = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
    hw = std::max(1, std::min(hw, n_draws));
    if (hw == 1) {
        for (int d = 0; d < n_draws; ++d) run_draw(d);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < hw; ++t)
            pool.emplace_back([&, t] {
                for (int d = t; d < n_draws; d += hw) run_draw(d);
            });
        for (auto& th : pool) th.join();
    }

    // Deterministic reduction in draw order.
    for (int d = 0; d < n_draws; ++d) {
        if (!results[d].ok)
            throw std::runtime_error("montecarlo draw " + std::to_string(d) +
                                     " failed: " + results[d].error);
        for (int k = 0; k < 3; ++k) {
            welford_add(out.coverage[k], results[d].m[k].coverage);
            welford_add(out.travel_cost[k], results[d].m[k].travel_cost);
            welford_add(out.congestion[k], results[d].m[k].congestion);
            out.per_draw[k].push_back(results[d].s[k]);
        }
    }
    return out;
}

namespace {

// Benefit-oriented values: coverage up, travel cost and congestion down.
std::array<double, 6> benefits(const ParetoCandidate& c) {
    return {c.medicaid_coverage, -c.medicaid_tc, -c.medicaid_cg,
            c.other_coverage,    -c.other_tc,    -c.other_cg};
}

}  // namespace

std::vector<int> pareto_filter(const std::vector<ParetoCandidate>& candidates, double epsilon) {
    const int n = static_cast<int>(candidates.size());
    std::vector<std::array<double, 6>> b(n);
    for (int i = 0; i < n; ++i) b[i] = benefits(candidates[i]);

    auto rel = [](double a, double q) {
        return (a - q) / std::max({std::abs(a), std::abs(q), 1e-12});
    };
    // a eps-dominates c: improves some summary by > eps, worsens none by > eps.
    auto dominates = [&](int a, int c) {
        bool improves = false;
        for (int k = 0; k < 6; ++k) {
            const double r = rel(b[a][k], b[c][k]);
            if (r > epsilon) improves = true;
            if (r < -epsilon) return false;
        }
        return improves;
    };

    std::vector<int> keep;
    for (int i = 0; i < n; ++i) {
        bool dominated = false;
        for (int j = 0; j < n && !dominated; ++j)
            if (j != i && dominates(j, i)) dominated = true;
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

std::string sweep_to_csv(const SweepResult& r) {
    CsvWriter w({"kind", "lambda", "scope", "coverage", "travel_cost", "congestion",
                 "solve_status"});
    for (const auto& e : r.entries) {
        for (Scope sc : {Scope::overall, Scope::medicaid, Scope::other}) {
            const auto& s = e.summary[static_cast<int>(sc)];
            w.begin_row();
            w.add(std::string(to_string(r.kind)));
            w.add(e.lambda);
            w.add(std::string(to_string(sc)));
            if (e.error.empty()) {
                w.add(s.coverage);
                w.add(s.travel_cost);
                w.add(s.congestion);
            } else {
                w.add(std::string("nan"));
                w.add(std::string("nan"));
                w.add(std::string("nan"));
            }
            w.add(lp::to_string(e.solve_status));
        }
    }
    return w.str();
}

std::string pareto_to_csv(const std::vector<ParetoCandidate>& candidates,
                          const std::vector<int>& retained) {
    std::vector<bool> keep(candidates.size(), false);
    for (int i : retained) keep[i] = true;
    CsvWriter w({"label", "kind", "lambda", "medicaid_coverage", "medicaid_tc", "medicaid_cg",
                 "other_coverage", "other_tc", "other_cg", "retained"});
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        w.begin_row();
        w.add(c.label);
        w.add(std::string(to_string(c.transform.kind)));
        w.add(c.transform.lambda);
        w.add(c.medicaid_coverage);
        w.add(c.medicaid_tc);
        w.add(c.medicaid_cg);
        w.add(c.other_coverage);
        w.add(c.other_tc);
        w.add(c.other_cg);
        w.add(std::string(keep[i] ? "1" : "0"));
    }
    return w.str();
}

}  // namespace spax
