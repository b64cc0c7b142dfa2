#include "spax/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spax/csv.hpp"
#include "spax/metrics.hpp"
#include "spax/rng.hpp"

namespace spax {

double lc_penalty_per_unit(const ScenarioInstance& scenario) {
    double maxd = 0;
    for (const auto& a : scenario.distances.arcs()) maxd = std::max(maxd, a.miles);
    return 1e4 * std::max(maxd, 1.0);
}

AssignmentLp build_lp(const ScenarioInstance& s) {
    s.validate();
    const auto& P = s.params;
    AssignmentLp al;
    al.n_arcs = static_cast<int>(s.distances.size());
    lp::LinearProgram& L = al.lp;

    // Columns: medicaid flow and other flow per arc, then LC slack per physician.
    for (int a = 0; a < al.n_arcs; ++a) {
        const Arc& arc = s.distances.arcs()[a];
        L.add_col("nM:" + std::to_string(arc.tract) + ":" + std::to_string(arc.physician), 0.0,
                  lp::kInf, arc.miles);
    }
    for (int a = 0; a < al.n_arcs; ++a) {
        const Arc& arc = s.distances.arcs()[a];
        L.add_col("nO:" + std::to_string(arc.tract) + ":" + std::to_string(arc.physician), 0.0,
                  lp::kInf, arc.miles);
    }
    const bool soft_floor = P.lc > 0.0;
    const double penalty = lc_penalty_per_unit(s);
    if (soft_floor) {
        al.n_lc_slack = s.n_physicians();
        for (int j = 0; j < s.n_physicians(); ++j)
            L.add_col("lcslack:" + std::to_string(j), 0.0, P.pc * P.lc, penalty);
    }

    // Physician capacity: PC*LC <= sum flows (+ slack) <= PC.
    for (int j = 0; j < s.n_physicians(); ++j) {
        const int r = L.add_row("cap:" + std::to_string(j), P.pc * P.lc, P.pc);
        al.capacity_rows.push_back(r);
        for (int a : s.distances.arcs_of_physician(j)) {
            L.add_entry(r, al.col_medicaid(a), 1.0);
            L.add_entry(r, al.col_other(a), 1.0);
        }
        if (soft_floor) L.add_entry(r, al.col_slack(j), 1.0);
    }

    // Medicaid acceptance: sum medicaid flows <= PC * MC_j * pam_j.
    for (int j = 0; j < s.n_physicians(); ++j) {
        const int r = L.add_row_le("med:" + std::to_string(j),
                                   P.pc * s.physicians[j].mc * s.physicians[j].pam);
        al.medicaid_rows.push_back(r);
        for (int a : s.distances.arcs_of_physician(j)) L.add_entry(r, al.col_medicaid(a), 1.0);
    }

    // Tract congestion: total patients at physicians located in tract i,
    // over all source tracts, capped at PC*CC*md_i where md_i >= 2.
    for (const auto& t : s.tracts) {
        if (t.md() < 2) continue;
        const int r = L.add_row_le("cong:" + std::to_string(t.idx), P.pc * P.cc * t.md());
        al.congestion_rows.push_back(r);
        al.congestion_tracts.push_back(t.idx);
        for (int j : t.local_physicians) {
            for (int a : s.distances.arcs_of_physician(j)) {
                L.add_entry(r, al.col_medicaid(a), 1.0);
                L.add_entry(r, al.col_other(a), 1.0);
            }
        }
    }

    // Mobility: flows on arcs at or beyond mi_max_limited are limited to the
    // vehicle-owning share of each group. Rows exist for every tract; tracts
    // with no far arcs get a vacuous row.
    for (const auto& t : s.tracts) {
        const int rm = L.add_row_le("mobM:" + std::to_string(t.idx),
                                    t.mob_medicaid * t.pop_medicaid);
        al.mobility_m_rows.push_back(rm);
        const int ro = L.add_row_le("mobO:" + std::to_string(t.idx), t.mob_other * t.pop_other);
        al.mobility_o_rows.push_back(ro);
        for (int a : s.distances.arcs_of_tract(t.idx)) {
            if (s.distances.arcs()[a].miles >= P.mi_max_limited) {
                L.add_entry(rm, al.col_medicaid(a), 1.0);
                L.add_entry(ro, al.col_other(a), 1.0);
            }
        }
    }

    // Population: per group, assignments cannot exceed the group population.
    for (const auto& t : s.tracts) {
        const int rm = L.add_row_le("popM:" + std::to_string(t.idx), t.pop_medicaid);
        al.population_m_rows.push_back(rm);
        for (int a : s.distances.arcs_of_tract(t.idx)) L.add_entry(rm, al.col_medicaid(a), 1.0);
    }
    for (const auto& t : s.tracts) {
        const int ro = L.add_row_le("popO:" + std::to_string(t.idx), t.pop_other);
        al.population_o_rows.push_back(ro);
        for (int a : s.distances.arcs_of_tract(t.idx)) L.add_entry(ro, al.col_other(a), 1.0);
    }

    // Coverage row; vacuous until a phase pins its lower bound.
    al.coverage_row = L.add_row_ge("cov", 0.0);
    for (int a = 0; a < al.n_arcs; ++a) {
        L.add_entry(al.coverage_row, al.col_medicaid(a), 1.0);
        L.add_entry(al.coverage_row, al.col_other(a), 1.0);
    }
    return al;
}

namespace {

void set_phase1_costs(AssignmentLp& al) {
    for (int a = 0; a < al.n_arcs; ++a) {
        al.lp.cost[al.col_medicaid(a)] = -1.0;
        al.lp.cost[al.col_other(a)] = -1.0;
    }
    for (int k = 0; k < al.n_lc_slack; ++k) al.lp.cost[al.col_slack(k)] = 0.0;
}

void set_phase2_costs(AssignmentLp& al, const ScenarioInstance& s) {
    for (int a = 0; a < al.n_arcs; ++a) {
        const double d = s.distances.arcs()[a].miles;
        al.lp.cost[al.col_medicaid(a)] = d;
        al.lp.cost[al.col_other(a)] = d;
    }
    const double penalty = lc_penalty_per_unit(s);
    for (int k = 0; k < al.n_lc_slack; ++k) al.lp.cost[al.col_slack(k)] = penalty;
}

AssignmentSolution extract_solution(const ScenarioInstance& s, const AssignmentLp& al,
                                    const lp::LpSolution& ls) {
    AssignmentSolution sol;
    const int na = al.n_arcs;
    sol.flows_medicaid.resize(na);
    sol.flows_other.resize(na);
    double assigned = 0;
    for (int a = 0; a < na; ++a) {
        sol.flows_medicaid[a] = std::max(0.0, ls.x[al.col_medicaid(a)]);
        sol.flows_other[a] = std::max(0.0, ls.x[al.col_other(a)]);
        assigned += sol.flows_medicaid[a] + sol.flows_other[a];
        sol.total_distance +=
            s.distances.arcs()[a].miles * (sol.flows_medicaid[a] + sol.flows_other[a]);
    }
    const double total = s.total_pop();
    sol.achieved_coverage_fraction = total > 0 ? assigned / total : 1.0;
    for (int k = 0; k < al.n_lc_slack; ++k) {
        const double slack = ls.x[al.col_slack(k)];
        if (slack > 1e-7) sol.relaxation_report.push_back({k, slack});
    }
    std::vector<double> by_tract(s.n_tracts(), 0.0);
    for (int a = 0; a < na; ++a)
        by_tract[s.distances.arcs()[a].tract] += sol.flows_medicaid[a] + sol.flows_other[a];
    for (const auto& t : s.tracts)
        if (t.pop_total() > 0 && by_tract[t.idx] <= 1e-7) sol.unserved_tracts.push_back(t.idx);
    sol.lp_status = ls.status;
    sol.certificate = ls.certificate;
    sol.iterations = ls.iterations;
    sol.basis = ls.vstat;
    return sol;
}

}  // namespace

AssignmentOutcome solve_assignment(const ScenarioInstance& s, const SolveOptions& opt) {
    AssignmentOutcome out;
    AssignmentLp al = build_lp(s);
    lp::LpOptions lo;
    lo.tol = opt.tol;
    lo.warm_start = opt.warm;

    const double total = s.total_pop();
    long iters = 0;

    if (s.params.coverage.kind == CoverageMode::max_coverage) {
        // Phase 1: maximize assigned children.
        set_phase1_costs(al);
        lp::LpSolution p1 = lp::solve_lp(al.lp, lo);
        iters += p1.iterations;
        if (p1.status != lp::LpStatus::optimal) {
            out.message = "phase-1 solve failed: " + lp::to_string(p1.status) +
                          (p1.message.empty() ? "" : " (" + p1.message + ")");
            return out;
        }
        const double achieved = -p1.objective;
        // Phase 2: minimize distance holding coverage at the phase-1 value.
        al.lp.row_lo[al.coverage_row] = std::max(0.0, achieved);
        set_phase2_costs(al, s);
        lp::LpOptions lo2 = lo;
        lo2.warm_start = &p1.vstat;
        lp::LpSolution p2 = lp::solve_lp(al.lp, lo2);
        iters += p2.iterations;
        if (p2.status != lp::LpStatus::optimal) {
            out.message = "phase-2 solve failed: " + lp::to_string(p2.status) +
                          (p2.message.empty() ? "" : " (" + p2.message + ")");
            return out;
        }
        out.solution = extract_solution(s, al, p2);
        out.solution.iterations = iters;
        out.ok = true;
    } else {
        // Fixed coverage fraction: the coverage row is a hard floor.
        al.lp.row_lo[al.coverage_row] = s.params.coverage.alpha * total;
        set_phase2_costs(al, s);
        lp::LpSolution p2 = lp::solve_lp(al.lp, lo);
        iters += p2.iterations;
        if (p2.status == lp::LpStatus::infeasible) {
            // Report what is attainable.
            al.lp.row_lo[al.coverage_row] = 0.0;
            set_phase1_costs(al);
            lp::LpSolution mx = lp::solve_lp(al.lp, lo);
            out.max_achievable_coverage =
                (mx.status == lp::LpStatus::optimal && total > 0) ? -mx.objective / total : 0.0;
            std::ostringstream msg;
            msg << "fixed coverage " << s.params.coverage.alpha
                << " infeasible; maximum achievable coverage is "
                << format_double(out.max_achievable_coverage);
            out.message = msg.str();
            return out;
        }
        if (p2.status != lp::LpStatus::optimal) {
            out.message = "solve failed: " + lp::to_string(p2.status) +
                          (p2.message.empty() ? "" : " (" + p2.message + ")");
            return out;
        }
        out.solution = extract_solution(s, al, p2);
        out.solution.iterations = iters;
        out.ok = true;
    }

    if (out.ok && opt.audit) {
        auto violations = audit_solution(s, out.solution);
        if (!violations.empty()) {
            out.ok = false;
            out.message = "feasibility audit failed: " + violations.front() + " (and " +
                          std::to_string(violations.size() - 1) + " more)";
        }
    }
    return out;
}

std::vector<std::string> audit_solution(const ScenarioInstance& s, const AssignmentSolution& sol,
                                        double tol) {
    std::vector<std::string> bad;
    const auto& P = s.params;
    const auto& arcs = s.distances.arcs();
    const int na = static_cast<int>(arcs.size());
    if (static_cast<int>(sol.flows_medicaid.size()) != na ||
        static_cast<int>(sol.flows_other.size()) != na)
        return {"flow vectors do not match scenario arcs"};

    auto complain = [&](const std::string& what) { bad.push_back(what); };

    std::vector<double> load(s.n_physicians(), 0.0), load_m(s.n_physicians(), 0.0);
    std::vector<double> tract_m(s.n_tracts(), 0.0), tract_o(s.n_tracts(), 0.0);
    std::vector<double> far_m(s.n_tracts(), 0.0), far_o(s.n_tracts(), 0.0);
    for (int a = 0; a < na; ++a) {
        const double fm = sol.flows_medicaid[a], fo = sol.flows_other[a];
        if (fm < -tol || fo < -tol)
            complain("negative flow on arc " + std::to_string(a));
        if (arcs[a].miles > P.mi_max + 1e-9)
            complain("flow on arc beyond mi_max: arc " + std::to_string(a));
        load[arcs[a].physician] += fm + fo;
        load_m[arcs[a].physician] += fm;
        tract_m[arcs[a].tract] += fm;
        tract_o[arcs[a].tract] += fo;
        if (arcs[a].miles >= P.mi_max_limited) {
            far_m[arcs[a].tract] += fm;
            far_o[arcs[a].tract] += fo;
        }
    }

    std::vector<double> lc_slack(s.n_physicians(), 0.0);
    for (const auto& r : sol.relaxation_report) lc_slack[r.physician] = r.slack;

    for (const auto& p : s.physicians) {
        const int j = p.idx;
        if (load[j] > P.pc + tol)
            complain("capacity exceeded at physician " + std::to_string(p.ext_id));
        if (load_m[j] > P.pc * p.mc * p.pam + tol)
            complain("medicaid cap exceeded at physician " + std::to_string(p.ext_id));
        if (P.lc > 0 && load[j] < P.pc * P.lc - lc_slack[j] - tol)
            complain("LC floor violated beyond reported slack at physician " +
                     std::to_string(p.ext_id));
    }
    for (const auto& t : s.tracts) {
        if (tract_m[t.idx] > t.pop_medicaid + tol)
            complain("medicaid population exceeded in tract " + std::to_string(t.ext_id));
        if (tract_o[t.idx] > t.pop_other + tol)
            complain("other population exceeded in tract " + std::to_string(t.ext_id));
        if (far_m[t.idx] > t.mob_medicaid * t.pop_medicaid + tol)
            complain("medicaid mobility limit exceeded in tract " + std::to_string(t.ext_id));
        if (far_o[t.idx] > t.mob_other * t.pop_other + tol)
            complain("other mobility limit exceeded in tract " + std::to_string(t.ext_id));
        if (t.md() >= 2) {
            double at_tract = 0;
            for (int j : t.local_physicians) at_tract += load[j];
            if (at_tract > P.pc * P.cc * t.md() + tol)
                complain("congestion cap exceeded in tract " + std::to_string(t.ext_id));
        }
    }
    return bad;
}

EquivalenceReport solutions_equivalent(const AssignmentSolution& a, const AssignmentSolution& b,
                                       const ScenarioInstance& scenario, int n_permutations,
                                       std::uint64_t seed) {
    const int na = static_cast<int>(scenario.distances.size());
    if (static_cast<int>(a.flows_medicaid.size()) != na ||
        static_cast<int>(b.flows_medicaid.size()) != na)
        throw std::invalid_argument("solutions_equivalent: solutions do not match scenario");

    const AccessibilityMeasures ma = compute_measures(scenario, a, Scope::overall);
    const AccessibilityMeasures mb = compute_measures(scenario, b, Scope::overall);

    EquivalenceReport rep;
    rep.tc_diff.resize(scenario.n_tracts(), 0.0);
    std::vector<double> diffs;
    for (int i = 0; i < scenario.n_tracts(); ++i) {
        if (!ma.applicable[i]) continue;
        rep.tc_diff[i] = ma.travel_cost[i] - mb.travel_cost[i];
        diffs.push_back(rep.tc_diff[i]);
        rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(rep.tc_diff[i]));
    }
    if (diffs.empty()) return rep;
    double mean = 0;
    for (double d : diffs) mean += d;
    mean /= static_cast<double>(diffs.size());
    rep.mean_diff = mean;

    // Paired sign-permutation test on per-tract travel-cost differences.
    Rng rng = Rng::substream(seed, "signperm");
    const double obs = std::abs(mean);
    int hits = 0;
    for (int p = 0; p < n_permutations; ++p) {
        double m = 0;
        for (double d : diffs) m += rng.sign() * d;
        m /= static_cast<double>(diffs.size());
        if (std::abs(m) >= obs - 1e-15) ++hits;
    }
    rep.n_permutations = n_permutations;
    rep.p_value = (1.0 + hits) / (1.0 + n_permutations);
    return rep;
}

std::string assignment_to_csv(const ScenarioInstance& s, const AssignmentSolution& sol) {
    CsvWriter w({"tract_id", "physician_id", "group", "flow"});
    const auto& arcs = s.distances.arcs();
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        if (sol.flows_medicaid[a] > 1e-9) {
            w.begin_row();
            w.add(s.tracts[arcs[a].tract].ext_id);
            w.add(s.physicians[arcs[a].physician].ext_id);
            w.add(std::string("medicaid"));
            w.add(sol.flows_medicaid[a]);
        }
        if (sol.flows_other[a] > 1e-9) {
            w.begin_row();
            w.add(s.tracts[arcs[a].tract].ext_id);
            w.add(s.physicians[arcs[a].physician].ext_id);
            w.add(std::string("other"));
            w.add(sol.flows_other[a]);
        }
    }
    return w.str();
}

std::string relaxations_to_csv(const ScenarioInstance& s, const AssignmentSolution& sol) {
    CsvWriter w({"physician_id", "slack"});
    for (const auto& r : sol.relaxation_report) {
        w.begin_row();
        w.add(s.physicians[r.physician].ext_id);
        w.add(r.slack);
    }
    return w.str();
}

}  // namespace spax
