#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spax/lp.hpp"
#include "spax/scenario.hpp"

namespace spax {

// Sparse flows keyed by arc index into scenario.distances.arcs().
struct AssignmentSolution {
    std::vector<double> flows_medicaid;  // one value per arc
    std::vector<double> flows_other;
    double achieved_coverage_fraction = 0.0;  // assigned / total children
    double total_distance = 0.0;              // child-miles over assigned flow
    struct Relaxation {
        int physician;
        double slack;  // patients short of the PC*LC floor
    };
    std::vector<Relaxation> relaxation_report;
    std::vector<int> unserved_tracts;  // zero-arc or zero-flow tracts with population

    lp::LpStatus lp_status = lp::LpStatus::numerical_failure;
    lp::LpCertificate certificate;
    long iterations = 0;
    std::vector<lp::VarStatus> basis;  // reusable warm start within a sweep

    double flow(int arc, bool medicaid) const {
        return medicaid ? flows_medicaid[arc] : flows_other[arc];
    }
};

struct AssignmentOutcome {
    bool ok = false;
    AssignmentSolution solution;            // valid when ok
    double max_achievable_coverage = 0.0;   // reported when fixed_fraction infeasible
    std::string message;
};

// Row bookkeeping so tests and the feasibility audit can census the LP.
struct AssignmentLp {
    lp::LinearProgram lp;
    // column layout: [medicaid flows per arc][other flows per arc][lc slack per physician]
    int n_arcs = 0;
    int n_lc_slack = 0;  // 0 when params.lc == 0
    std::vector<int> capacity_rows;    // per physician (range rows)
    std::vector<int> medicaid_rows;    // per physician
    std::vector<int> congestion_rows;  // per tract with md >= 2 (parallel to congestion_tracts)
    std::vector<int> congestion_tracts;
    std::vector<int> mobility_m_rows;  // per tract
    std::vector<int> mobility_o_rows;  // per tract
    std::vector<int> population_m_rows;
    std::vector<int> population_o_rows;
    int coverage_row = -1;

    int col_medicaid(int arc) const { return arc; }
    int col_other(int arc) const { return n_arcs + arc; }
    int col_slack(int k) const { return 2 * n_arcs + k; }
};

// Translates a scenario into the constrained assignment LP. The LC floor is
// soft: when params.lc > 0 each capacity row carries a slack column that is
// free in phase 1 and charged 1e4 * max(d_ij) per unit in phase 2.
AssignmentLp build_lp(const ScenarioInstance& scenario);

double lc_penalty_per_unit(const ScenarioInstance& scenario);

struct SolveOptions {
    double tol = 1e-9;
    bool audit = false;                              // run the independent checker
    const std::vector<lp::VarStatus>* warm = nullptr;  // basis from a previous solve
};

// Two-phase solve: maximize assigned children (or enforce the fixed coverage
// fraction), then minimize total distance holding coverage.
AssignmentOutcome solve_assignment(const ScenarioInstance& scenario, const SolveOptions& = {});

// Independent re-verification of every constraint family on raw flows,
// straight from scenario data (no LP machinery). Returns human-readable
// violations; empty means feasible at `tol` absolute.
std::vector<std::string> audit_solution(const ScenarioInstance& scenario,
                                        const AssignmentSolution& sol, double tol = 1e-6);

// Paired comparison of two feasible solutions for the same scenario:
// per-tract overall travel-cost differences and a sign-permutation test.
struct EquivalenceReport {
    std::vector<double> tc_diff;  // per tract, a - b
    double mean_diff = 0.0;
    double max_abs_diff = 0.0;
    double p_value = 1.0;
    int n_permutations = 0;
};

EquivalenceReport solutions_equivalent(const AssignmentSolution& a, const AssignmentSolution& b,
                                       const ScenarioInstance& scenario,
                                       int n_permutations = 2000, std::uint64_t seed = 1);

std::string assignment_to_csv(const ScenarioInstance& scenario, const AssignmentSolution& sol);
std::string relaxations_to_csv(const ScenarioInstance& scenario, const AssignmentSolution& sol);

}  // namespace spax
