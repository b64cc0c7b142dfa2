#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spax/metrics.hpp"
#include "spax/scenario.hpp"

namespace spax {

enum class PolicyKind {
    mobility_interpolation,  // mob_M' = mob_M + lambda (mob_O - mob_M), lambda in [0,1]
    pam_threshold,           // pam' = min(lambda, pam),                 lambda in [0,1]
    mc_threshold,            // mc'  = min(lambda, mc),                  lambda in [0,1]
    pam_scale,               // pam' = min(lambda pam, 1),               lambda in [0.5,2]
    mc_scale                 // mc'  = min(lambda mc, 1),                lambda in [0.5,2]
};

const char* to_string(PolicyKind k);
PolicyKind policy_kind_from_string(const std::string& s);

struct PolicyTransform {
    PolicyKind kind;
    double lambda;

    void validate() const;  // lambda within the kind's grid range
};

// Paper grids: step 0.05, [0,1] for mobility/thresholding, [0.5,2] for scaling.
std::vector<double> default_grid(PolicyKind k);

ScenarioInstance apply_transform(const ScenarioInstance& scenario, const PolicyTransform& t);

struct SweepEntry {
    double lambda = 0.0;
    std::uint64_t scenario_digest = 0;
    StateSummary summary[3];  // indexed by Scope
    lp::LpStatus solve_status = lp::LpStatus::numerical_failure;
    long iterations = 0;
    std::string error;  // nonempty when the solve failed at this lambda
};

struct SweepResult {
    PolicyKind kind;
    std::vector<SweepEntry> entries;  // lambda strictly increasing
};

// Re-solves the scenario at each grid point, warm-starting from the previous
// lambda. Grid must be strictly increasing and within the kind's range.
SweepResult run_sweep(const ScenarioInstance& scenario, PolicyKind kind,
                      const std::vector<double>& grid, bool audit = false);

// Monte Carlo over Bernoulli(pam_j) participation draws. Per-tract means of
// the accessibility measures across draws are the regression inputs.
struct McAccumulator {
    std::vector<double> mean, m2;  // Welford per tract
    long n = 0;
};

struct McSummary {
    int n_draws = 0;
    std::uint64_t seed = 0;
    // per scope, per measure: per-tract mean and variance across draws
    McAccumulator coverage[3], travel_cost[3], congestion[3];
    // state-level (population-weighted) summaries per draw, per scope
    std::vector<StateSummary> per_draw[3];

    std::vector<double> tract_mean(Scope s, const std::string& measure) const;
    std::vector<double> tract_variance(Scope s, const std::string& measure) const;
};

McSummary sample_pam_realizations(const ScenarioInstance& scenario, int n_draws,
                                  std::uint64_t seed, int n_threads = 0);

// One candidate policy with its tracked summaries: (medicaid, other) x
// (coverage up, travel cost down, congestion down).
struct ParetoCandidate {
    std::string label;
    PolicyTransform transform;
    double medicaid_coverage, medicaid_tc, medicaid_cg;
    double other_coverage, other_tc, other_cg;
};

// Drops candidates that are eps-dominated: another candidate improves some
// tracked summary by more than eps (relative) while worsening none by more
// than eps. Returns indices of retained candidates in input order.
std::vector<int> pareto_filter(const std::vector<ParetoCandidate>& candidates,
                               double epsilon = 0.005);

std::string sweep_to_csv(const SweepResult& r);
std::string pareto_to_csv(const std::vector<ParetoCandidate>& candidates,
                          const std::vector<int>& retained);

}  // namespace spax
