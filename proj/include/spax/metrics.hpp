#pragma once

#include <string>
#include <vector>

#include "spax/assignment.hpp"
#include "spax/scenario.hpp"

namespace spax {

enum class Scope { overall, medicaid, other };

const char* to_string(Scope s);
Scope scope_from_string(const std::string& s);

// Per-tract coverage / travel cost / congestion for one population scope.
// An unserved tract (coverage 0) carries the worst values: TC = mi_max,
// CG = 1. Tracts with zero scope population are flagged not applicable and
// excluded from weighted aggregates.
struct AccessibilityMeasures {
    Scope scope = Scope::overall;
    std::vector<double> coverage;
    std::vector<double> travel_cost;
    std::vector<double> congestion;
    std::vector<double> population;  // scope population per tract (the weights)
    std::vector<bool> applicable;    // false where scope population is zero
};

struct StateSummary {
    Scope scope;
    double coverage = 0.0;
    double travel_cost = 0.0;
    double congestion = 0.0;
    double population = 0.0;
    // Distributional summaries over applicable tracts (unweighted quantiles).
    struct Quantiles {
        double min, q25, median, q75, max;
    };
    Quantiles coverage_q{}, travel_cost_q{}, congestion_q{};
};

AccessibilityMeasures compute_measures(const ScenarioInstance& scenario,
                                       const AssignmentSolution& solution, Scope scope);

StateSummary aggregate(const AccessibilityMeasures& m);

std::string measures_to_csv(const ScenarioInstance& scenario,
                            const std::vector<AccessibilityMeasures>& per_scope);

// FeatureCollection of tract centroids with measures as properties.
std::string measures_to_geojson(const ScenarioInstance& scenario,
                                const std::vector<AccessibilityMeasures>& per_scope);

}  // namespace spax
