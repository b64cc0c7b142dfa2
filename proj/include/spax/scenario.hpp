#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spax/geo.hpp"

namespace spax {

// Thrown on malformed input files or invariant violations at load time.
// The CLI maps it to exit code 1.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class PracticeSetting { public_hospital, community_clinic, other };

std::string to_string(PracticeSetting s);
PracticeSetting practice_setting_from_string(const std::string& s);

// Default maximum Medicaid caseload fraction by practice setting.
double default_mc(PracticeSetting s);

struct CensusTract {
    std::int64_t ext_id = 0;   // id as it appears in input files
    int idx = -1;              // dense 0-based internal index
    LatLon centroid;
    double pop_medicaid = 0.0;
    double pop_other = 0.0;
    double mob_medicaid = 1.0;
    double mob_other = 1.0;
    std::vector<int> local_physicians;  // internal physician indices located here
    std::vector<double> covariates;     // aligned with ScenarioInstance::covariate_names, NaN = missing

    double pop_total() const { return pop_medicaid + pop_other; }
    int md() const { return static_cast<int>(local_physicians.size()); }
};

struct Physician {
    std::int64_t ext_id = 0;
    int idx = -1;
    LatLon location;
    int tract_idx = -1;
    double pam = 1.0;  // probability of accepting any Medicaid patients
    double mc = 1.0;   // maximum Medicaid caseload fraction
    PracticeSetting setting = PracticeSetting::other;
};

struct CoverageMode {
    enum Kind { max_coverage, fixed_fraction } kind = max_coverage;
    double alpha = 1.0;  // used by fixed_fraction only
};

struct SystemParameters {
    double mi_max = 25.0;
    double mi_max_limited = 10.0;
    double pc = 2500.0;  // physician patient capacity
    double lc = 0.25;    // lowest viable congestion (soft floor)
    double cc = 0.70;    // tract-level congestion cap where md_i >= 2
    CoverageMode coverage;

    void validate() const;
};

struct Arc {
    int tract = -1;
    int physician = -1;
    double miles = 0.0;
};

// Sparse tract-physician arcs, pruned at mi_max. Absent pairs are infeasible.
class DistanceMatrix {
  public:
    DistanceMatrix() = default;
    DistanceMatrix(std::vector<Arc> arcs, int n_tracts, int n_physicians);

    const std::vector<Arc>& arcs() const { return arcs_; }
    // Arc indices incident to a tract / physician.
    const std::vector<int>& arcs_of_tract(int t) const { return by_tract_[t]; }
    const std::vector<int>& arcs_of_physician(int p) const { return by_physician_[p]; }
    std::size_t size() const { return arcs_.size(); }

  private:
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> by_tract_;
    std::vector<std::vector<int>> by_physician_;
};

// Canonical covariate column order for tracts.csv.
const std::vector<std::string>& standard_covariate_names();

struct ScenarioInstance {
    std::vector<CensusTract> tracts;
    std::vector<Physician> physicians;
    DistanceMatrix distances;
    SystemParameters params;
    std::vector<std::string> covariate_names;

    int n_tracts() const { return static_cast<int>(tracts.size()); }
    int n_physicians() const { return static_cast<int>(physicians.size()); }
    double total_pop() const;
    double total_pop_medicaid() const;
    double total_pop_other() const;
    int covariate_index(const std::string& name) const;  // -1 if absent

    // Checks all type invariants; throws InputError with a specific message.
    void validate() const;
};

// Builds arcs from centroids by great-circle distance, pruned at mi_max.
DistanceMatrix build_distances_great_circle(const std::vector<CensusTract>& tracts,
                                            const std::vector<Physician>& physicians,
                                            double mi_max);

}  // namespace spax
