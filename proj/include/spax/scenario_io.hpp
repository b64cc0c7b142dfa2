#pragma once

#include <optional>
#include <string>

#include "spax/scenario.hpp"

namespace spax {

// CSV schemas (see README):
//   tracts.csv     id,lat,lon,pop_medicaid,pop_other,mob_medicaid,mob_other[,cov_*...]
//   physicians.csv id,lat,lon,tract_id,pam,mc,setting
//   distances.csv  tract_id,physician_id,miles
// When distance_file is absent, arcs are generated by great-circle distance
// and pruned at params.mi_max.
ScenarioInstance load_scenario(const std::string& tract_file,
                               const std::string& physician_file,
                               const std::optional<std::string>& distance_file,
                               const SystemParameters& params);

// In-memory variants used by tests and the synthetic pipeline.
ScenarioInstance load_scenario_text(const std::string& tracts_csv,
                                    const std::string& physicians_csv,
                                    const std::optional<std::string>& distances_csv,
                                    const SystemParameters& params);

std::string tracts_to_csv(const ScenarioInstance& s);
std::string physicians_to_csv(const ScenarioInstance& s);
std::string distances_to_csv(const ScenarioInstance& s);

void write_scenario(const ScenarioInstance& s, const std::string& dir);

// Key-value config file mirroring SystemParameters; unknown keys are errors.
SystemParameters load_params(const std::string& path);
SystemParameters params_from_text(const std::string& text, const std::string& name);
std::string params_to_text(const SystemParameters& p);

}  // namespace spax
