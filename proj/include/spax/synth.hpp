#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spax/scenario.hpp"

namespace spax {

enum class SynthProfile { uniform, georgia_like };

SynthProfile synth_profile_from_string(const std::string& s);

struct Hospital {
    std::int64_t id = 0;
    LatLon location;
    double beds = 0.0;
};

struct SyntheticState {
    ScenarioInstance scenario;
    std::vector<Hospital> hospitals;
};

// Deterministic for a fixed (seed, sizes, profile). The georgia_like profile
// produces clustered urban physicians, sparse rural tracts (some with zero
// arcs, i.e. MUA candidates), county-level pam heterogeneity, and the full
// covariate set; uniform scatters everything homogeneously.
SyntheticState generate_synthetic_state_full(std::uint64_t seed, int n_tracts,
                                             int n_physicians, SynthProfile profile,
                                             const SystemParameters& params = {});

ScenarioInstance generate_synthetic_state(std::uint64_t seed, int n_tracts,
                                          int n_physicians, SynthProfile profile,
                                          const SystemParameters& params = {});

std::string hospitals_to_csv(const std::vector<Hospital>& hospitals);
std::vector<Hospital> hospitals_from_csv(const std::string& text, const std::string& name);
std::vector<Hospital> load_hospitals(const std::string& path);

}  // namespace spax
