#include "spax/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace spax {

std::string to_string(PracticeSetting s) {
    switch (s) {
        case PracticeSetting::public_hospital: return "public_hospital";
        case PracticeSetting::community_clinic: return "community_clinic";
        case PracticeSetting::other: return "other";
    }
    return "other";
}

PracticeSetting practice_setting_from_string(const std::string& s) {
    if (s == "public_hospital" || s == "hospital") return PracticeSetting::public_hospital;
    if (s == "community_clinic" || s == "clinic") return PracticeSetting::community_clinic;
    if (s == "other") return PracticeSetting::other;
    throw InputError("unknown practice setting: '" + s + "'");
}

double default_mc(PracticeSetting s) {
    switch (s) {
        case PracticeSetting::public_hospital: return 0.74;
        case PracticeSetting::community_clinic: return 0.64;
        case PracticeSetting::other: return 0.32;
    }
    return 0.32;
}

void SystemParameters::validate() const {
    if (!(pc > 0)) throw InputError("params: pc must be positive");
    if (!(lc >= 0 && cc <= 1 && lc <= cc)) throw InputError("params: need 0 <= lc <= cc <= 1");
    if (!(mi_max_limited > 0 && mi_max_limited <= mi_max))
        throw InputError("params: need 0 < mi_max_limited <= mi_max");
    if (coverage.kind == CoverageMode::fixed_fraction &&
        !(coverage.alpha >= 0 && coverage.alpha <= 1))
        throw InputError("params: coverage fraction must lie in [0,1]");
}

DistanceMatrix::DistanceMatrix(std::vector<Arc> arcs, int n_tracts, int n_physicians)
    : arcs_(std::move(arcs)), by_tract_(n_tracts), by_physician_(n_physicians) {
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        by_tract_[arcs_[a].tract].push_back(static_cast<int>(a));
        by_physician_[arcs_[a].physician].push_back(static_cast<int>(a));
    }
}

const std::vector<std::string>& standard_covariate_names() {
    static const std::vector<std::string> names = {
        "cov_income", "cov_edu",      "cov_unemp",   "cov_nonwhite",
        "cov_density", "cov_hospdist", "cov_divratio"};
    return names;
}

double ScenarioInstance::total_pop() const {
    double s = 0;
    for (const auto& t : tracts) s += t.pop_total();
    return s;
}

double ScenarioInstance::total_pop_medicaid() const {
    double s = 0;
    for (const auto& t : tracts) s += t.pop_medicaid;
    return s;
}

double ScenarioInstance::total_pop_other() const {
    double s = 0;
    for (const auto& t : tracts) s += t.pop_other;
    return s;
}

int ScenarioInstance::covariate_index(const std::string& name) const {
    for (std::size_t i = 0; i < covariate_names.size(); ++i)
        if (covariate_names[i] == name) return static_cast<int>(i);
    return -1;
}

void ScenarioInstance::validate() const {
    params.validate();
    for (const auto& t : tracts) {
        const std::string who = "tract " + std::to_string(t.ext_id);
        if (!(t.pop_medicaid >= 0) || !std::isfinite(t.pop_medicaid) || !(t.pop_other >= 0) ||
            !std::isfinite(t.pop_other))
            throw InputError(who + ": negative or non-finite population");
        if (!(t.mob_medicaid >= 0 && t.mob_medicaid <= 1) ||
            !(t.mob_other >= 0 && t.mob_other <= 1))
            throw InputError(who + ": mobility fraction out of range");
        for (int p : t.local_physicians) {
            if (p < 0 || p >= n_physicians())
                throw InputError(who + ": dangling physician reference");
            if (physicians[p].tract_idx != t.idx)
                throw InputError(who + ": physician list inconsistent with physician records");
        }
    }
    for (const auto& p : physicians) {
        const std::string who = "physician " + std::to_string(p.ext_id);
        if (!(p.pam >= 0 && p.pam <= 1)) throw InputError(who + ": pam out of range [0,1]");
        if (!(p.mc >= 0 && p.mc <= 1)) throw InputError(who + ": mc out of range [0,1]");
        if (p.tract_idx < 0 || p.tract_idx >= n_tracts())
            throw InputError(who + ": dangling tract reference");
    }
    for (const auto& a : distances.arcs()) {
        if (a.tract < 0 || a.tract >= n_tracts() || a.physician < 0 ||
            a.physician >= n_physicians())
            throw InputError("distance arc references unknown tract/physician");
        if (!(a.miles >= 0)) throw InputError("negative distance on arc");
        if (a.miles > params.mi_max + 1e-9)
            throw InputError("arc exceeds mi_max after pruning");
    }
}

DistanceMatrix build_distances_great_circle(const std::vector<CensusTract>& tracts,
                                            const std::vector<Physician>& physicians,
                                            double mi_max) {
    std::vector<Arc> arcs;
    for (const auto& t : tracts) {
        for (const auto& p : physicians) {
            const double d = great_circle_miles(t.centroid, p.location);
            if (d <= mi_max) arcs.push_back(Arc{t.idx, p.idx, d});
        }
    }
    return DistanceMatrix(std::move(arcs), static_cast<int>(tracts.size()),
                          static_cast<int>(physicians.size()));
}

}  // namespace spax
