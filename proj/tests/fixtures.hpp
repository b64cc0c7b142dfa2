#pragma once

#include <string>
#include <vector>

#include "spax/rng.hpp"
#include "spax/scenario.hpp"
#include "spax/scenario_io.hpp"

namespace spax::testfix {

// Two tracts, two physicians, distances [[2,8],[12,3]], PC=300, LC=0, CC=1,
// pam=mc=mob=1. Optimal assignment: A->1 (200), B->2 (100), cost 700.
inline ScenarioInstance t1(double pc = 300.0) {
    const std::string tracts =
        "id,lat,lon,pop_medicaid,pop_other,mob_medicaid,mob_other\n"
        "1,33.00,-84.00,100,100,1,1\n"
        "2,33.10,-84.10,50,50,1,1\n";
    const std::string phys =
        "id,lat,lon,tract_id,pam,mc,setting\n"
        "10,33.00,-84.00,1,1,1,other\n"
        "11,33.10,-84.10,2,1,1,other\n";
    const std::string dist =
        "tract_id,physician_id,miles\n"
        "1,10,2\n"
        "1,11,8\n"
        "2,10,12\n"
        "2,11,3\n";
    SystemParameters p;
    p.pc = pc;
    p.lc = 0.0;
    p.cc = 1.0;
    return load_scenario_text(tracts, phys, dist, p);
}

// Small random instances sized for the exhaustive vertex-enumeration oracle:
// few arcs, lc = 0 (floors covered by dedicated tests), binding capacities.
inline ScenarioInstance oracle_instance(std::uint64_t seed) {
    Rng rng = Rng::substream(seed, "oracle-instance");
    const int nt = static_cast<int>(rng.uniform_int(2, 4));
    const int np = static_cast<int>(rng.uniform_int(1, 3));

    ScenarioInstance s;
    s.params.pc = rng.uniform(60.0, 250.0);
    s.params.lc = 0.0;
    s.params.cc = rng.uniform(0.6, 1.0);
    s.params.mi_max = 25.0;
    s.params.mi_max_limited = 10.0;

    for (int i = 0; i < nt; ++i) {
        CensusTract t;
        t.ext_id = i + 1;
        t.idx = i;
        t.centroid = {33.0 + rng.uniform(0.0, 0.45), -84.0 + rng.uniform(0.0, 0.45)};
        t.pop_medicaid = std::floor(rng.uniform(10.0, 150.0));
        t.pop_other = std::floor(rng.uniform(10.0, 150.0));
        t.mob_medicaid = rng.uniform(0.4, 1.0);
        t.mob_other = rng.uniform(0.6, 1.0);
        s.tracts.push_back(t);
    }
    for (int j = 0; j < np; ++j) {
        Physician p;
        p.ext_id = 100 + j;
        p.idx = j;
        p.location = {33.0 + rng.uniform(0.0, 0.45), -84.0 + rng.uniform(0.0, 0.45)};
        p.tract_idx = static_cast<int>(rng.uniform_int(0, nt - 1));
        p.pam = rng.uniform(0.2, 1.0);
        p.mc = rng.uniform(0.2, 1.0);
        s.tracts[p.tract_idx].local_physicians.push_back(j);
        s.physicians.push_back(p);
    }
    // Sparse arcs: each pair kept with probability ~0.6, capped at 5 total so
    // the oracle's combinatorics stay tractable.
    std::vector<Arc> arcs;
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < np; ++j) {
            if (static_cast<int>(arcs.size()) >= 5) break;
            const double d = great_circle_miles(s.tracts[i].centroid, s.physicians[j].location);
            if (d <= s.params.mi_max && rng.uniform01() < 0.75)
                arcs.push_back(Arc{i, j, d});
        }
    if (arcs.empty())
        arcs.push_back(Arc{0, 0,
                           std::min(s.params.mi_max,
                                    great_circle_miles(s.tracts[0].centroid,
                                                       s.physicians[0].location))});
    s.distances = DistanceMatrix(std::move(arcs), nt, np);
    s.validate();
    return s;
}

}  // namespace spax::testfix
