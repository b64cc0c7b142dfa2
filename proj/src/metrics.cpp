#include "spax/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spax/csv.hpp"

namespace spax {

const char* to_string(Scope s) {
    switch (s) {
        case Scope::overall: return "overall";
        case Scope::medicaid: return "medicaid";
        case Scope::other: return "other";
    }
    return "overall";
}

Scope scope_from_string(const std::string& s) {
    if (s == "overall") return Scope::overall;
    if (s == "medicaid") return Scope::medicaid;
    if (s == "other") return Scope::other;
    throw InputError("unknown scope: '" + s + "'");
}

AccessibilityMeasures compute_measures(const ScenarioInstance& s,
                                       const AssignmentSolution& sol, Scope scope) {
    const auto& arcs = s.distances.arcs();
    const int na = static_cast<int>(arcs.size());
    const int nt = s.n_tracts();
    const double mi_max = s.params.mi_max;

    // Physician loads are joint across groups: every group contributes to the
    // congestion a patient experiences, whichever scope is being measured.
    std::vector<double> load(s.n_physicians(), 0.0);
    for (int a = 0; a < na; ++a)
        load[arcs[a].physician] += sol.flows_medicaid[a] + sol.flows_other[a];

    AccessibilityMeasures m;
    m.scope = scope;
    m.coverage.assign(nt, 0.0);
    m.travel_cost.assign(nt, 0.0);
    m.congestion.assign(nt, 0.0);
    m.population.assign(nt, 0.0);
    m.applicable.assign(nt, false);

    std::vector<double> assigned(nt, 0.0), dist(nt, 0.0), congsum(nt, 0.0);
    for (int a = 0; a < na; ++a) {
        double f = 0;
        switch (scope) {
            case Scope::overall: f = sol.flows_medicaid[a] + sol.flows_other[a]; break;
            case Scope::medicaid: f = sol.flows_medicaid[a]; break;
            case Scope::other: f = sol.flows_other[a]; break;
        }
        if (f <= 0) continue;
        const int i = arcs[a].tract;
        assigned[i] += f;
        dist[i] += arcs[a].miles * f;
        congsum[i] += f * (load[arcs[a].physician] / s.params.pc);
    }

    bool any_pop = false;
    for (const auto& t : s.tracts) {
        const int i = t.idx;
        double p = 0;
        switch (scope) {
            case Scope::overall: p = t.pop_total(); break;
            case Scope::medicaid: p = t.pop_medicaid; break;
            case Scope::other: p = t.pop_other; break;
        }
        if (p <= 0) continue;  // not applicable in this scope
        any_pop = true;
        m.population[i] = p;
        m.applicable[i] = true;
        if (assigned[i] <= 1e-9) {
            // Unserved tracts take the worst possible accessibility.
            m.coverage[i] = 0.0;
            m.travel_cost[i] = mi_max;
            m.congestion[i] = 1.0;
            continue;
        }
        const double c = std::min(1.0, assigned[i] / p);
        m.coverage[i] = c;
        m.travel_cost[i] =
            std::clamp(dist[i] / p + mi_max * (1.0 - c), 0.0, mi_max);
        m.congestion[i] = std::clamp(congsum[i] / p + (1.0 - c), 0.0, 1.0);
    }
    if (!any_pop)
        throw InputError(std::string("no tract has population in scope ") + to_string(scope));
    return m;
}

namespace {

StateSummary::Quantiles quantiles(std::vector<double> v) {
    StateSummary::Quantiles q{};
    if (v.empty()) return q;
    std::sort(v.begin(), v.end());
    auto at = [&](double p) {
        const double idx = p * (static_cast<double>(v.size()) - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
        const std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
        const double frac = idx - static_cast<double>(lo);
        return v[lo] * (1 - frac) + v[hi] * frac;
    };
    q.min = v.front();
    q.q25 = at(0.25);
    q.median = at(0.5);
    q.q75 = at(0.75);
    q.max = v.back();
    return q;
}

}  // namespace

StateSummary aggregate(const AccessibilityMeasures& m) {
    StateSummary s;
    s.scope = m.scope;
    double wsum = 0;
    std::vector<double> cv, tv, gv;
    for (std::size_t i = 0; i < m.population.size(); ++i) {
        if (!m.applicable[i]) continue;
        const double w = m.population[i];
        wsum += w;
        s.coverage += w * m.coverage[i];
        s.travel_cost += w * m.travel_cost[i];
        s.congestion += w * m.congestion[i];
        cv.push_back(m.coverage[i]);
        tv.push_back(m.travel_cost[i]);
        gv.push_back(m.congestion[i]);
    }
    if (wsum > 0) {
        s.coverage /= wsum;
        s.travel_cost /= wsum;
        s.congestion /= wsum;
    }
    s.population = wsum;
    s.coverage_q = quantiles(cv);
    s.travel_cost_q = quantiles(tv);
    s.congestion_q = quantiles(gv);
    return s;
}

std::string measures_to_csv(const ScenarioInstance& s,
                            const std::vector<AccessibilityMeasures>& per_scope) {
    CsvWriter w({"tract_id", "scope", "coverage", "travel_cost", "congestion"});
    for (const auto& m : per_scope) {
        for (const auto& t : s.tracts) {
            w.begin_row();
            w.add(t.ext_id);
            w.add(std::string(to_string(m.scope)));
            if (m.applicable[t.idx]) {
                w.add(m.coverage[t.idx]);
                w.add(m.travel_cost[t.idx]);
                w.add(m.congestion[t.idx]);
            } else {
                w.add(std::string("nan"));
                w.add(std::string("nan"));
                w.add(std::string("nan"));
            }
        }
    }
    return w.str();
}

std::string measures_to_geojson(const ScenarioInstance& s,
                                const std::vector<AccessibilityMeasures>& per_scope) {
    std::ostringstream os;
    os << "{\"type\":\"FeatureCollection\",\"features\":[";
    for (int i = 0; i < s.n_tracts(); ++i) {
        if (i) os << ",";
        const auto& t = s.tracts[i];
        os << "{\"type\":\"Feature\",\"geometry\":{\"type\":\"Point\",\"coordinates\":["
           << format_double(t.centroid.lon) << "," << format_double(t.centroid.lat)
           << "]},\"properties\":{\"tract_id\":" << t.ext_id;
        for (const auto& m : per_scope) {
            const std::string tag = to_string(m.scope);
            if (m.applicable[i]) {
                os << ",\"coverage_" << tag << "\":" << format_double(m.coverage[i]);
                os << ",\"travel_cost_" << tag << "\":" << format_double(m.travel_cost[i]);
                os << ",\"congestion_" << tag << "\":" << format_double(m.congestion[i]);
            } else {
                os << ",\"coverage_" << tag << "\":null,\"travel_cost_" << tag
                   << "\":null,\"congestion_" << tag << "\":null";
            }
        }
        os << "}}";
    }
    os << "]}";
    return os.str();
}

}  // namespace spax
