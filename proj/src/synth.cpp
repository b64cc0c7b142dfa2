#include "spax/synth.hpp"

#include <algorithm>
#include <cmath>

#include "spax/csv.hpp"
#include "spax/rng.hpp"
#include "spax/spatial.hpp"

namespace spax {

SynthProfile synth_profile_from_string(const std::string& s) {
    if (s == "uniform") return SynthProfile::uniform;
    if (s == "georgia_like" || s == "georgia-like") return SynthProfile::georgia_like;
    throw InputError("unknown profile: '" + s + "' (expected uniform|georgia-like)");
}

namespace {

struct City {
    double lat, lon, weight;
};

// Urban centers spread over a Georgia-sized bounding box, one dominant metro.
constexpr City kCities[] = {
    {33.75, -84.39, 0.16}, {33.47, -81.97, 0.09}, {32.46, -84.99, 0.08},
    {32.08, -81.10, 0.08}, {32.84, -83.63, 0.07}, {33.96, -83.38, 0.07},
    {31.58, -84.16, 0.07}, {30.83, -83.28, 0.07}, {34.26, -85.16, 0.06},
    {34.77, -84.97, 0.06}, {31.15, -81.49, 0.06}, {32.62, -83.60, 0.065},
    {33.08, -82.40, 0.065},
};
constexpr double kLatMin = 30.6, kLatMax = 34.9, kLonMin = -85.4, kLonMax = -81.0;

constexpr double kUniformBoxDeg = 0.25;  // small enough that all pairs fall under 25 mi

int pick_city(Rng& rng) {
    double total = 0;
    for (const auto& c : kCities) total += c.weight;
    double u = rng.uniform(0.0, total);
    for (std::size_t i = 0; i < std::size(kCities); ++i) {
        u -= kCities[i].weight;
        if (u <= 0) return static_cast<int>(i);
    }
    return static_cast<int>(std::size(kCities)) - 1;
}

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

double dist_to_nearest_city(const LatLon& p) {
    double best = 1e30;
    for (const auto& c : kCities)
        best = std::min(best, great_circle_miles(p, LatLon{c.lat, c.lon}));
    return best;
}

// County-level pam heterogeneity: one draw per 0.5-degree grid cell.
double county_pam(std::uint64_t seed, const LatLon& p) {
    const long cy = static_cast<long>(std::floor(p.lat / 0.5));
    const long cx = static_cast<long>(std::floor(p.lon / 0.5));
    const std::string label =
        "county:" + std::to_string(cy) + ":" + std::to_string(cx);
    Rng r = Rng::substream(seed, label);
    return clamp(r.normal(0.72, 0.15), 0.15, 1.0);
}

}  // namespace

SyntheticState generate_synthetic_state_full(std::uint64_t seed, int n_tracts, int n_physicians,
                                             SynthProfile profile,
                                             const SystemParameters& params) {
    if (n_tracts < 1 || n_physicians < 1)
        throw InputError("synthetic generator needs at least one tract and one physician");
    const bool ga = (profile == SynthProfile::georgia_like);

    SyntheticState out;
    ScenarioInstance& s = out.scenario;
    s.params = params;
    s.covariate_names = standard_covariate_names();

    // Tracts.
    Rng trng = Rng::substream(seed, "tracts");
    for (int i = 0; i < n_tracts; ++i) {
        CensusTract t;
        t.ext_id = 1000 + i;
        t.idx = i;
        bool urban = false;
        if (ga) {
            urban = trng.uniform01() < 0.55;
            if (urban) {
                const City& c = kCities[pick_city(trng)];
                t.centroid = {clamp(c.lat + trng.normal(0.0, 0.22), kLatMin, kLatMax),
                              clamp(c.lon + trng.normal(0.0, 0.22), kLonMin, kLonMax)};
            } else {
                t.centroid = {trng.uniform(kLatMin, kLatMax), trng.uniform(kLonMin, kLonMax)};
            }
            const double base = urban ? 7.2 : 6.6;  // log children
            const double pop = clamp(std::exp(trng.normal(base, 0.5)), 60.0, 9000.0);
            const double share = urban ? trng.uniform(0.30, 0.55) : trng.uniform(0.45, 0.70);
            t.pop_medicaid = std::round(pop * share);
            t.pop_other = std::round(pop * (1.0 - share));
            t.mob_other = trng.uniform(0.88, 0.99);
            t.mob_medicaid =
                clamp(t.mob_other - (urban ? trng.uniform(0.05, 0.30) : trng.uniform(0.15, 0.40)),
                      0.30, 1.0);
        } else {
            t.centroid = {33.0 + trng.uniform(0.0, kUniformBoxDeg),
                          -84.0 + trng.uniform(0.0, kUniformBoxDeg)};
            const double pop = std::round(trng.uniform(500.0, 2000.0));
            t.pop_medicaid = std::round(pop * 0.4);
            t.pop_other = pop - t.pop_medicaid;
            t.mob_other = 0.95;
            t.mob_medicaid = 0.75;
        }
        s.tracts.push_back(std::move(t));
    }

    // Physicians, clustered near cities under the georgia_like profile.
    Rng prng = Rng::substream(seed, "physicians");
    for (int j = 0; j < n_physicians; ++j) {
        Physician p;
        p.ext_id = 5000 + j;
        p.idx = j;
        if (ga) {
            if (prng.uniform01() < 0.97) {
                const City& c = kCities[pick_city(prng)];
                p.location = {clamp(c.lat + prng.normal(0.0, 0.10), kLatMin, kLatMax),
                              clamp(c.lon + prng.normal(0.0, 0.10), kLonMin, kLonMax)};
            } else {
                p.location = {prng.uniform(kLatMin, kLatMax), prng.uniform(kLonMin, kLonMax)};
            }
            p.pam = county_pam(seed, p.location);
        } else {
            p.location = {33.0 + prng.uniform(0.0, kUniformBoxDeg),
                          -84.0 + prng.uniform(0.0, kUniformBoxDeg)};
            p.pam = prng.uniform(0.5, 1.0);
        }
        const double u = prng.uniform01();
        p.setting = u < 0.10 ? PracticeSetting::public_hospital
                  : u < 0.30 ? PracticeSetting::community_clinic
                             : PracticeSetting::other;
        p.mc = default_mc(p.setting);
        // containing tract = nearest centroid
        int best = 0;
        double bd = 1e30;
        for (const auto& t : s.tracts) {
            const double d = great_circle_miles(p.location, t.centroid);
            if (d < bd) {
                bd = d;
                best = t.idx;
            }
        }
        p.tract_idx = best;
        s.tracts[best].local_physicians.push_back(j);
        s.physicians.push_back(std::move(p));
    }

    s.distances = build_distances_great_circle(s.tracts, s.physicians, params.mi_max);

    // Hospitals: one near each city plus a few rural ones.
    Rng hrng = Rng::substream(seed, "hospitals");
    if (ga) {
        int hid = 9000;
        for (const auto& c : kCities) {
            Hospital h;
            h.id = hid++;
            h.location = {c.lat + hrng.normal(0.0, 0.03), c.lon + hrng.normal(0.0, 0.03)};
            h.beds = std::round(clamp(hrng.normal(2200.0 * c.weight + 80.0, 40.0), 40.0, 900.0));
            out.hospitals.push_back(h);
        }
        for (int r = 0; r < 6; ++r) {
            Hospital h;
            h.id = hid++;
            h.location = {hrng.uniform(kLatMin, kLatMax), hrng.uniform(kLonMin, kLonMax)};
            h.beds = std::round(hrng.uniform(40.0, 140.0));
            out.hospitals.push_back(h);
        }
    } else {
        for (int r = 0; r < 3; ++r) {
            Hospital h;
            h.id = 9000 + r;
            h.location = {33.0 + hrng.uniform(0.0, kUniformBoxDeg),
                          -84.0 + hrng.uniform(0.0, kUniformBoxDeg)};
            h.beds = std::round(hrng.uniform(80.0, 400.0));
            out.hospitals.push_back(h);
        }
    }

    // Covariates (the seven regression factors).
    Rng crng = Rng::substream(seed, "covariates");
    std::vector<LatLon> centroids;
    std::vector<WeightedPoint> pop_points;
    for (const auto& t : s.tracts) {
        centroids.push_back(t.centroid);
        pop_points.push_back(WeightedPoint{t.centroid, t.pop_total()});
    }
    const CovariateSurface density =
        kde_density(pop_points, centroids, std::max(1.0, silverman_bandwidth(pop_points)));
    const CovariateSurface hospdist = hospital_distance_surface(centroids, out.hospitals);

    std::vector<double> nonwhite(s.tracts.size());
    for (std::size_t i = 0; i < s.tracts.size(); ++i) {
        const auto& t = s.tracts[i];
        const double dcity = ga ? dist_to_nearest_city(t.centroid) : 10.0;
        const double south = ga ? clamp((33.9 - t.centroid.lat) / 3.3, 0.0, 1.0) : 0.5;
        nonwhite[i] = clamp(0.18 + 0.38 * south + crng.normal(0.0, 0.10), 0.02, 0.98);
        auto& cov = s.tracts[i].covariates;
        cov.assign(s.covariate_names.size(), 0.0);
        cov[0] = clamp(28000.0 + 46000.0 * std::exp(-dcity / 25.0) + crng.normal(0.0, 7000.0),
                       12000.0, 150000.0);                                          // income
        cov[1] = clamp(0.16 + 0.42 * std::exp(-dcity / 30.0) + crng.normal(0.0, 0.07), 0.04,
                       0.95);                                                       // education
        cov[2] = clamp(0.045 + 0.10 * (1.0 - std::exp(-dcity / 40.0)) + crng.normal(0.0, 0.02),
                       0.01, 0.35);                                                 // unemployment
        cov[3] = nonwhite[i];
        cov[4] = density.values[i];
        cov[5] = hospdist.values[i];
    }
    std::vector<std::vector<double>> groups(s.tracts.size());
    for (std::size_t i = 0; i < s.tracts.size(); ++i) {
        const double pop = std::max(1.0, s.tracts[i].pop_total());
        groups[i] = {pop * nonwhite[i], pop * (1.0 - nonwhite[i])};
    }
    const CovariateSurface divr = diversity_ratio(centroids, groups, 2.0, 10.0);
    for (std::size_t i = 0; i < s.tracts.size(); ++i) s.tracts[i].covariates[6] = divr.values[i];

    s.validate();
    return out;
}

ScenarioInstance generate_synthetic_state(std::uint64_t seed, int n_tracts, int n_physicians,
                                          SynthProfile profile, const SystemParameters& params) {
    return generate_synthetic_state_full(seed, n_tracts, n_physicians, profile, params).scenario;
}

std::string hospitals_to_csv(const std::vector<Hospital>& hospitals) {
    CsvWriter w({"id", "lat", "lon", "beds"});
    for (const auto& h : hospitals) {
        w.begin_row();
        w.add(h.id);
        w.add(h.location.lat);
        w.add(h.location.lon);
        w.add(h.beds);
    }
    return w.str();
}

std::vector<Hospital> hospitals_from_csv(const std::string& text, const std::string& name) {
    CsvTable t = CsvTable::from_string(text, name);
    const int c_id = t.required_column("id");
    const int c_lat = t.required_column("lat");
    const int c_lon = t.required_column("lon");
    const int c_beds = t.required_column("beds");
    std::vector<Hospital> out;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        Hospital h;
        h.id = t.integer(r, c_id);
        h.location = {t.number(r, c_lat), t.number(r, c_lon)};
        h.beds = t.number(r, c_beds);
        if (!(h.beds >= 0)) throw InputError(t.where(r, c_beds) + ": negative bed count");
        out.push_back(h);
    }
    return out;
}

std::vector<Hospital> load_hospitals(const std::string& path) {
    return hospitals_from_csv(read_text_file(path), path);
}

}  // namespace spax
