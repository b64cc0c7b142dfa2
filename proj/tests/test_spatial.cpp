#include <doctest.h>

#include <cmath>
#include <map>

#include "spax/rng.hpp"
#include "spax/spatial.hpp"

using namespace spax;

TEST_CASE("gaussian kernel falls off as expected") {
    // Value at the point vs at 3 bandwidths: ratio exp(-4.5).
    const double h = 2.0;
    std::vector<WeightedPoint> pts = {{{33.0, -84.0}, 1.0}};
    LocalProjection proj(33.0, -84.0);
    const double off_lat = 33.0 + 3.0 * h / kMilesPerDegree;
    const auto at = kde_density(pts, {{33.0, -84.0}, {off_lat, -84.0}}, h);
    CHECK(at.values[1] / at.values[0] == doctest::Approx(std::exp(-4.5)).epsilon(1e-6));
}

TEST_CASE("two symmetric points contribute equally at the midpoint") {
    std::vector<WeightedPoint> pts = {{{33.0, -84.1}, 1.0}, {{33.0, -83.9}, 1.0}};
    const auto d2 = kde_density(pts, {{33.0, -84.0}}, 3.0);
    const auto d1 = kde_density({pts[0]}, {{33.0, -84.0}}, 3.0);
    CHECK(d2.values[0] == doctest::Approx(2.0 * d1.values[0]).epsilon(1e-9));
}

TEST_CASE("kde integrates to the total weight within 2%") {
    Rng rng(6);
    std::vector<WeightedPoint> pts;
    double total = 0;
    for (int i = 0; i < 100; ++i) {
        const double w = rng.uniform(0.5, 3.0);
        pts.push_back({{33.0 + rng.normal(0, 0.08), -84.0 + rng.normal(0, 0.08)}, w});
        total += w;
    }
    const double h = 4.0;
    // Quadrature over a generous bounding grid (flat projection).
    LocalProjection proj(33.0, -84.0);
    const double span = 60.0;  // miles each side
    const int n = 160;
    const double cell = (2 * span / n);
    std::vector<LatLon> grid;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            grid.push_back({33.0 + (-span + (iy + 0.5) * cell) / kMilesPerDegree,
                            -84.0 + (-span + (ix + 0.5) * cell) / proj.mi_per_deg_lon});
    const auto dens = kde_density(pts, grid, h);
    double integral = 0;
    for (double v : dens.values) integral += v * cell * cell;
    CHECK(integral == doctest::Approx(total).epsilon(0.02));
}

TEST_CASE("kde is linear in the point set") {
    std::vector<WeightedPoint> a = {{{33.0, -84.0}, 2.0}, {{33.1, -84.0}, 1.0}};
    std::vector<WeightedPoint> b = {{{32.9, -84.1}, 3.0}};
    std::vector<WeightedPoint> both = a;
    both.insert(both.end(), b.begin(), b.end());
    std::vector<LatLon> eval = {{33.0, -84.0}, {32.95, -84.05}, {33.2, -83.9}};
    const auto da = kde_density(a, eval, 3.0);
    const auto db = kde_density(b, eval, 3.0);
    const auto dc = kde_density(both, eval, 3.0);
    for (std::size_t i = 0; i < eval.size(); ++i)
        CHECK(dc.values[i] == doctest::Approx(da.values[i] + db.values[i]).epsilon(1e-12));
}

TEST_CASE("kde rejects empty inputs; silverman bandwidth is positive") {
    CHECK_THROWS(kde_density({}, {{33, -84}}, 1.0));
    CHECK_THROWS(kde_density({{{33, -84}, 1.0}}, {{33, -84}}, 0.0));
    Rng rng(3);
    std::vector<WeightedPoint> pts;
    for (int i = 0; i < 50; ++i)
        pts.push_back({{33.0 + rng.normal(0, 0.1), -84.0 + rng.normal(0, 0.1)}, 1.0});
    CHECK(silverman_bandwidth(pts) > 0.0);
}

TEST_CASE("hospital distance: singleton, weighted mean, sentinel") {
    const LatLon tract{33.0, -84.0};
    auto at_miles = [&](double mi) {
        return LatLon{33.0 + mi / kMilesPerDegree, -84.0};
    };
    SUBCASE("one hospital at 4 miles") {
        std::vector<Hospital> hs = {{1, at_miles(4.0), 200.0}};
        CHECK(hospital_distance(tract, hs) == doctest::Approx(4.0).epsilon(1e-6));
    }
    SUBCASE("bed-weighted mean: (2*100 + 10*300)/400 = 8") {
        std::vector<Hospital> hs = {{1, at_miles(2.0), 100.0}, {2, at_miles(10.0), 300.0}};
        CHECK(hospital_distance(tract, hs) == doctest::Approx(8.0).epsilon(1e-6));
    }
    SUBCASE("no hospital within 25 miles: sentinel 25") {
        std::vector<Hospital> hs = {{1, at_miles(40.0), 500.0}};
        CHECK(hospital_distance(tract, hs) == doctest::Approx(25.0));
        CHECK(hospital_distance(tract, {}) == doctest::Approx(25.0));
    }
}

namespace {

// Ring of tracts around a center, for pooled-entropy fixtures.
std::vector<LatLon> ring_sites(int n_ring, double radius_miles) {
    std::vector<LatLon> sites = {{33.0, -84.0}};
    for (int i = 0; i < n_ring; ++i) {
        const double ang = 2.0 * kPi * i / n_ring;
        sites.push_back({33.0 + radius_miles * std::sin(ang) / kMilesPerDegree,
                         -84.0 + radius_miles * std::cos(ang) /
                                     (kMilesPerDegree * std::cos(33.0 * kDegToRad))});
    }
    return sites;
}

}  // namespace

TEST_CASE("diversity ratio fixtures") {
    SUBCASE("identical composition everywhere gives ratio 1") {
        const auto sites = ring_sites(6, 5.0);
        std::vector<std::vector<double>> counts(sites.size(), {60.0, 40.0});
        const auto r = diversity_ratio(sites, counts, 2.0, 10.0);
        for (double v : r.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("single-group local pocket inside a mixed region gives ratio 0") {
        auto sites = ring_sites(6, 5.0);
        std::vector<std::vector<double>> counts(sites.size(), {50.0, 50.0});
        counts[0] = {100.0, 0.0};  // the center tract: one group only
        const auto r = diversity_ratio(sites, counts, 2.0, 10.0);
        CHECK(r.values[0] == doctest::Approx(0.0));
    }
    SUBCASE("50/50 local pocket inside a 90/10 region: ratio 1/H(0.9,0.1) ~ 2.13") {
        // Center pools only itself at the local scale; the ring pools to
        // 900/100 including the center.
        auto sites = ring_sites(8, 6.0);
        std::vector<std::vector<double>> counts(sites.size(), {106.25, 6.25});
        counts[0] = {50.0, 50.0};
        const auto r = diversity_ratio(sites, counts, 2.0, 10.0);
        const double h_region = -(0.9 * std::log(0.9) + 0.1 * std::log(0.1));
        CHECK(r.values[0] == doctest::Approx(std::log(2.0) / h_region).epsilon(1e-9));
    }
    SUBCASE("invariant under group relabeling") {
        const auto sites = ring_sites(6, 5.0);
        Rng rng(8);
        std::vector<std::vector<double>> counts, swapped;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const double a = rng.uniform(10, 100), b = rng.uniform(10, 100);
            counts.push_back({a, b});
            swapped.push_back({b, a});
        }
        const auto r1 = diversity_ratio(sites, counts, 2.0, 10.0);
        const auto r2 = diversity_ratio(sites, swapped, 2.0, 10.0);
        for (std::size_t i = 0; i < sites.size(); ++i)
            CHECK(r1.values[i] == doctest::Approx(r2.values[i]).epsilon(1e-12));
    }
    SUBCASE("radius preconditions") {
        const auto sites = ring_sites(4, 5.0);
        std::vector<std::vector<double>> counts(sites.size(), {1.0, 1.0});
        CHECK_THROWS(diversity_ratio(sites, counts, 10.0, 2.0));
        CHECK_THROWS(diversity_ratio(sites, counts, 0.0, 2.0));
    }
}

namespace {

std::vector<LatLon> lattice(int nx, int ny, double spacing_miles = 3.0) {
    std::vector<LatLon> sites;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            sites.push_back({33.0 + i * spacing_miles / kMilesPerDegree,
                             -84.0 + j * spacing_miles /
                                         (kMilesPerDegree * std::cos(33.0 * kDegToRad))});
    return sites;
}

}  // namespace

TEST_CASE("knn weights: no self-loops, symmetric before standardization, rows nonempty") {
    const auto sites = lattice(5, 5);
    const auto w = SpatialWeightMatrix::knn(sites, 4, false);
    const auto& rp = w.row_ptr();
    const auto& ci = w.col_idx();
    std::map<std::pair<int, int>, double> lut;
    for (int i = 0; i < w.size(); ++i) {
        CHECK(rp[i + 1] > rp[i]);  // at least one neighbor
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            CHECK(ci[p] != i);
            lut[{i, ci[p]}] = w.weights()[p];
        }
    }
    for (const auto& [key, v] : lut) {
        auto it = lut.find({key.second, key.first});
        REQUIRE(it != lut.end());
        CHECK(it->second == doctest::Approx(v));
    }
    const auto ws = SpatialWeightMatrix::knn(sites, 4, true);
    double rowsum = 0;
    for (int p = ws.row_ptr()[0]; p < ws.row_ptr()[1]; ++p) rowsum += ws.weights()[p];
    CHECK(rowsum == doctest::Approx(1.0));
}

TEST_CASE("moran expectation is -1/(n-1) and clustered halves score high") {
    const auto sites = lattice(6, 6);
    std::vector<double> values(sites.size());
    for (std::size_t k = 0; k < sites.size(); ++k) values[k] = (k < sites.size() / 2) ? 1.0 : -1.0;
    const auto w = SpatialWeightMatrix::knn(sites, 4);
    const auto r = morans_i(values, w);
    CHECK(r.expectation == doctest::Approx(-1.0 / 35.0));
    CHECK(r.I > 0.5);
    CHECK(r.z > 2.0);
    CHECK(r.p_value < 0.05);
}

TEST_CASE("moran is invariant to affine transforms of the values") {
    const auto sites = lattice(5, 4);
    Rng rng(10);
    std::vector<double> v(sites.size());
    for (auto& x : v) x = rng.normal();
    const auto w = SpatialWeightMatrix::knn(sites, 3);
    const auto r1 = morans_i(v, w);
    std::vector<double> v2(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) v2[i] = 5.0 - 3.0 * v[i];
    const auto r2 = morans_i(v2, w);
    CHECK(r1.I == doctest::Approx(r2.I).epsilon(1e-10));
}

TEST_CASE("moran rejects zero variance and tiny n") {
    const auto sites = lattice(3, 3);
    const auto w = SpatialWeightMatrix::knn(sites, 2);
    CHECK_THROWS(morans_i(std::vector<double>(sites.size(), 1.0), w));
    const auto two = lattice(2, 1);
    CHECK_THROWS(morans_i({1.0, 2.0}, SpatialWeightMatrix::knn(two, 1)));
}

TEST_CASE("iid gaussian fields keep the mean of I near its expectation (light)") {
    const auto sites = lattice(10, 10);
    const auto w = SpatialWeightMatrix::knn(sites, 8);
    Rng rng(123);
    double sum = 0, sum2 = 0;
    const int reps = 120;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<double> v(sites.size());
        for (auto& x : v) x = rng.normal();
        const double I = morans_i(v, w).I;
        sum += I;
        sum2 += I * I;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
    CHECK(std::abs(mean - (-1.0 / 99.0)) <= 4.0 * se);
}

TEST_CASE("inverse-distance weights respect the cutoff") {
    const auto sites = lattice(4, 4, 5.0);
    const auto w = SpatialWeightMatrix::inverse_distance(sites, 7.0, false);
    const auto& rp = w.row_ptr();
    for (int i = 0; i < w.size(); ++i)
        for (int p = rp[i]; p < rp[i + 1]; ++p)
            CHECK(great_circle_miles(sites[i], sites[w.col_idx()[p]]) <= 7.0 + 1e-9);
}
