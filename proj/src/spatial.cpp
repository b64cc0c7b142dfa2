#include "spax/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace spax {

std::vector<double> CovariateSurface::standardized() const {
    std::vector<double> out(values.size());
    const double s = sd > 1e-300 ? sd : 1.0;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / s;
    return out;
}

static void fill_standardization(CovariateSurface& c) {
    double m = 0;
    for (double v : c.values) m += v;
    m /= static_cast<double>(c.values.size());
    double ss = 0;
    for (double v : c.values) ss += (v - m) * (v - m);
    c.mean = m;
    c.sd = c.values.size() > 1 ? std::sqrt(ss / (static_cast<double>(c.values.size()) - 1)) : 0.0;
}

double silverman_bandwidth(const std::vector<WeightedPoint>& points) {
    if (points.empty()) throw std::invalid_argument("kde: empty point set");
    double lat0 = 0, lon0 = 0, wsum = 0;
    for (const auto& p : points) {
        lat0 += p.location.lat * p.weight;
        lon0 += p.location.lon * p.weight;
        wsum += p.weight;
    }
    if (wsum <= 0) throw std::invalid_argument("kde: total weight must be positive");
    LocalProjection proj(lat0 / wsum, lon0 / wsum);
    double sxx = 0, syy = 0, w2 = 0;
    for (const auto& p : points) {
        const double x = proj.x_miles(p.location);
        const double y = proj.y_miles(p.location);
        sxx += p.weight * x * x;
        syy += p.weight * y * y;
        w2 += p.weight * p.weight;
    }
    double mx = 0, my = 0;
    for (const auto& p : points) {
        mx += p.weight * proj.x_miles(p.location);
        my += p.weight * proj.y_miles(p.location);
    }
    mx /= wsum;
    my /= wsum;
    const double vx = std::max(0.0, sxx / wsum - mx * mx);
    const double vy = std::max(0.0, syy / wsum - my * my);
    const double sigma = std::sqrt(0.5 * (vx + vy));
    const double neff = wsum * wsum / std::max(w2, 1e-300);  // effective sample size
    const double h = sigma * std::pow(neff, -1.0 / 6.0);
    return std::max(h, 0.5);
}

CovariateSurface kde_density(const std::vector<WeightedPoint>& points,
                             const std::vector<LatLon>& eval_at, double bandwidth_miles) {
    if (points.empty()) throw std::invalid_argument("kde: empty point set");
    if (!(bandwidth_miles > 0)) throw std::invalid_argument("kde: bandwidth must be positive");
    // The projection is anchored to the evaluation sites so that densities of
    // point-set unions add up exactly.
    double lat0 = 0, lon0 = 0;
    for (const auto& e : eval_at) {
        lat0 += e.lat;
        lon0 += e.lon;
    }
    const std::size_t ne = std::max<std::size_t>(1, eval_at.size());
    LocalProjection proj(lat0 / static_cast<double>(ne), lon0 / static_cast<double>(ne));

    std::vector<double> px(points.size()), py(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        px[k] = proj.x_miles(points[k].location);
        py[k] = proj.y_miles(points[k].location);
    }
    const double h2 = bandwidth_miles * bandwidth_miles;
    const double norm = 1.0 / (2.0 * kPi * h2);

    CovariateSurface out;
    out.name = "cov_density";
    out.values.resize(eval_at.size());
    for (std::size_t i = 0; i < eval_at.size(); ++i) {
        const double ex = proj.x_miles(eval_at[i]);
        const double ey = proj.y_miles(eval_at[i]);
        double acc = 0;
        for (std::size_t k = 0; k < points.size(); ++k) {
            const double dx = ex - px[k];
            const double dy = ey - py[k];
            acc += points[k].weight * std::exp(-(dx * dx + dy * dy) / (2.0 * h2));
        }
        out.values[i] = acc * norm;
    }
    fill_standardization(out);
    return out;
}

double hospital_distance(const LatLon& tract, const std::vector<Hospital>& hospitals,
                         double cutoff_miles) {
    double num = 0, den = 0;
    for (const auto& h : hospitals) {
        const double d = great_circle_miles(tract, h.location);
        if (d <= cutoff_miles) {
            num += d * h.beds;
            den += h.beds;
        }
    }
    if (den <= 0) return cutoff_miles;  // no hospital in range: MUA-style sentinel
    return num / den;
}

CovariateSurface hospital_distance_surface(const std::vector<LatLon>& tracts,
                                           const std::vector<Hospital>& hospitals,
                                           double cutoff_miles) {
    CovariateSurface out;
    out.name = "cov_hospdist";
    out.values.reserve(tracts.size());
    for (const auto& t : tracts) out.values.push_back(hospital_distance(t, hospitals, cutoff_miles));
    fill_standardization(out);
    return out;
}

namespace {

double pooled_entropy(const std::vector<double>& counts) {
    double total = 0;
    for (double c : counts) total += c;
    if (total <= 0) return 0.0;
    double h = 0;
    for (double c : counts) {
        if (c <= 0) continue;
        const double p = c / total;
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace

CovariateSurface diversity_ratio(const std::vector<LatLon>& tracts,
                                 const std::vector<std::vector<double>>& group_counts,
                                 double local_radius_miles, double regional_radius_miles) {
    if (!(regional_radius_miles > local_radius_miles) || !(local_radius_miles > 0))
        throw std::invalid_argument("diversity_ratio: need regional_radius > local_radius > 0");
    if (tracts.size() != group_counts.size())
        throw std::invalid_argument("diversity_ratio: tracts/group_counts size mismatch");
    const std::size_t n = tracts.size();
    const std::size_t g = n ? group_counts[0].size() : 0;

    CovariateSurface out;
    out.name = "cov_divratio";
    out.values.resize(n);
    std::vector<double> local(g), regional(g);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(local.begin(), local.end(), 0.0);
        std::fill(regional.begin(), regional.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double d = great_circle_miles(tracts[i], tracts[j]);
            if (d <= regional_radius_miles) {
                for (std::size_t k = 0; k < g; ++k) regional[k] += group_counts[j][k];
                if (d <= local_radius_miles)
                    for (std::size_t k = 0; k < g; ++k) local[k] += group_counts[j][k];
            }
        }
        const double hl = pooled_entropy(local);
        const double hr = pooled_entropy(regional);
        // ln(G) normalization cancels in the ratio; 0/0 := 1. The regional pool
        // contains the local pool, so hr = 0 forces hl = 0.
        out.values[i] = hr > 1e-300 ? hl / hr : 1.0;
    }
    fill_standardization(out);
    return out;
}

SpatialWeightMatrix SpatialWeightMatrix::knn(const std::vector<LatLon>& sites, int k,
                                             bool row_standardize) {
    const int n = static_cast<int>(sites.size());
    if (n < 2) throw std::invalid_argument("weights: need at least 2 sites");
    if (k < 1) throw std::invalid_argument("weights: k must be >= 1");
    k = std::min(k, n - 1);

    // Union-symmetrized k-nearest neighbors.
    std::vector<std::vector<int>> nbr(n);
    std::vector<std::pair<double, int>> dist;
    for (int i = 0; i < n; ++i) {
        dist.clear();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            dist.emplace_back(great_circle_miles(sites[i], sites[j]), j);
        }
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        for (int t = 0; t < k; ++t) nbr[i].push_back(dist[t].second);
    }
    std::vector<std::map<int, double>> w(n);
    for (int i = 0; i < n; ++i) {
        for (int j : nbr[i]) {
            w[i][j] = 1.0;
            w[j][i] = 1.0;
        }
    }

    SpatialWeightMatrix m;
    m.n_ = n;
    m.scheme_ = WeightScheme::knn;
    m.row_standardized_ = row_standardize;
    m.row_ptr_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        double rowsum = 0;
        for (const auto& [j, v] : w[i]) rowsum += v;
        for (const auto& [j, v] : w[i]) {
            m.col_idx_.push_back(j);
            m.w_.push_back(row_standardize && rowsum > 0 ? v / rowsum : v);
        }
        m.row_ptr_[i + 1] = static_cast<int>(m.col_idx_.size());
    }
    return m;
}

SpatialWeightMatrix SpatialWeightMatrix::inverse_distance(const std::vector<LatLon>& sites,
                                                          double cutoff_miles,
                                                          bool row_standardize) {
    const int n = static_cast<int>(sites.size());
    if (n < 2) throw std::invalid_argument("weights: need at least 2 sites");
    if (!(cutoff_miles > 0)) throw std::invalid_argument("weights: cutoff must be positive");

    SpatialWeightMatrix m;
    m.n_ = n;
    m.scheme_ = WeightScheme::inverse_distance;
    m.row_standardized_ = row_standardize;
    m.row_ptr_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = great_circle_miles(sites[i], sites[j]);
            if (d <= cutoff_miles) row.emplace_back(j, 1.0 / std::max(d, 1e-6));
        }
        double rowsum = 0;
        for (const auto& [j, v] : row) rowsum += v;
        for (const auto& [j, v] : row) {
            m.col_idx_.push_back(j);
            m.w_.push_back(row_standardize && rowsum > 0 ? v / rowsum : v);
        }
        m.row_ptr_[i + 1] = static_cast<int>(m.col_idx_.size());
    }
    return m;
}

double SpatialWeightMatrix::sum() const {
    return std::accumulate(w_.begin(), w_.end(), 0.0);
}

MoranResult morans_i(const std::vector<double>& values, const SpatialWeightMatrix& w) {
    const int n = static_cast<int>(values.size());
    if (n != w.size()) throw std::invalid_argument("morans_i: size mismatch");
    if (n < 3) throw std::invalid_argument("morans_i: need n >= 3");

    double mean = 0;
    for (double v : values) mean += v;
    mean /= n;
    std::vector<double> z(values.size());
    double z2 = 0, z4 = 0;
    for (int i = 0; i < n; ++i) {
        z[i] = values[i] - mean;
        z2 += z[i] * z[i];
        z4 += z[i] * z[i] * z[i] * z[i];
    }
    if (z2 <= 1e-300) throw std::invalid_argument("morans_i: zero-variance values");

    const auto& rp = w.row_ptr();
    const auto& ci = w.col_idx();
    const auto& wv = w.weights();

    double s0 = 0, cross = 0;
    std::map<std::pair<int, int>, double> lut;
    std::vector<double> rowsum(n, 0.0), colsum(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            const int j = ci[p];
            const double v = wv[p];
            s0 += v;
            cross += v * z[i] * z[j];
            rowsum[i] += v;
            colsum[j] += v;
            lut[{i, j}] = v;
        }
    }
    if (s0 <= 0) throw std::invalid_argument("morans_i: empty weight matrix");

    MoranResult r;
    r.I = (n / s0) * (cross / z2);
    r.expectation = -1.0 / (n - 1);

    double s1 = 0;
    for (const auto& [key, v] : lut) {
        const auto it = lut.find({key.second, key.first});
        const double vji = it == lut.end() ? 0.0 : it->second;
        s1 += (v + vji) * (v + vji);
    }
    s1 *= 0.5;
    double s2 = 0;
    for (int i = 0; i < n; ++i) s2 += (rowsum[i] + colsum[i]) * (rowsum[i] + colsum[i]);

    // Randomization-assumption variance (Cliff & Ord).
    const double nn = n;
    const double b2 = nn * z4 / (z2 * z2);
    const double num = nn * ((nn * nn - 3 * nn + 3) * s1 - nn * s2 + 3 * s0 * s0) -
                       b2 * ((nn * nn - nn) * s1 - 2 * nn * s2 + 6 * s0 * s0);
    const double den = (nn - 1) * (nn - 2) * (nn - 3) * s0 * s0;
    r.variance = std::max(0.0, num / den - r.expectation * r.expectation);
    if (r.variance > 0) {
        r.z = (r.I - r.expectation) / std::sqrt(r.variance);
        r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
    } else {
        r.z = 0;
        r.p_value = 1.0;
    }
    return r;
}

}  // namespace spax
