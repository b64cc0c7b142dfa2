#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spax/geo.hpp"
#include "spax/synth.hpp"

namespace spax {

struct WeightedPoint {
    LatLon location;
    double weight = 1.0;
};

struct CovariateSurface {
    std::string name;
    std::vector<double> values;
    double mean = 0.0;  // standardization record
    double sd = 1.0;

    std::vector<double> standardized() const;
};

// Gaussian-kernel density of a weighted point set, in units of weight per
// square mile, evaluated on a local equirectangular projection. Integrates
// to the total weight over the plane.
CovariateSurface kde_density(const std::vector<WeightedPoint>& points,
                             const std::vector<LatLon>& eval_at, double bandwidth_miles);

// Silverman-style per-dimension bandwidth on projected coordinates.
double silverman_bandwidth(const std::vector<WeightedPoint>& points);

// Bed-weighted mean distance to hospitals within 25 miles; 25 when none.
double hospital_distance(const LatLon& tract, const std::vector<Hospital>& hospitals,
                         double cutoff_miles = 25.0);

CovariateSurface hospital_distance_surface(const std::vector<LatLon>& tracts,
                                           const std::vector<Hospital>& hospitals,
                                           double cutoff_miles = 25.0);

// Two-scale diversity ratio: entropy of group composition pooled over tracts
// within local_radius divided by the same within regional_radius (both
// centered at each tract, natural-log entropy normalized by ln(#groups)).
// 0/0 is defined as 1.
CovariateSurface diversity_ratio(const std::vector<LatLon>& tracts,
                                 const std::vector<std::vector<double>>& group_counts,
                                 double local_radius_miles = 2.0,
                                 double regional_radius_miles = 10.0);

enum class WeightScheme { knn, inverse_distance };

// Sparse symmetric spatial weights between tract centroids. knn weights are
// symmetrized (union of neighbor sets) before optional row-standardization.
class SpatialWeightMatrix {
  public:
    static SpatialWeightMatrix knn(const std::vector<LatLon>& sites, int k,
                                   bool row_standardize = true);
    static SpatialWeightMatrix inverse_distance(const std::vector<LatLon>& sites,
                                                double cutoff_miles, bool row_standardize = true);

    int size() const { return n_; }
    WeightScheme scheme() const { return scheme_; }
    bool row_standardized() const { return row_standardized_; }

    // CSR access
    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& weights() const { return w_; }

    double sum() const;  // S0 = sum of all weights

  private:
    int n_ = 0;
    WeightScheme scheme_ = WeightScheme::knn;
    bool row_standardized_ = false;
    std::vector<int> row_ptr_, col_idx_;
    std::vector<double> w_;
};

struct MoranResult {
    double I = 0.0;
    double expectation = 0.0;  // -1/(n-1)
    double variance = 0.0;     // randomization assumption
    double z = 0.0;
    double p_value = 1.0;  // two-sided normal approximation
};

MoranResult morans_i(const std::vector<double>& values, const SpatialWeightMatrix& w);

}  // namespace spax
