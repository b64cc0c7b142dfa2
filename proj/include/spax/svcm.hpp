#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spax/geo.hpp"
#include "spax/spatial.hpp"

namespace spax {

enum class BasisKind { tensor_b_spline, thin_plate_radial };

struct BasisSpec {
    BasisKind kind = BasisKind::tensor_b_spline;
    int knots_per_dim = 8;  // 8 knots -> 10 cubic B-splines per dim -> K = 100
    int penalty_order = 2;  // difference order on the coefficient grid

    int basis_size() const;
};

// Spatial basis evaluated on a padded bounding box of the sites. Evaluation
// outside the box clamps to its boundary.
class SpatialBasis {
  public:
    SpatialBasis(const BasisSpec& spec, const std::vector<LatLon>& sites);

    int size() const { return k_; }
    Eigen::RowVectorXd evaluate(const LatLon& s) const;
    const Eigen::MatrixXd& design() const { return design_; }      // sites x K
    const Eigen::MatrixXd& penalty() const { return penalty_; }    // K x K

  private:
    BasisSpec spec_;
    int k_ = 0;
    int per_dim_ = 0;
    double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;  // knot box (projected miles)
    LocalProjection proj_;
    Eigen::MatrixXd design_;
    Eigen::MatrixXd penalty_;
    std::vector<double> centers_x_, centers_y_;  // thin-plate centers
    double rbf_scale_ = 1.0;

    Eigen::RowVectorXd eval_row(double x, double y) const;
    friend class PenalizedSmoother;
};

// One coefficient surface beta_r(s) = sum_k theta_rk phi_k(s) with its
// smoothing parameter and (after simultaneous_band) a sup-t band at the sites.
struct CoefficientSurface {
    std::string covariate;
    Eigen::VectorXd theta;
    double lambda = 0.0;
    double edf = 0.0;
    double cov_mean = 0.0;  // standardization record of the covariate
    double cov_sd = 1.0;
    std::vector<double> estimate;  // at the fitted sites
    std::vector<double> se;        // bootstrap pointwise SE (empty until banded)
    std::vector<double> lower, upper;
    double band_quantile = 0.0;
    double alpha = 0.0;
};

struct FitOptions {
    BasisSpec basis;
    double tol = 1e-6;     // max relative change of fitted values
    int max_cycles = 200;
    bool intercept = true;  // explicit beta_0(s) surface
    std::vector<double> lambda_ladder;  // empty = automatic log ladder
};

struct ModelFit {
    std::string response_name;
    std::vector<std::string> covariate_names;  // includes "(intercept)" when present
    std::vector<CoefficientSurface> surfaces;
    std::vector<double> fitted;
    std::vector<double> residuals;
    double rss = 0.0;
    double edf = 0.0;   // sum of per-surface effective df
    double aic = 0.0;   // S ln(RSS/S) + 2 edf
    double resid_response_corr = 0.0;
    MoranResult resid_moran;
    bool converged = false;
    int cycles = 0;
    std::vector<double> trace;  // per-cycle max relative change
    int dropped_rows = 0;       // listwise deletion count
    std::vector<int> kept;      // site indices kept after deletion

    // evaluator: beta_r at an arbitrary location
    double beta_at(int r, const LatLon& s) const;
    std::shared_ptr<const SpatialBasis> basis;
    std::vector<LatLon> sites;              // kept sites
    std::vector<Eigen::VectorXd> xcols;     // standardized covariate columns (kept rows)
};

// Cyclic backfitting of penalized-spline coefficient surfaces; smoothing
// parameter per coefficient chosen by GCV within each cycle.
ModelFit fit_svcm(const std::vector<double>& y, const std::vector<std::string>& names,
                  const std::vector<std::vector<double>>& covariates,
                  const std::vector<LatLon>& sites, const FitOptions& options = {});

struct BandOptions {
    double alpha = 0.05;
    int n_boot = 500;
    std::uint64_t seed = 1;
    int n_threads = 0;  // 0 = hardware
};

// Wild (Rademacher) bootstrap sup-t simultaneous band for surface r,
// refitting with the smoothing parameters frozen at the base fit.
// Fills se/lower/upper of fit.surfaces[r]. n_boot < 100 is rejected.
void simultaneous_band(ModelFit& fit, int r, const BandOptions& options);

enum class ShapeVerdict { constant, nonconstant };

struct ShapeClassification {
    ShapeVerdict verdict = ShapeVerdict::constant;
    bool significant = false;  // for constant: feasible interval excludes 0
    int sign = 0;              // -1/0/+1 for constant-significant
    double feasible_lo = 0.0, feasible_hi = 0.0;
};

// Constant iff some horizontal plane lies within the band everywhere.
ShapeClassification classify_shape(const CoefficientSurface& s);

struct SignificanceMap {
    std::vector<int> sign;  // per tract: -1, 0, +1 (band excludes 0)
    ShapeClassification shape;
    int n_positive = 0, n_negative = 0;
};

SignificanceMap significance_map(const CoefficientSurface& s);

// H0: Z = M - O = 0 across the domain. Intercept-only fit of Z with a
// simultaneous band; flags tracts where the band excludes zero.
SignificanceMap difference_test(const std::vector<double>& medicaid_measure,
                                const std::vector<double>& other_measure,
                                const std::vector<LatLon>& sites, int n_boot, double alpha,
                                std::uint64_t seed, const BasisSpec& basis = {},
                                ModelFit* fit_out = nullptr);

// Same machinery applied to Y - mu0. Pass NaN mu0 to use the
// population-weighted average of y.
SignificanceMap location_test(const std::vector<double>& y, double mu0,
                              const std::vector<double>& pop_weights,
                              const std::vector<LatLon>& sites, int n_boot, double alpha,
                              std::uint64_t seed, const BasisSpec& basis = {},
                              ModelFit* fit_out = nullptr);

struct ModelComparisonRow {
    std::vector<int> subset;  // covariate indices
    double aic = 0.0;
    double resid_corr = 0.0;
    double moran_i = 0.0;
    double moran_z = 0.0;
    bool improves_all = false;  // vs the first candidate on all three criteria
    bool retained = false;
    // per covariate in subset: shape/significance/constant-range
    std::vector<ShapeClassification> shapes;
    std::vector<bool> significant_anywhere;  // band excludes 0 somewhere
};

struct CovariateConsistency {
    std::string name;
    int models_in = 0;
    bool consistent_shape = true;
    bool consistent_significance = true;
    ShapeVerdict shape = ShapeVerdict::constant;
    bool significant = false;
    double const_lo = 0.0, const_hi = 0.0;  // range of constant estimates
};

struct ModelComparison {
    std::vector<ModelComparisonRow> rows;
    std::vector<CovariateConsistency> consistency;  // across retained models
};

struct EvaluateOptions {
    FitOptions fit;
    BandOptions band;
    int min_subset_size = 4;
};

// Fits each candidate covariate subset, reports AIC / residual-response
// correlation / residual Moran's I, flags subsets improving on all three vs
// the first candidate, and summarizes per-covariate consistency across
// retained models.
ModelComparison evaluate_models(const std::vector<std::vector<int>>& candidates,
                                const std::vector<double>& y,
                                const std::vector<std::string>& covariate_names,
                                const std::vector<std::vector<double>>& covariates,
                                const std::vector<LatLon>& sites,
                                const SpatialWeightMatrix& w, const EvaluateOptions& options);

std::string fit_to_json(const ModelFit& fit);
std::string coefficients_to_csv(const ModelFit& fit, const std::vector<std::int64_t>& tract_ids);
std::string significance_to_geojson(const ModelFit& fit,
                                    const std::vector<std::int64_t>& tract_ids);

}  // namespace spax
