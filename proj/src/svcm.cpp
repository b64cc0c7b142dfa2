#include "spax/svcm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "spax/csv.hpp"
#include "spax/rng.hpp"

namespace spax {

int BasisSpec::basis_size() const {
    if (kind == BasisKind::tensor_b_spline) {
        const int b = knots_per_dim + 2;
        return b * b;
    }
    return knots_per_dim * knots_per_dim;
}

// ---------------------------------------------------------------------------
// SpatialBasis
// ---------------------------------------------------------------------------

SpatialBasis::SpatialBasis(const BasisSpec& spec, const std::vector<LatLon>& sites)
    : spec_(spec) {
    if (sites.empty()) throw std::invalid_argument("basis: no sites");
    if (spec.knots_per_dim < 2) throw std::invalid_argument("basis: need >= 2 knots per dim");
    if (spec.basis_size() < 3) throw std::invalid_argument("basis: K must be >= 3");
    if (spec.penalty_order < 1 || spec.penalty_order > 3)
        throw std::invalid_argument("basis: penalty order must be 1..3");

    double lat0 = 0, lon0 = 0;
    for (const auto& s : sites) {
        lat0 += s.lat;
        lon0 += s.lon;
    }
    proj_ = LocalProjection(lat0 / static_cast<double>(sites.size()),
                            lon0 / static_cast<double>(sites.size()));

    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : sites) {
        const double x = proj_.x_miles(s), y = proj_.y_miles(s);
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    // Pad so every site lies strictly inside the knot box.
    const double padx = std::max(1e-6, 0.001 * (x1 - x0));
    const double pady = std::max(1e-6, 0.001 * (y1 - y0));
    x0_ = x0 - padx;
    x1_ = x1 + padx;
    y0_ = y0 - pady;
    y1_ = y1 + pady;

    if (spec.kind == BasisKind::tensor_b_spline) {
        per_dim_ = spec.knots_per_dim + 2;
    } else {
        per_dim_ = spec.knots_per_dim;
        const double hx = (x1_ - x0_) / std::max(1, per_dim_ - 1);
        const double hy = (y1_ - y0_) / std::max(1, per_dim_ - 1);
        for (int i = 0; i < per_dim_; ++i) centers_x_.push_back(x0_ + hx * i);
        for (int i = 0; i < per_dim_; ++i) centers_y_.push_back(y0_ + hy * i);
        rbf_scale_ = std::max(hx, hy);
        if (rbf_scale_ <= 0) rbf_scale_ = 1.0;
    }
    k_ = per_dim_ * per_dim_;

    design_.resize(static_cast<int>(sites.size()), k_);
    for (std::size_t i = 0; i < sites.size(); ++i)
        design_.row(static_cast<int>(i)) = evaluate(sites[i]);

    // Difference penalty on the coefficient grid, applied along each axis.
    const int b = per_dim_;
    Eigen::MatrixXd D = Eigen::MatrixXd::Identity(b, b);
    for (int ord = 0; ord < (spec.kind == BasisKind::tensor_b_spline ? spec.penalty_order : 0);
         ++ord) {
        const int rows = static_cast<int>(D.rows()) - 1;
        Eigen::MatrixXd D1 = Eigen::MatrixXd::Zero(rows, D.rows());
        for (int r = 0; r < rows; ++r) {
            D1(r, r) = -1;
            D1(r, r + 1) = 1;
        }
        D = D1 * D;
    }
    penalty_ = Eigen::MatrixXd::Zero(k_, k_);
    if (spec.kind == BasisKind::tensor_b_spline) {
        const Eigen::MatrixXd Pd = D.transpose() * D;
        for (int ix = 0; ix < b; ++ix)
            for (int jx = 0; jx < b; ++jx) {
                if (Pd(ix, jx) == 0.0) continue;
                for (int y = 0; y < b; ++y) {
                    penalty_(ix * b + y, jx * b + y) += Pd(ix, jx);  // along x
                    penalty_(y * b + ix, y * b + jx) += Pd(ix, jx);  // along y
                }
            }
    } else {
        penalty_ = Eigen::MatrixXd::Identity(k_, k_);  // ridge for radial bumps
    }
}

namespace {

// Cubic B-spline values at x for a clamped uniform knot grid over [x0, x1]
// with nseg segments. Returns the first of the four nonzero basis indices.
int cubic_bspline_row(double x, double x0, double x1, int nseg, double out[4]) {
    const double width = std::max(x1 - x0, 1e-9);
    const double h = width / nseg;
    double u = (x - x0) / h;
    int seg = static_cast<int>(std::floor(u));
    seg = std::max(0, std::min(seg, nseg - 1));

    // Clamped knot vector: four copies of each endpoint, uniform interior.
    auto knot = [&](int i) {
        // i indexes the full knot vector of length nseg + 7; basis count nseg+3.
        const int t = i - 3;  // interior grid position
        if (t <= 0) return x0;
        if (t >= nseg) return x1;
        return x0 + t * h;
    };
    // de Boor basis recursion (lj[r] = x - knot(span+1-j+r), rj[r] = knot(span+1+r) - x).
    const int span = seg + 3;
    double N[4];
    N[0] = 1.0;
    for (int j = 1; j <= 3; ++j) {
        double lj[4], rj[4];
        for (int r = 0; r < j; ++r) {
            lj[r] = x - knot(span + 1 - j + r);
            rj[r] = knot(span + 1 + r) - x;
        }
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double den = rj[r] + lj[r];
            const double tmp = den != 0.0 ? N[r] / den : 0.0;
            N[r] = saved + rj[r] * tmp;
            saved = lj[r] * tmp;
        }
        N[j] = saved;
    }
    for (int i = 0; i < 4; ++i) out[i] = N[i];
    return span - 3;
}

}  // namespace

Eigen::RowVectorXd SpatialBasis::eval_row(double x, double y) const {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(k_);
    x = std::clamp(x, x0_, x1_);
    y = std::clamp(y, y0_, y1_);
    if (spec_.kind == BasisKind::tensor_b_spline) {
        const int nseg = per_dim_ - 3;
        double bx[4], by[4];
        const int ix0 = cubic_bspline_row(x, x0_, x1_, nseg, bx);
        const int iy0 = cubic_bspline_row(y, y0_, y1_, nseg, by);
        for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c) row((ix0 + a) * per_dim_ + (iy0 + c)) = bx[a] * by[c];
    } else {
        const double s2 = 2.0 * rbf_scale_ * rbf_scale_;
        for (int a = 0; a < per_dim_; ++a)
            for (int c = 0; c < per_dim_; ++c) {
                const double dx = x - centers_x_[a], dy = y - centers_y_[c];
                row(a * per_dim_ + c) = std::exp(-(dx * dx + dy * dy) / s2);
            }
    }
    return row;
}

Eigen::RowVectorXd SpatialBasis::evaluate(const LatLon& s) const {
    return eval_row(proj_.x_miles(s), proj_.y_miles(s));
}

// ---------------------------------------------------------------------------
// Penalized smoother with a Demmler-Reinsch style decomposition so the whole
// lambda ladder is evaluated in O(K) per point.
// ---------------------------------------------------------------------------

namespace {

struct Smoother {
    Eigen::MatrixXd A;   // S x K design (covariate-scaled basis)
    Eigen::MatrixXd T;   // K x K: (C + dI)^{-T/2} U
    Eigen::VectorXd mu;  // generalized eigenvalues of the penalty
    Eigen::VectorXd g;   // squared column norms of T
    double delta = 0.0;
    double lambda_scale = 1.0;

    void build(const Eigen::MatrixXd& phi, const Eigen::VectorXd& x,
               const Eigen::MatrixXd& penalty) {
        A = x.asDiagonal() * phi;
        const int K = static_cast<int>(phi.cols());
        Eigen::MatrixXd C = A.transpose() * A;
        // The ridge keeps the spectral spread of the pencil small enough that
        // genuinely smooth data-supported modes are not misread as penalty
        // null modes (K often exceeds the sample size here).
        delta = 1e-6 * (1.0 + C.trace() / K);
        Eigen::LLT<Eigen::MatrixXd> llt;
        for (int attempt = 0;; ++attempt) {
            llt.compute(C + delta * Eigen::MatrixXd::Identity(K, K));
            if (llt.info() == Eigen::Success) break;
            if (attempt > 6) throw std::runtime_error("smoother: Cholesky failed");
            delta *= 100.0;
        }
        const Eigen::MatrixXd L = llt.matrixL();
        const Eigen::MatrixXd X = L.triangularView<Eigen::Lower>().solve(penalty);
        const Eigen::MatrixXd Xt = X.transpose();
        const Eigen::MatrixXd B0 = L.triangularView<Eigen::Lower>().solve(Xt);
        const Eigen::MatrixXd B = 0.5 * (B0 + B0.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
        if (es.info() != Eigen::Success) throw std::runtime_error("smoother: eigensolver failed");
        mu = es.eigenvalues().cwiseMax(0.0);
        T = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
        g.resize(K);
        for (int k = 0; k < K; ++k) g[k] = T.col(k).squaredNorm();
        lambda_scale = C.trace() / std::max(penalty.trace(), 1e-12);
        if (!(lambda_scale > 0) || !std::isfinite(lambda_scale)) lambda_scale = 1.0;
    }

    Eigen::VectorXd theta_for(const Eigen::VectorXd& b, double lambda) const {
        const Eigen::VectorXd w = T.transpose() * b;
        const Eigen::VectorXd f = (1.0 + lambda * mu.array()).inverse().matrix();
        return T * (f.asDiagonal() * w);
    }

    double df_for(double lambda) const {
        const Eigen::ArrayXd f = (1.0 + lambda * mu.array()).inverse();
        return f.sum() - delta * (g.array() * f).sum();
    }

    // GCV over the ladder; returns the chosen lambda and fills theta/df.
    // df_others charges the denominator for freedom already spent by the
    // other coefficient surfaces in the backfit, which keeps the total
    // effective df of the additive fit below the sample size.
    double gcv_select(const Eigen::VectorXd& b, double yty, double S, double df_others,
                      const std::vector<double>& ladder, Eigen::VectorXd& theta,
                      double& df) const {
        const Eigen::VectorXd w = T.transpose() * b;
        double best_gcv = 1e300, best_lambda = ladder.back();
        for (double lam : ladder) {
            const Eigen::ArrayXd f = (1.0 + lam * mu.array()).inverse();
            const double dfl = f.sum() - delta * (g.array() * f).sum();
            const double dof = S - df_others - dfl;
            if (dof < 1.0) continue;
            const Eigen::ArrayXd wf = w.array() * f;
            double rss = yty - 2.0 * (w.array() * wf).sum() + (wf * wf).sum();
            rss = std::max(rss, 0.0);
            const double gcv = S * rss / (dof * dof);
            if (gcv < best_gcv - 1e-12 * (1 + std::abs(best_gcv))) {
                best_gcv = gcv;
                best_lambda = lam;
            }
        }
        theta = theta_for(b, best_lambda);
        df = df_for(best_lambda);
        return best_lambda;
    }
};

std::vector<double> make_ladder(double scale, const std::vector<double>& user) {
    if (!user.empty()) return user;
    // The top of the ladder must reach effective df ~ penalty null space, or
    // the df budget can never be honored on small samples.
    std::vector<double> l;
    for (double e = -8.0; e <= 12.0 + 1e-9; e += 0.5) l.push_back(scale * std::pow(10.0, e));
    return l;
}

}  // namespace

// ---------------------------------------------------------------------------
// Backfitting
// ---------------------------------------------------------------------------

namespace {

struct BackfitEngine {
    std::vector<Smoother> smoothers;
    std::vector<std::vector<double>> ladders;
    int S = 0, R = 0;

    // One full backfitting pass. When frozen_lambda is null, GCV selects
    // lambda for each coefficient; otherwise the given values are reused.
    // Updates theta/fitted in place; returns max relative change of the total.
    double cycle(const Eigen::VectorXd& y, std::vector<Eigen::VectorXd>& theta,
                 std::vector<Eigen::VectorXd>& fitted, Eigen::VectorXd& total,
                 std::vector<double>* lambdas, std::vector<double>* dfs,
                 const std::vector<double>* frozen_lambda) const {
        const Eigen::VectorXd before = total;
        for (int r = 0; r < R; ++r) {
            const Eigen::VectorXd partial = y - total + fitted[r];
            const Eigen::VectorXd b = smoothers[r].A.transpose() * partial;
            Eigen::VectorXd th;
            double df = 0;
            if (frozen_lambda) {
                th = smoothers[r].theta_for(b, (*frozen_lambda)[r]);
                if (dfs) df = smoothers[r].df_for((*frozen_lambda)[r]);
            } else {
                double df_others = 0;
                if (dfs)
                    for (int q = 0; q < R; ++q)
                        if (q != r) df_others += (*dfs)[q];
                const double lam = smoothers[r].gcv_select(b, partial.squaredNorm(),
                                                           static_cast<double>(S), df_others,
                                                           ladders[r], th, df);
                if (lambdas) (*lambdas)[r] = lam;
            }
            if (dfs) (*dfs)[r] = df;
            const Eigen::VectorXd newfit = smoothers[r].A * th;
            total += newfit - fitted[r];
            fitted[r] = newfit;
            theta[r] = th;
        }
        const double scale = 1.0 + total.cwiseAbs().maxCoeff();
        return (total - before).cwiseAbs().maxCoeff() / scale;
    }
};

double pearson_abs(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double ma = a.mean(), mb = b.mean();
    const Eigen::ArrayXd da = a.array() - ma, db = b.array() - mb;
    const double sa = std::sqrt((da * da).sum()), sb = std::sqrt((db * db).sum());
    if (sa < 1e-14 || sb < 1e-14) return 0.0;
    return std::abs((da * db).sum() / (sa * sb));
}

}  // namespace

ModelFit fit_svcm(const std::vector<double>& y, const std::vector<std::string>& names,
                  const std::vector<std::vector<double>>& covariates,
                  const std::vector<LatLon>& sites, const FitOptions& options) {
    if (names.size() != covariates.size())
        throw std::invalid_argument("fit_svcm: names/covariates mismatch");
    for (const auto& c : covariates)
        if (c.size() != y.size()) throw std::invalid_argument("fit_svcm: covariate length mismatch");
    if (sites.size() != y.size()) throw std::invalid_argument("fit_svcm: sites length mismatch");

    ModelFit fit;
    // Listwise deletion of rows with missing response or covariates.
    for (std::size_t i = 0; i < y.size(); ++i) {
        bool ok = std::isfinite(y[i]);
        for (const auto& c : covariates) ok = ok && std::isfinite(c[i]);
        if (ok) fit.kept.push_back(static_cast<int>(i));
    }
    fit.dropped_rows = static_cast<int>(y.size() - fit.kept.size());
    const int S = static_cast<int>(fit.kept.size());
    if (S < 8) throw std::invalid_argument("fit_svcm: fewer than 8 usable sites");

    for (int i : fit.kept) fit.sites.push_back(sites[i]);
    fit.basis = std::make_shared<SpatialBasis>(options.basis, fit.sites);

    // Column 0 is the explicit intercept surface unless disabled.
    std::vector<std::string> cols;
    std::vector<Eigen::VectorXd> xcol;
    std::vector<double> cmean, csd;
    if (options.intercept) {
        cols.push_back("(intercept)");
        xcol.push_back(Eigen::VectorXd::Ones(S));
        cmean.push_back(0.0);
        csd.push_back(1.0);
    }
    for (std::size_t r = 0; r < covariates.size(); ++r) {
        Eigen::VectorXd x(S);
        for (int i = 0; i < S; ++i) x[i] = covariates[r][fit.kept[i]];
        double m = x.mean();
        double sd = S > 1 ? std::sqrt((x.array() - m).square().sum() / (S - 1)) : 0.0;
        if (sd > 1e-12) {
            x = (x.array() - m) / sd;
        } else {
            m = 0.0;
            sd = 1.0;
        }
        cols.push_back(names[r]);
        xcol.push_back(x);
        cmean.push_back(m);
        csd.push_back(sd);
    }
    const int R = static_cast<int>(cols.size());
    fit.covariate_names = cols;

    Eigen::VectorXd yv(S);
    for (int i = 0; i < S; ++i) yv[i] = y[fit.kept[i]];

    BackfitEngine eng;
    eng.S = S;
    eng.R = R;
    eng.smoothers.resize(R);
    eng.ladders.resize(R);
    for (int r = 0; r < R; ++r) {
        eng.smoothers[r].build(fit.basis->design(), xcol[r], fit.basis->penalty());
        eng.ladders[r] = make_ladder(eng.smoothers[r].lambda_scale, options.lambda_ladder);
    }

    std::vector<Eigen::VectorXd> theta(R, Eigen::VectorXd::Zero(fit.basis->size()));
    std::vector<Eigen::VectorXd> fitted(R, Eigen::VectorXd::Zero(S));
    Eigen::VectorXd total = Eigen::VectorXd::Zero(S);
    std::vector<double> lambdas(R, 0.0), dfs(R, 0.0);

    // GCV reselects lambda early on; after a settling period the smoothing
    // parameters are frozen so the cycle map is a fixed linear operator.
    const int freeze_after = 15;
    fit.converged = false;
    for (int c = 0; c < options.max_cycles; ++c) {
        const bool frozen = c >= freeze_after;
        const double delta = eng.cycle(yv, theta, fitted, total, &lambdas, &dfs,
                                       frozen ? &lambdas : nullptr);
        fit.trace.push_back(delta);
        fit.cycles = c + 1;
        if (delta < options.tol) {
            fit.converged = true;
            break;
        }
    }

    const Eigen::VectorXd resid = yv - total;
    fit.fitted.assign(total.data(), total.data() + S);
    fit.residuals.assign(resid.data(), resid.data() + S);
    fit.rss = resid.squaredNorm();
    fit.edf = std::accumulate(dfs.begin(), dfs.end(), 0.0);
    fit.aic = S * std::log(std::max(fit.rss, 1e-30) / S) + 2.0 * fit.edf;
    fit.resid_response_corr = pearson_abs(resid, yv);

    fit.surfaces.resize(R);
    fit.xcols = xcol;
    for (int r = 0; r < R; ++r) {
        CoefficientSurface& cs = fit.surfaces[r];
        cs.covariate = cols[r];
        cs.theta = theta[r];
        cs.lambda = lambdas[r];
        cs.edf = dfs[r];
        cs.cov_mean = cmean[r];
        cs.cov_sd = csd[r];
        const Eigen::VectorXd est = fit.basis->design() * theta[r];
        cs.estimate.assign(est.data(), est.data() + S);
    }

    if (S >= 3) {
        double var = (resid.array() - resid.mean()).square().sum();
        if (var > 1e-20) {
            fit.resid_moran = morans_i(fit.residuals, SpatialWeightMatrix::knn(fit.sites, 8));
        } else {
            fit.resid_moran = MoranResult{};  // perfect fit: no spatial signal left
            fit.resid_moran.expectation = -1.0 / (S - 1);
        }
    }
    return fit;
}

double ModelFit::beta_at(int r, const LatLon& s) const {
    return basis->evaluate(s).dot(surfaces[r].theta);
}

// ---------------------------------------------------------------------------
// Wild bootstrap simultaneous bands (all surfaces in one bootstrap pass).
// ---------------------------------------------------------------------------

namespace {

void bands_for_all(ModelFit& fit, const BandOptions& opt) {
    if (opt.n_boot < 100) throw std::invalid_argument("simultaneous_band: n_boot must be >= 100");
    const int S = static_cast<int>(fit.sites.size());
    const int R = static_cast<int>(fit.surfaces.size());

    // Rebuild the frozen-lambda smoothing operators.
    BackfitEngine eng;
    eng.S = S;
    eng.R = R;
    eng.smoothers.resize(R);
    eng.ladders.resize(R);
    std::vector<double> lambdas(R);
    for (int r = 0; r < R; ++r) {
        // Recover the covariate column from the stored design: A = diag(x) Phi,
        // so x is kept separately in the surfaces' standardization; instead we
        // stash the columns on the fit during fit_svcm.
        eng.smoothers[r].build(fit.basis->design(), fit.xcols[r], fit.basis->penalty());
        lambdas[r] = fit.surfaces[r].lambda;
    }

    Eigen::VectorXd fitted_v = Eigen::Map<const Eigen::VectorXd>(fit.fitted.data(), S);
    Eigen::VectorXd resid_v = Eigen::Map<const Eigen::VectorXd>(fit.residuals.data(), S);

    // beta*_r(s_i) per replicate.
    std::vector<Eigen::MatrixXd> boot(R, Eigen::MatrixXd::Zero(opt.n_boot, S));

    auto run_rep = [&](int b) {
        Rng rng = Rng::substream(opt.seed, "wildboot:" + std::to_string(b));
        Eigen::VectorXd ystar(S);
        for (int i = 0; i < S; ++i) ystar[i] = fitted_v[i] + rng.sign() * resid_v[i];

        std::vector<Eigen::VectorXd> theta(R);
        std::vector<Eigen::VectorXd> fitted(R);
        Eigen::VectorXd total = Eigen::VectorXd::Zero(S);
        for (int r = 0; r < R; ++r) {
            theta[r] = fit.surfaces[r].theta;
            fitted[r] = eng.smoothers[r].A * theta[r];
            total += fitted[r];
        }
        for (int c = 0; c < 100; ++c) {
            const double delta = eng.cycle(ystar, theta, fitted, total, nullptr, nullptr, &lambdas);
            if (delta < 1e-7) break;
        }
        for (int r = 0; r < R; ++r) {
            const Eigen::VectorXd est = fit.basis->design() * theta[r];
            boot[r].row(b) = est.transpose();
        }
    };

    int hw = opt.n_threads > 0 ? opt.n_threads
                               : static_cast<int>(std::thread::hardware_concurrency());
    hw = std::max(1, std::min(hw, opt.n_boot));
    if (hw == 1) {
        for (int b = 0; b < opt.n_boot; ++b) run_rep(b);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < hw; ++t)
            pool.emplace_back([&, t] {
                for (int b = t; b < opt.n_boot; b += hw) run_rep(b);
            });
        for (auto& th : pool) th.join();
    }

    for (int r = 0; r < R; ++r) {
        CoefficientSurface& cs = fit.surfaces[r];
        cs.alpha = opt.alpha;
        cs.se.assign(S, 0.0);
        cs.lower.assign(S, 0.0);
        cs.upper.assign(S, 0.0);
        const Eigen::RowVectorXd mean = boot[r].colwise().mean();
        for (int i = 0; i < S; ++i) {
            const double ss = (boot[r].col(i).array() - mean[i]).square().sum();
            cs.se[i] = std::sqrt(ss / std::max(1, opt.n_boot - 1));
        }
        // sup-t statistic per replicate
        std::vector<double> m(opt.n_boot, 0.0);
        for (int b = 0; b < opt.n_boot; ++b) {
            double worst = 0;
            for (int i = 0; i < S; ++i) {
                const double num = std::abs(boot[r](b, i) - cs.estimate[i]);
                if (cs.se[i] > 1e-14) worst = std::max(worst, num / cs.se[i]);
                else if (num > 1e-12) worst = std::max(worst, 1e300);
            }
            m[b] = worst;
        }
        std::sort(m.begin(), m.end());
        int idx = static_cast<int>(std::ceil((1.0 - opt.alpha) * opt.n_boot)) - 1;
        idx = std::clamp(idx, 0, opt.n_boot - 1);
        cs.band_quantile = m[idx];
        for (int i = 0; i < S; ++i) {
            const double half = cs.band_quantile * cs.se[i];
            cs.lower[i] = cs.estimate[i] - half;
            cs.upper[i] = cs.estimate[i] + half;
        }
    }
}

}  // namespace

void simultaneous_band(ModelFit& fit, int r, const BandOptions& options) {
    if (r < 0 || r >= static_cast<int>(fit.surfaces.size()))
        throw std::invalid_argument("simultaneous_band: bad surface index");
    bands_for_all(fit, options);
}

ShapeClassification classify_shape(const CoefficientSurface& s) {
    if (s.lower.empty()) throw std::invalid_argument("classify_shape: band not computed");
    ShapeClassification c;
    double maxlo = -1e300, minup = 1e300;
    for (std::size_t i = 0; i < s.lower.size(); ++i) {
        maxlo = std::max(maxlo, s.lower[i]);
        minup = std::min(minup, s.upper[i]);
    }
    c.feasible_lo = maxlo;
    c.feasible_hi = minup;
    if (maxlo <= minup + 1e-12) {
        c.verdict = ShapeVerdict::constant;
        c.significant = (maxlo > 0.0) || (minup < 0.0);
        c.sign = maxlo > 0.0 ? 1 : (minup < 0.0 ? -1 : 0);
    } else {
        c.verdict = ShapeVerdict::nonconstant;
        c.significant = true;  // no constant plane fits, so in particular not zero
        c.sign = 0;
    }
    return c;
}

SignificanceMap significance_map(const CoefficientSurface& s) {
    SignificanceMap m;
    m.sign.resize(s.lower.size(), 0);
    for (std::size_t i = 0; i < s.lower.size(); ++i) {
        if (s.lower[i] > 0) {
            m.sign[i] = 1;
            ++m.n_positive;
        } else if (s.upper[i] < 0) {
            m.sign[i] = -1;
            ++m.n_negative;
        }
    }
    m.shape = classify_shape(s);
    return m;
}

SignificanceMap difference_test(const std::vector<double>& medicaid_measure,
                                const std::vector<double>& other_measure,
                                const std::vector<LatLon>& sites, int n_boot, double alpha,
                                std::uint64_t seed, const BasisSpec& basis, ModelFit* fit_out) {
    if (medicaid_measure.size() != other_measure.size() || medicaid_measure.size() != sites.size())
        throw std::invalid_argument("difference_test: mismatched tracts");
    if (n_boot < 200) throw std::invalid_argument("difference_test: n_boot must be >= 200");
    std::vector<double> z(medicaid_measure.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = medicaid_measure[i] - other_measure[i];

    FitOptions fo;
    fo.basis = basis;
    fo.intercept = true;
    ModelFit fit = fit_svcm(z, {}, {}, sites, fo);
    simultaneous_band(fit, 0, BandOptions{alpha, n_boot, seed, 0});
    SignificanceMap m = significance_map(fit.surfaces[0]);
    if (fit_out) *fit_out = std::move(fit);
    return m;
}

SignificanceMap location_test(const std::vector<double>& y, double mu0,
                              const std::vector<double>& pop_weights,
                              const std::vector<LatLon>& sites, int n_boot, double alpha,
                              std::uint64_t seed, const BasisSpec& basis, ModelFit* fit_out) {
    if (std::isnan(mu0)) {
        // Default threshold: population-weighted average of y.
        double num = 0, den = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double w = pop_weights.empty() ? 1.0 : pop_weights[i];
            if (!std::isfinite(y[i])) continue;
            num += w * y[i];
            den += w;
        }
        mu0 = den > 0 ? num / den : 0.0;
    }
    std::vector<double> shifted(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) shifted[i] = y[i] - mu0;
    std::vector<double> zeros(y.size(), 0.0);
    return difference_test(shifted, zeros, sites, n_boot, alpha, seed, basis, fit_out);
}

// ---------------------------------------------------------------------------
// Model evaluation across candidate covariate subsets.
// ---------------------------------------------------------------------------

ModelComparison evaluate_models(const std::vector<std::vector<int>>& candidates,
                                const std::vector<double>& y,
                                const std::vector<std::string>& covariate_names,
                                const std::vector<std::vector<double>>& covariates,
                                const std::vector<LatLon>& sites, const SpatialWeightMatrix& w,
                                const EvaluateOptions& options) {
    if (candidates.empty()) throw std::invalid_argument("evaluate_models: no candidates");
    for (const auto& c : candidates)
        if (static_cast<int>(c.size()) < options.min_subset_size)
            throw std::invalid_argument("evaluate_models: each candidate needs >= " +
                                        std::to_string(options.min_subset_size) + " covariates");

    ModelComparison cmp;
    for (const auto& subset : candidates) {
        ModelComparisonRow row;
        row.subset = subset;
        std::vector<std::string> names;
        std::vector<std::vector<double>> X;
        for (int idx : subset) {
            names.push_back(covariate_names[idx]);
            X.push_back(covariates[idx]);
        }
        ModelFit fit = fit_svcm(y, names, X, sites, options.fit);
        bands_for_all(fit, options.band);
        row.aic = fit.aic;
        row.resid_corr = fit.resid_response_corr;
        // Residual Moran's I on the caller's weight matrix when sizes align
        // (listwise deletion can shrink the site set).
        if (static_cast<int>(fit.residuals.size()) == w.size()) {
            double var = 0, mean = 0;
            for (double v : fit.residuals) mean += v;
            mean /= static_cast<double>(fit.residuals.size());
            for (double v : fit.residuals) var += (v - mean) * (v - mean);
            if (var > 1e-20) {
                const MoranResult mr = morans_i(fit.residuals, w);
                row.moran_i = mr.I;
                row.moran_z = mr.z;
            }
        } else {
            row.moran_i = fit.resid_moran.I;
            row.moran_z = fit.resid_moran.z;
        }
        const int first_cov = options.fit.intercept ? 1 : 0;
        for (std::size_t r = first_cov; r < fit.surfaces.size(); ++r) {
            const SignificanceMap m = significance_map(fit.surfaces[r]);
            row.shapes.push_back(m.shape);
            row.significant_anywhere.push_back(m.n_positive + m.n_negative > 0 ||
                                               (m.shape.verdict == ShapeVerdict::constant &&
                                                m.shape.significant));
        }
        cmp.rows.push_back(std::move(row));
    }

    // The first candidate (by convention the full model) is the baseline.
    const ModelComparisonRow& base = cmp.rows.front();
    cmp.rows.front().retained = true;
    for (std::size_t i = 1; i < cmp.rows.size(); ++i) {
        auto& row = cmp.rows[i];
        row.improves_all = row.aic < base.aic && row.resid_corr < base.resid_corr &&
                           std::abs(row.moran_i) < std::abs(base.moran_i);
        row.retained = row.improves_all;
    }

    // Consistency of shape/significance/range across retained models.
    std::vector<int> all_covs;
    for (const auto& row : cmp.rows)
        for (int idx : row.subset)
            if (std::find(all_covs.begin(), all_covs.end(), idx) == all_covs.end())
                all_covs.push_back(idx);
    for (int idx : all_covs) {
        CovariateConsistency cc;
        cc.name = covariate_names[idx];
        bool first = true;
        double lo = 1e300, hi = -1e300;
        for (const auto& row : cmp.rows) {
            if (!row.retained) continue;
            const auto it = std::find(row.subset.begin(), row.subset.end(), idx);
            if (it == row.subset.end()) continue;
            const int pos = static_cast<int>(it - row.subset.begin());
            const auto& shape = row.shapes[pos];
            const bool sig = row.significant_anywhere[pos];
            if (first) {
                cc.shape = shape.verdict;
                cc.significant = sig;
                first = false;
            } else {
                cc.consistent_shape = cc.consistent_shape && (shape.verdict == cc.shape);
                cc.consistent_significance = cc.consistent_significance && (sig == cc.significant);
            }
            if (shape.verdict == ShapeVerdict::constant) {
                lo = std::min(lo, 0.5 * (shape.feasible_lo + shape.feasible_hi));
                hi = std::max(hi, 0.5 * (shape.feasible_lo + shape.feasible_hi));
            }
            ++cc.models_in;
        }
        if (cc.models_in > 0) {
            cc.const_lo = lo <= hi ? lo : 0.0;
            cc.const_hi = lo <= hi ? hi : 0.0;
            cmp.consistency.push_back(cc);
        }
    }
    return cmp;
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

std::string fit_to_json(const ModelFit& fit) {
    nlohmann::json j;
    j["response"] = fit.response_name;
    j["covariates"] = fit.covariate_names;
    j["dropped_rows"] = fit.dropped_rows;
    j["converged"] = fit.converged;
    j["cycles"] = fit.cycles;
    j["trace"] = fit.trace;
    j["rss"] = fit.rss;
    j["edf"] = fit.edf;
    j["aic"] = fit.aic;
    j["resid_response_corr"] = fit.resid_response_corr;
    j["resid_moran"] = {{"I", fit.resid_moran.I},
                        {"expectation", fit.resid_moran.expectation},
                        {"z", fit.resid_moran.z},
                        {"p", fit.resid_moran.p_value}};
    nlohmann::json surf = nlohmann::json::array();
    for (const auto& s : fit.surfaces) {
        surf.push_back({{"covariate", s.covariate},
                        {"lambda", s.lambda},
                        {"edf", s.edf},
                        {"alpha", s.alpha},
                        {"band_quantile", s.band_quantile}});
    }
    j["surfaces"] = surf;
    return j.dump(2);
}

std::string coefficients_to_csv(const ModelFit& fit, const std::vector<std::int64_t>& tract_ids) {
    CsvWriter w({"tract_id", "covariate", "estimate", "lower", "upper", "sign"});
    for (const auto& s : fit.surfaces) {
        SignificanceMap m;
        const bool banded = !s.lower.empty();
        if (banded) m = significance_map(s);
        for (std::size_t i = 0; i < fit.kept.size(); ++i) {
            w.begin_row();
            w.add(tract_ids[fit.kept[i]]);
            w.add(s.covariate);
            w.add(s.estimate[i]);
            w.add(banded ? s.lower[i] : std::nan(""));
            w.add(banded ? s.upper[i] : std::nan(""));
            w.add(static_cast<std::int64_t>(banded ? m.sign[i] : 0));
        }
    }
    return w.str();
}

std::string significance_to_geojson(const ModelFit& fit,
                                    const std::vector<std::int64_t>& tract_ids) {
    std::string out = "{\"type\":\"FeatureCollection\",\"features\":[";
    for (std::size_t i = 0; i < fit.kept.size(); ++i) {
        if (i) out += ",";
        out += "{\"type\":\"Feature\",\"geometry\":{\"type\":\"Point\",\"coordinates\":[" +
               format_double(fit.sites[i].lon) + "," + format_double(fit.sites[i].lat) +
               "]},\"properties\":{\"tract_id\":" + std::to_string(tract_ids[fit.kept[i]]);
        for (const auto& s : fit.surfaces) {
            if (s.lower.empty()) continue;
            int sign = 0;
            if (s.lower[i] > 0) sign = 1;
            else if (s.upper[i] < 0) sign = -1;
            out += ",\"" + s.covariate + "\":" + std::to_string(sign);
        }
        out += "}}";
    }
    out += "]}";
    return out;
}

}  // namespace spax
