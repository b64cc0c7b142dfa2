// Bounded-variable revised primal simplex.
//
// The LP is held in computational form  min c'x  s.t.  Ax - z = 0,
// lo <= (x, z) <= up, where z are one logical variable per row. The basis is
// refactorized with Eigen::SparseLU and updated between refactorizations with
// product-form eta vectors. Geometric equilibration scaling is applied before
// the solve, Dantzig pricing over rotating partial-pricing sections drives
// iterations, and a Bland's-rule fallback engages after a long degenerate
// streak. Ties are broken by lowest index throughout, so a given instance
// always takes the same pivot path.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "spax/lp.hpp"

namespace spax::lp {
namespace {

constexpr double kZeroTol = 1e-12;

struct Eta {
    int slot;
    double pivot;
    std::vector<std::pair<int, double>> other;  // (slot, value), excludes pivot slot
};

class Simplex {
  public:
    Simplex(const LinearProgram& lp, const LpOptions& opt) : lp_(lp), opt_(opt) {
        n_ = lp.num_cols();
        m_ = lp.num_rows();
        nv_ = n_ + m_;
    }

    LpSolution run() {
        build_scaled();
        if (!init_basis()) return fail("initial basis factorization failed");

        const long max_iter =
            opt_.max_iterations > 0 ? opt_.max_iterations : 50000L + 40L * m_ + 2L * n_;
        long degen_streak = 0;
        bool bland = false;
        int small_pivot_retries = 0;

        while (true) {
            if (iterations_ >= max_iter) return finish(LpStatus::iteration_limit);

            const bool phase2 = (max_violation() <= 10.0 * feas_tol_);
            set_phase_costs(phase2);

            Eigen::VectorXd cb(m_);
            for (int k = 0; k < m_; ++k) cb[k] = phase_cost(head_[k]);
            Eigen::VectorXd y = btran(cb);

            const int q = price(y, bland);
            if (q < 0) {
                if (phase2) return finish(LpStatus::optimal);
                return finish_infeasible(y);
            }
            const int sigma = entering_direction(q, reduced_cost(q, y));

            // Basic step direction for a unit move of the entering variable.
            Eigen::VectorXd w = ftran(column_dense(q));

            // Ratio test, pass 1: smallest blocking step.
            double t_min = inf_;
            for (int k = 0; k < m_; ++k) {
                const double wk = w[k];
                if (std::abs(wk) <= 1e-11) continue;
                double t = block_step(head_[k], -sigma * wk);
                if (t < t_min) t_min = t;
            }
            const double flip_t = range_of(q);

            if (flip_t <= t_min) {
                if (flip_t >= inf_) {
                    if (phase2) return finish(LpStatus::unbounded);
                    return fail("phase-1 direction unbounded");
                }
                apply_step(w, sigma, flip_t);
                xval_[q] = (sigma > 0) ? up_[q] : lo_[q];
                vstat_[q] = (sigma > 0) ? VarStatus::at_upper : VarStatus::at_lower;
                ++iterations_;
                continue;
            }
            if (t_min >= inf_) {
                if (phase2) return finish(LpStatus::unbounded);
                return fail("phase-1 ratio test found no blocking variable");
            }

            // Pass 2: among near-ties pick the largest pivot, then lowest slot.
            const double t_window = t_min + 1e-9 * (1.0 + t_min);
            int best_slot = -1;
            double best_wk = 0.0;
            double best_bound = 0.0;
            for (int k = 0; k < m_; ++k) {
                const double wk = w[k];
                if (std::abs(wk) <= 1e-11) continue;
                double bound;
                const double t = block_step_bound(head_[k], -sigma * wk, bound);
                if (t > t_window) continue;
                if (best_slot < 0 || std::abs(wk) > std::abs(best_wk) + kZeroTol) {
                    best_slot = k;
                    best_wk = wk;
                    best_bound = bound;
                }
            }
            if (best_slot < 0) return fail("ratio test lost its blocking variable");

            // A pivot too small to update through safely: refactorize and retry.
            if (std::abs(best_wk) < 1e-8 && !etas_.empty() && small_pivot_retries < 3) {
                ++small_pivot_retries;
                if (!factorize()) return fail("refactorization failed");
                compute_basics();
                continue;
            }
            small_pivot_retries = 0;

            const double t = t_min;
            apply_step(w, sigma, t);

            const int leaving = head_[best_slot];
            xval_[leaving] = best_bound;
            vstat_[leaving] =
                (best_bound == lo_[leaving]) ? VarStatus::at_lower : VarStatus::at_upper;

            xval_[q] = nonbasic_value(q) + sigma * t;
            head_[best_slot] = q;
            vstat_[q] = VarStatus::basic;

            Eta e;
            e.slot = best_slot;
            e.pivot = w[best_slot];
            for (int k = 0; k < m_; ++k)
                if (k != best_slot && std::abs(w[k]) > kZeroTol) e.other.emplace_back(k, w[k]);
            eta_nnz_ += e.other.size() + 1;
            etas_.push_back(std::move(e));
            ++iterations_;

            if (t <= 1e-10) {
                ++degen_streak;
            } else if (t > 1e-7) {
                degen_streak = 0;
                bland = false;
            }
            if (degen_streak > 500 + m_ / 4) bland = true;

            if (static_cast<int>(etas_.size()) >= opt_.refactor_interval ||
                eta_nnz_ > 20u * static_cast<std::size_t>(m_)) {
                if (!factorize()) return fail("refactorization failed");
                compute_basics();
            }
        }
    }

  private:
    // ---- scaled problem ------------------------------------------------------
    void build_scaled() {
        row_scale_.assign(m_, 1.0);
        col_scale_.assign(n_, 1.0);
        if (opt_.scale && !lp_.entries.empty()) {
            for (int round = 0; round < 3; ++round) {
                std::vector<double> rmax(m_, 0.0), rmin(m_, inf_);
                for (const auto& e : lp_.entries) {
                    const double a = std::abs(e.val) * row_scale_[e.row] * col_scale_[e.col];
                    if (a == 0.0) continue;
                    rmax[e.row] = std::max(rmax[e.row], a);
                    rmin[e.row] = std::min(rmin[e.row], a);
                }
                for (int i = 0; i < m_; ++i)
                    if (rmax[i] > 0.0)
                        row_scale_[i] = pow2_round(row_scale_[i] / std::sqrt(rmax[i] * rmin[i]));
                std::vector<double> cmax(n_, 0.0), cmin(n_, inf_);
                for (const auto& e : lp_.entries) {
                    const double a = std::abs(e.val) * row_scale_[e.row] * col_scale_[e.col];
                    if (a == 0.0) continue;
                    cmax[e.col] = std::max(cmax[e.col], a);
                    cmin[e.col] = std::min(cmin[e.col], a);
                }
                for (int j = 0; j < n_; ++j)
                    if (cmax[j] > 0.0)
                        col_scale_[j] = pow2_round(col_scale_[j] / std::sqrt(cmax[j] * cmin[j]));
            }
        }

        // CSC of the scaled structural matrix.
        colptr_.assign(n_ + 1, 0);
        for (const auto& e : lp_.entries) ++colptr_[e.col + 1];
        for (int j = 0; j < n_; ++j) colptr_[j + 1] += colptr_[j];
        rowidx_.resize(lp_.entries.size());
        aval_.resize(lp_.entries.size());
        {
            std::vector<int> fill(colptr_.begin(), colptr_.end() - 1);
            for (const auto& e : lp_.entries) {
                const int p = fill[e.col]++;
                rowidx_[p] = e.row;
                aval_[p] = e.val * row_scale_[e.row] * col_scale_[e.col];
            }
        }

        lo_.resize(nv_);
        up_.resize(nv_);
        cost_.assign(nv_, 0.0);
        for (int j = 0; j < n_; ++j) {
            lo_[j] = lp_.col_lo[j] / col_scale_[j];
            up_[j] = lp_.col_up[j] / col_scale_[j];
            cost_[j] = lp_.cost[j] * col_scale_[j];
        }
        for (int i = 0; i < m_; ++i) {
            lo_[n_ + i] = lp_.row_lo[i] * row_scale_[i];
            up_[n_ + i] = lp_.row_up[i] * row_scale_[i];
        }
        cost_scale_ = 0.0;
        for (int j = 0; j < n_; ++j) cost_scale_ = std::max(cost_scale_, std::abs(cost_[j]));
        if (cost_scale_ <= 0.0) cost_scale_ = 1.0;
        for (int j = 0; j < n_; ++j) cost_[j] /= cost_scale_;

        feas_tol_ = std::max(opt_.tol, 1e-12);
        opt_tol_ = 2.0 * feas_tol_;
        xval_.assign(nv_, 0.0);
        p1cost_.assign(nv_, 0.0);
    }

    static double pow2_round(double s) {
        if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
        return std::exp2(std::round(std::log2(s)));
    }

    // ---- basis management ------------------------------------------------------
    void set_cold_basis() {
        vstat_.assign(nv_, VarStatus::at_lower);
        head_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            head_[i] = n_ + i;
            vstat_[n_ + i] = VarStatus::basic;
        }
        for (int j = 0; j < n_; ++j) {
            vstat_[j] = nonbasic_status_nearest_zero(j);
            xval_[j] = nonbasic_value(j);
        }
    }

    VarStatus nonbasic_status_nearest_zero(int v) const {
        const bool lf = lo_[v] > -inf_, uf = up_[v] < inf_;
        if (lf && uf)
            return std::abs(lo_[v]) <= std::abs(up_[v]) ? VarStatus::at_lower : VarStatus::at_upper;
        if (lf) return VarStatus::at_lower;
        if (uf) return VarStatus::at_upper;
        return VarStatus::free_nb;
    }

    double nonbasic_value(int v) const {
        switch (vstat_[v]) {
            case VarStatus::at_lower: return lo_[v];
            case VarStatus::at_upper: return up_[v];
            default: return 0.0;
        }
    }

    bool init_basis() {
        if (opt_.warm_start && static_cast<int>(opt_.warm_start->size()) == nv_) {
            const auto& ws = *opt_.warm_start;
            int nb = 0;
            for (int v = 0; v < nv_; ++v)
                if (ws[v] == VarStatus::basic) ++nb;
            if (nb == m_) {
                vstat_ = ws;
                head_.clear();
                head_.reserve(m_);
                for (int v = 0; v < nv_; ++v)
                    if (vstat_[v] == VarStatus::basic) head_.push_back(v);
                for (int v = 0; v < nv_; ++v) {
                    if (vstat_[v] == VarStatus::basic) continue;
                    if (vstat_[v] == VarStatus::at_lower && lo_[v] <= -inf_)
                        vstat_[v] = nonbasic_status_nearest_zero(v);
                    if (vstat_[v] == VarStatus::at_upper && up_[v] >= inf_)
                        vstat_[v] = nonbasic_status_nearest_zero(v);
                    xval_[v] = nonbasic_value(v);
                }
                if (factorize()) {
                    compute_basics();
                    return true;
                }
            }
        }
        set_cold_basis();
        if (!factorize()) return false;
        compute_basics();
        return true;
    }

    bool factorize() {
        Eigen::SparseMatrix<double> B(m_, m_);
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(m_) * 4);
        for (int k = 0; k < m_; ++k) {
            const int v = head_[k];
            if (v < n_) {
                for (int p = colptr_[v]; p < colptr_[v + 1]; ++p)
                    trips.emplace_back(rowidx_[p], k, aval_[p]);
            } else {
                trips.emplace_back(v - n_, k, -1.0);
            }
        }
        B.setFromTriplets(trips.begin(), trips.end());
        lu_.compute(B);
        if (lu_.info() != Eigen::Success) return false;
        etas_.clear();
        eta_nnz_ = 0;
        factorized_ = true;
        return true;
    }

    // Recompute all basic values from the nonbasic assignment.
    void compute_basics() {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
        for (int v = 0; v < nv_; ++v) {
            if (vstat_[v] == VarStatus::basic) continue;
            const double xv = xval_[v];
            if (xv == 0.0) continue;
            if (v < n_) {
                for (int p = colptr_[v]; p < colptr_[v + 1]; ++p) rhs[rowidx_[p]] -= aval_[p] * xv;
            } else {
                rhs[v - n_] += xv;
            }
        }
        Eigen::VectorXd xb = ftran(rhs);
        for (int k = 0; k < m_; ++k) xval_[head_[k]] = xb[k];
    }

    Eigen::VectorXd ftran(Eigen::VectorXd v) const {
        Eigen::VectorXd r = lu_.solve(v);
        for (const auto& e : etas_) {
            double t = r[e.slot];
            if (t == 0.0) continue;
            t /= e.pivot;
            for (const auto& [k, val] : e.other) r[k] -= val * t;
            r[e.slot] = t;
        }
        return r;
    }

    Eigen::VectorXd btran(Eigen::VectorXd v) {  // non-const: SparseLU::adjoint() requires it
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = v[it->slot];
            for (const auto& [k, val] : it->other) s -= val * v[k];
            v[it->slot] = s / it->pivot;
        }
        return lu_.adjoint().solve(v);
    }

    Eigen::VectorXd column_dense(int v) const {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(m_);
        if (v < n_) {
            for (int p = colptr_[v]; p < colptr_[v + 1]; ++p) g[rowidx_[p]] = aval_[p];
        } else {
            g[v - n_] = -1.0;
        }
        return g;
    }

    // ---- phase costs -----------------------------------------------------------
    // Phase 1 minimizes the sum of basic bound violations; its cost vector has
    // at most m nonzeros, tracked so the reset never touches all n columns.
    void set_phase_costs(bool phase2) {
        phase2_ = phase2;
        for (int v : p1_set_) p1cost_[v] = 0.0;
        p1_set_.clear();
        if (!phase2) {
            for (int k = 0; k < m_; ++k) {
                const int v = head_[k];
                if (xval_[v] < lo_[v] - feas_tol_) {
                    p1cost_[v] = -1.0;
                    p1_set_.push_back(v);
                } else if (xval_[v] > up_[v] + feas_tol_) {
                    p1cost_[v] = 1.0;
                    p1_set_.push_back(v);
                }
            }
        }
    }

    double phase_cost(int v) const { return phase2_ ? cost_[v] : p1cost_[v]; }

    double reduced_cost(int v, const Eigen::VectorXd& y) const {
        double d = phase_cost(v);
        if (v < n_) {
            for (int p = colptr_[v]; p < colptr_[v + 1]; ++p) d -= aval_[p] * y[rowidx_[p]];
        } else {
            d += y[v - n_];
        }
        return d;
    }

    bool eligible(int v, double d) const {
        switch (vstat_[v]) {
            case VarStatus::at_lower: return up_[v] > lo_[v] && d < -opt_tol_;
            case VarStatus::at_upper: return up_[v] > lo_[v] && d > opt_tol_;
            case VarStatus::free_nb: return std::abs(d) > opt_tol_;
            default: return false;
        }
    }

    int entering_direction(int v, double d) const {
        if (vstat_[v] == VarStatus::at_upper) return -1;
        if (vstat_[v] == VarStatus::free_nb) return d > 0.0 ? -1 : 1;
        return 1;
    }

    // Dantzig pricing over rotating sections; full lowest-index scan in Bland
    // mode. Returns -1 when no eligible column exists anywhere.
    int price(const Eigen::VectorXd& y, bool bland) {
        if (bland) {
            for (int v = 0; v < nv_; ++v) {
                if (vstat_[v] == VarStatus::basic) continue;
                if (eligible(v, reduced_cost(v, y))) return v;
            }
            return -1;
        }
        const int section = std::max(4000, nv_ / 32);
        int scanned = 0;
        int best = -1;
        double best_mag = 0.0;
        int cursor = cursor_;
        while (scanned < nv_) {
            const int v = cursor;
            cursor = (cursor + 1 == nv_) ? 0 : cursor + 1;
            ++scanned;
            if (vstat_[v] == VarStatus::basic) continue;
            const double d = reduced_cost(v, y);
            if (!eligible(v, d)) continue;
            const double mag = std::abs(d);
            if (mag > best_mag + kZeroTol) {
                best_mag = mag;
                best = v;
            }
            if (scanned >= section && best >= 0) break;
        }
        cursor_ = cursor;
        return best;
    }

    // ---- ratio test helpers ------------------------------------------------------
    // Step at which basic b blocks when moving delta per unit step; inf if never.
    double block_step(int b, double delta) const {
        double bound;
        return block_step_bound(b, delta, bound);
    }

    double block_step_bound(int b, double delta, double& bound) const {
        // The blocking bound is the next one AHEAD in the direction of motion.
        // A variable already beyond a bound and moving further away has no
        // bound ahead; its growing violation is phase-1 cost, not a block.
        const double x = xval_[b];
        if (delta > 0.0) {
            if (x < lo_[b] - feas_tol_) bound = lo_[b];
            else if (x > up_[b] + feas_tol_) return inf_;
            else if (up_[b] < inf_) bound = up_[b];
            else return inf_;
        } else {
            if (x > up_[b] + feas_tol_) bound = up_[b];
            else if (x < lo_[b] - feas_tol_) return inf_;
            else if (lo_[b] > -inf_) bound = lo_[b];
            else return inf_;
        }
        const double t = (bound - x) / delta;
        return t < 0.0 ? 0.0 : t;
    }

    double range_of(int v) const {
        if (lo_[v] <= -inf_ || up_[v] >= inf_) return inf_;
        return up_[v] - lo_[v];
    }

    void apply_step(const Eigen::VectorXd& w, int sigma, double t) {
        if (t == 0.0) return;
        for (int k = 0; k < m_; ++k) {
            const double wk = w[k];
            if (wk != 0.0) xval_[head_[k]] -= sigma * t * wk;
        }
    }

    double max_violation() const {
        double worst = 0.0;
        for (int k = 0; k < m_; ++k) {
            const int v = head_[k];
            worst = std::max(worst, lo_[v] - xval_[v]);
            worst = std::max(worst, xval_[v] - up_[v]);
        }
        return worst;
    }

    // ---- termination ---------------------------------------------------------
    LpSolution fail(const std::string& msg) {
        LpSolution s = extract(LpStatus::numerical_failure);
        s.message = msg;
        return s;
    }

    LpSolution finish(LpStatus st) { return extract(st); }

    LpSolution finish_infeasible(const Eigen::VectorXd& phase1_duals) {
        LpSolution s = extract(LpStatus::infeasible);
        s.infeasibility = 0.0;
        for (int i = 0; i < m_; ++i) {
            const double act = s.row_activity[i];
            const double viol = std::max({0.0, lp_.row_lo[i] - act, act - lp_.row_up[i]});
            const double mult = phase1_duals[i] * row_scale_[i];
            if (viol > 1e-7 || std::abs(mult) > 1e-7)
                s.infeasible_rows.push_back(LpSolution::RowEvidence{i, lp_.row_names[i], mult, viol});
            s.infeasibility = std::max(s.infeasibility, viol);
        }
        std::stable_sort(s.infeasible_rows.begin(), s.infeasible_rows.end(),
                         [](const auto& a, const auto& b) { return a.violation > b.violation; });
        s.message = "no feasible point; " + std::to_string(s.infeasible_rows.size()) +
                    " rows implicated";
        return s;
    }

    LpSolution extract(LpStatus st) {
        LpSolution s;
        s.status = st;
        s.iterations = iterations_;
        s.x.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) s.x[j] = xval_[j] * col_scale_[j];

        s.row_activity.assign(m_, 0.0);
        for (const auto& e : lp_.entries) s.row_activity[e.row] += e.val * s.x[e.col];

        s.objective = 0.0;
        for (int j = 0; j < n_; ++j) s.objective += lp_.cost[j] * s.x[j];

        s.dual.assign(m_, 0.0);
        s.reduced_cost.assign(n_, 0.0);
        if (factorized_) {
            Eigen::VectorXd cb(m_);
            for (int k = 0; k < m_; ++k) cb[k] = (head_[k] < n_) ? cost_[head_[k]] : 0.0;
            Eigen::VectorXd y = btran(cb);
            for (int i = 0; i < m_; ++i) s.dual[i] = y[i] * row_scale_[i] * cost_scale_;
            for (int j = 0; j < n_; ++j) {
                double d = lp_.cost[j];
                for (int p = colptr_[j]; p < colptr_[j + 1]; ++p) {
                    const int i = rowidx_[p];
                    d -= (aval_[p] / (row_scale_[i] * col_scale_[j])) * s.dual[i];
                }
                s.reduced_cost[j] = d;
            }
        }

        s.vstat = vstat_;
        if (st == LpStatus::optimal) s.certificate = certificate(s);
        return s;
    }

    LpCertificate certificate(const LpSolution& s) const {
        LpCertificate c;
        for (int j = 0; j < n_; ++j) {
            c.primal_infeasibility = std::max(c.primal_infeasibility, lp_.col_lo[j] - s.x[j]);
            c.primal_infeasibility = std::max(c.primal_infeasibility, s.x[j] - lp_.col_up[j]);
        }
        for (int i = 0; i < m_; ++i) {
            c.primal_infeasibility =
                std::max(c.primal_infeasibility, lp_.row_lo[i] - s.row_activity[i]);
            c.primal_infeasibility =
                std::max(c.primal_infeasibility, s.row_activity[i] - lp_.row_up[i]);
        }
        c.primal_infeasibility = std::max(c.primal_infeasibility, 0.0);

        const double dscale = std::max(1.0, cost_scale_);
        for (int j = 0; j < n_; ++j) {
            const double d = s.reduced_cost[j];
            switch (vstat_[j]) {
                case VarStatus::basic:
                case VarStatus::free_nb:
                    c.dual_infeasibility = std::max(c.dual_infeasibility, std::abs(d) / dscale);
                    break;
                case VarStatus::at_lower:
                    if (lp_.col_lo[j] < lp_.col_up[j])
                        c.dual_infeasibility = std::max(c.dual_infeasibility, -d / dscale);
                    break;
                case VarStatus::at_upper:
                    if (lp_.col_lo[j] < lp_.col_up[j])
                        c.dual_infeasibility = std::max(c.dual_infeasibility, d / dscale);
                    break;
            }
        }

        // Dual objective: each multiplier paired with the bound its sign selects.
        // A multiplier pointing at an infinite bound is already a dual violation;
        // it is skipped here.
        double dual_obj = 0.0;
        for (int i = 0; i < m_; ++i) {
            const double y = s.dual[i];
            if (y > 0.0 && lp_.row_lo[i] > -kInf) dual_obj += y * lp_.row_lo[i];
            else if (y < 0.0 && lp_.row_up[i] < kInf) dual_obj += y * lp_.row_up[i];
        }
        for (int j = 0; j < n_; ++j) {
            if (vstat_[j] == VarStatus::basic) continue;
            const double d = s.reduced_cost[j];
            if (d > 0.0 && lp_.col_lo[j] > -kInf) dual_obj += d * lp_.col_lo[j];
            else if (d < 0.0 && lp_.col_up[j] < kInf) dual_obj += d * lp_.col_up[j];
        }
        c.complementarity_gap = std::abs(s.objective - dual_obj);
        return c;
    }

    // ---- data ----------------------------------------------------------------
    const LinearProgram& lp_;
    const LpOptions& opt_;
    int n_ = 0, m_ = 0, nv_ = 0;
    static constexpr double inf_ = kInf;

    std::vector<int> colptr_, rowidx_;
    std::vector<double> aval_;
    std::vector<double> row_scale_, col_scale_;
    double cost_scale_ = 1.0;
    std::vector<double> lo_, up_, cost_, p1cost_, xval_;
    std::vector<int> p1_set_;
    bool phase2_ = false;
    std::vector<VarStatus> vstat_;
    std::vector<int> head_;

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    bool factorized_ = false;
    std::vector<Eta> etas_;
    std::size_t eta_nnz_ = 0;

    double feas_tol_ = 1e-9, opt_tol_ = 2e-9;
    long iterations_ = 0;
    int cursor_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
    lp.validate();
    if (lp.num_rows() == 0) {
        // Pure bound problem: each variable sits at the bound its cost selects.
        LpSolution s;
        s.status = LpStatus::optimal;
        const int n = lp.num_cols();
        s.x.assign(n, 0.0);
        s.reduced_cost = lp.cost;
        s.vstat.assign(n, VarStatus::at_lower);
        for (int j = 0; j < n; ++j) {
            const double c = lp.cost[j];
            if (c > 0.0 || (c == 0.0 && lp.col_lo[j] > -kInf)) {
                if (lp.col_lo[j] <= -kInf) {
                    s.status = LpStatus::unbounded;
                    return s;
                }
                s.x[j] = lp.col_lo[j];
            } else if (c < 0.0) {
                if (lp.col_up[j] >= kInf) {
                    s.status = LpStatus::unbounded;
                    return s;
                }
                s.x[j] = lp.col_up[j];
                s.vstat[j] = VarStatus::at_upper;
            } else {
                s.x[j] = lp.col_up[j] < kInf ? std::min(0.0, lp.col_up[j]) : 0.0;
                s.vstat[j] = VarStatus::free_nb;
            }
            s.objective += c * s.x[j];
        }
        return s;
    }
    Simplex s(lp, options);
    return s.run();
}

}  // namespace spax::lp
