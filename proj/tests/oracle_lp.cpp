#include "oracle_lp.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace spax::oracle {

namespace {

struct Candidate {
    Eigen::VectorXd normal;
    double bound;
    int entity;  // cols: j, rows: n + i (to prune double-activation)
};

struct Enumerator {
    int n;
    Eigen::MatrixXd A;  // dense rows
    const lp::LinearProgram& lp;
    std::vector<Candidate> cands;
    std::vector<int> forced;

    Eigen::MatrixXd basisQ;  // orthonormalized active normals (rank pruning)
    int rank = 0;
    std::vector<int> chosen;
    std::vector<char> entity_used;

    Result best;
    long leaves = 0;

    explicit Enumerator(const lp::LinearProgram& l) : lp(l) {
        n = lp.num_cols();
        const int m = lp.num_rows();
        A = Eigen::MatrixXd::Zero(m, n);
        for (const auto& e : lp.entries) A(e.row, e.col) += e.val;
        entity_used.assign(n + m, 0);
        basisQ.resize(n, n);

        // Row sides. Empty rows cannot be active (zero normal).
        for (int i = 0; i < m; ++i) {
            if (A.row(i).cwiseAbs().maxCoeff() == 0.0) continue;
            const bool lo_fin = lp.row_lo[i] > -lp::kInf;
            const bool up_fin = lp.row_up[i] < lp::kInf;
            if (lo_fin && up_fin && lp.row_lo[i] == lp.row_up[i]) {
                forced.push_back(add(A.row(i), lp.row_lo[i], n + i));
                continue;
            }
            if (lo_fin && !implied_lower(i)) add(A.row(i), lp.row_lo[i], n + i);
            if (up_fin) add(A.row(i), lp.row_up[i], n + i);
        }
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e[j] = 1.0;
            const bool lo_fin = lp.col_lo[j] > -lp::kInf;
            const bool up_fin = lp.col_up[j] < lp::kInf;
            if (lo_fin && up_fin && lp.col_lo[j] == lp.col_up[j]) {
                forced.push_back(add(e, lp.col_lo[j], j));
                continue;
            }
            if (lo_fin) add(e, lp.col_lo[j], j);
            if (up_fin) add(e, lp.col_up[j], j);
        }
    }

    bool implied_lower(int i) const {
        if (lp.row_lo[i] > 0.0) return false;
        for (int j = 0; j < n; ++j) {
            if (A(i, j) < 0.0) return false;
            if (A(i, j) > 0.0 && lp.col_lo[j] < 0.0) return false;
        }
        return true;
    }

    int add(const Eigen::VectorXd& normal, double bound, int entity) {
        cands.push_back(Candidate{normal, bound, entity});
        return static_cast<int>(cands.size()) - 1;
    }

    bool push(int ci) {
        const Candidate& c = cands[ci];
        if (entity_used[c.entity]) return false;
        // Gram-Schmidt rank test.
        Eigen::VectorXd v = c.normal;
        for (int k = 0; k < rank; ++k) v -= basisQ.col(k).dot(c.normal) * basisQ.col(k);
        for (int k = 0; k < rank; ++k) v -= basisQ.col(k).dot(v) * basisQ.col(k);
        const double norm = v.norm();
        if (norm < 1e-9 * (1.0 + c.normal.norm())) return false;
        basisQ.col(rank) = v / norm;
        ++rank;
        chosen.push_back(ci);
        entity_used[c.entity] = 1;
        return true;
    }

    void pop() {
        entity_used[cands[chosen.back()].entity] = 0;
        chosen.pop_back();
        --rank;
    }

    void leaf() {
        ++leaves;
        Eigen::MatrixXd M(n, n);
        Eigen::VectorXd v(n);
        for (int k = 0; k < n; ++k) {
            M.row(k) = cands[chosen[k]].normal.transpose();
            v[k] = cands[chosen[k]].bound;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        if (!lu.isInvertible()) return;
        const Eigen::VectorXd x = lu.solve(v);

        const double ftol = 1e-7;
        for (int j = 0; j < n; ++j) {
            if (x[j] < lp.col_lo[j] - ftol * (1.0 + std::abs(lp.col_lo[j]))) return;
            if (x[j] > lp.col_up[j] + ftol * (1.0 + std::abs(lp.col_up[j]))) return;
        }
        const Eigen::VectorXd act = A * x;
        for (int i = 0; i < lp.num_rows(); ++i) {
            if (act[i] < lp.row_lo[i] - ftol * (1.0 + std::abs(lp.row_lo[i]))) return;
            if (act[i] > lp.row_up[i] + ftol * (1.0 + std::abs(lp.row_up[i]))) return;
        }
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += lp.cost[j] * x[j];
        if (!best.feasible || obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
            best.x.assign(x.data(), x.data() + n);
        }
    }

    void recurse(int start) {
        if (rank == n) {
            leaf();
            return;
        }
        const int remaining = n - rank;
        for (int ci = start; ci + remaining <= static_cast<int>(cands.size()); ++ci) {
            bool is_forced = false;
            for (int f : forced)
                if (f == ci) {
                    is_forced = true;
                    break;
                }
            if (is_forced) continue;  // already in the active set
            if (!push(ci)) continue;
            recurse(ci + 1);
            pop();
        }
    }

    Result run() {
        for (int f : forced) {
            if (!push(f)) {
                // Conflicting forced equalities: no vertex can satisfy them all
                // independently; fall back to the unforced search.
            }
        }
        if (rank > n) return best;
        recurse(0);
        best.vertices_checked = leaves;
        return best;
    }
};

}  // namespace

Result enumerate_vertices(const lp::LinearProgram& lp) {
    if (lp.num_cols() > 12)
        throw std::invalid_argument("oracle: too many variables for exhaustive enumeration");
    Enumerator e(lp);
    return e.run();
}

}  // namespace spax::oracle
