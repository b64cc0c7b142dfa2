#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace spax::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse LP in "computational form":
//   minimize    c'x
//   subject to  row_lo <= Ax <= row_up,   col_lo <= x <= col_up.
// Senses are expressed through the row bounds (<=: [-inf,b], >=: [b,inf],
// =: [b,b], range: [lo,up]).
struct LinearProgram {
    std::vector<double> col_lo, col_up, cost;
    std::vector<double> row_lo, row_up;
    std::vector<std::string> col_names, row_names;

    struct Entry {
        int row;
        int col;
        double val;
    };
    std::vector<Entry> entries;

    int add_col(std::string name, double lo, double up, double obj);
    int add_row(std::string name, double lo, double up);
    int add_row_le(std::string name, double rhs) { return add_row(std::move(name), -kInf, rhs); }
    int add_row_ge(std::string name, double rhs) { return add_row(std::move(name), rhs, kInf); }
    int add_row_eq(std::string name, double rhs) { return add_row(std::move(name), rhs, rhs); }
    void add_entry(int row, int col, double val);

    int num_cols() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(row_lo.size()); }

    // Structural well-formedness; throws std::invalid_argument.
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical_failure };

std::string to_string(LpStatus s);

// Residual norms reported with every optimal solve.
struct LpCertificate {
    double primal_infeasibility = 0.0;  // max bound/row violation
    double dual_infeasibility = 0.0;    // max reduced-cost sign violation
    double complementarity_gap = 0.0;   // |primal obj - dual obj|
};

// Variable status for warm starts: structurals first, then one logical per row.
enum class VarStatus : std::uint8_t { basic = 0, at_lower = 1, at_upper = 2, free_nb = 3 };

struct LpSolution {
    LpStatus status = LpStatus::numerical_failure;
    std::vector<double> x;             // structural values
    std::vector<double> row_activity;  // Ax
    std::vector<double> dual;          // row multipliers y
    std::vector<double> reduced_cost;  // c - A'y
    double objective = 0.0;
    LpCertificate certificate;
    long iterations = 0;
    std::vector<VarStatus> vstat;  // basis snapshot (cols + rows)

    // Infeasibility evidence: rows with nonzero phase-1 multipliers plus the
    // residual violation of the best attainable point.
    struct RowEvidence {
        int row;
        std::string name;
        double multiplier;
        double violation;
    };
    std::vector<RowEvidence> infeasible_rows;
    double infeasibility = 0.0;
    std::string message;
};

struct LpOptions {
    double tol = 1e-9;            // feasibility/optimality tolerance on scaled data
    long max_iterations = 0;      // 0 = automatic
    bool scale = true;            // geometric row/column equilibration
    int refactor_interval = 100;  // pivots between basis refactorizations
    const std::vector<VarStatus>* warm_start = nullptr;
};

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

// Fixed-format text dump for cross-checking against external solvers
// (format documented in README).
void dump_lp(const LinearProgram& lp, const std::string& path);

}  // namespace spax::lp
