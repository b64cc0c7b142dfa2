#include "spax/lp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spax/csv.hpp"

namespace spax::lp {

int LinearProgram::add_col(std::string name, double lo, double up, double obj) {
    col_names.push_back(std::move(name));
    col_lo.push_back(lo);
    col_up.push_back(up);
    cost.push_back(obj);
    return num_cols() - 1;
}

int LinearProgram::add_row(std::string name, double lo, double up) {
    row_names.push_back(std::move(name));
    row_lo.push_back(lo);
    row_up.push_back(up);
    return num_rows() - 1;
}

void LinearProgram::add_entry(int row, int col, double val) {
    entries.push_back(Entry{row, col, val});
}

void LinearProgram::validate() const {
    const int n = num_cols();
    const int m = num_rows();
    for (int j = 0; j < n; ++j) {
        if (std::isnan(col_lo[j]) || std::isnan(col_up[j]) || col_lo[j] > col_up[j])
            throw std::invalid_argument("lp: bad bounds on column " + col_names[j]);
        if (!std::isfinite(cost[j]))
            throw std::invalid_argument("lp: non-finite cost on column " + col_names[j]);
    }
    for (int i = 0; i < m; ++i) {
        if (std::isnan(row_lo[i]) || std::isnan(row_up[i]) || row_lo[i] > row_up[i])
            throw std::invalid_argument("lp: bad bounds on row " + row_names[i]);
    }
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= n)
            throw std::invalid_argument("lp: entry references undeclared row/column");
        if (!std::isfinite(e.val)) throw std::invalid_argument("lp: non-finite coefficient");
    }
}

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_limit: return "iteration_limit";
        case LpStatus::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

// Plain fixed-format dump: one line per column, row and entry.
void dump_lp(const LinearProgram& lp, const std::string& path) {
    std::ostringstream os;
    os << "LP cols " << lp.num_cols() << " rows " << lp.num_rows() << " entries "
       << lp.entries.size() << "\n";
    for (int j = 0; j < lp.num_cols(); ++j)
        os << "COL " << j << " " << lp.col_names[j] << " " << format_double(lp.col_lo[j]) << " "
           << format_double(lp.col_up[j]) << " " << format_double(lp.cost[j]) << "\n";
    for (int i = 0; i < lp.num_rows(); ++i)
        os << "ROW " << i << " " << lp.row_names[i] << " " << format_double(lp.row_lo[i]) << " "
           << format_double(lp.row_up[i]) << "\n";
    for (const auto& e : lp.entries)
        os << "A " << e.row << " " << e.col << " " << format_double(e.val) << "\n";
    write_text_file(path, os.str());
}

}  // namespace spax::lp
