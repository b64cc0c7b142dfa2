#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spax/scenario.hpp"

namespace spax {

// Minimal CSV support: comma-separated, first line is the header, no quoting
// (none of the file schemas need it). Field accessors raise InputError naming
// the file, row and column.
class CsvTable {
  public:
    static CsvTable read_file(const std::string& path);
    static CsvTable from_string(const std::string& text, const std::string& name);

    const std::string& name() const { return name_; }
    std::size_t rows() const { return cells_.size(); }
    const std::vector<std::string>& header() const { return header_; }

    bool has_column(const std::string& col) const;
    int column(const std::string& col) const;           // -1 if absent
    int required_column(const std::string& col) const;  // throws if absent

    const std::string& cell(std::size_t row, int col) const { return cells_[row][col]; }
    double number(std::size_t row, int col) const;
    std::int64_t integer(std::size_t row, int col) const;

    // 1-based data row number as in the file (header is line 1).
    std::string where(std::size_t row, int col) const;

  private:
    std::string name_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> cells_;
};

// Deterministic float formatting for CSV/JSON artifacts: shortest text that
// round-trips the double, so identical runs produce identical bytes.
std::string format_double(double v);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);

    void begin_row();
    void add(const std::string& v);
    void add(std::int64_t v);
    void add(int v) { add(static_cast<std::int64_t>(v)); }
    void add(double v);

    std::string str() const;
    void write_file(const std::string& path) const;

  private:
    std::size_t width_;
    std::size_t in_row_ = 0;
    std::string out_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace spax
