#include "spax/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spax {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
    if (!out) throw InputError("write failed: " + path);
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

CsvTable CsvTable::read_file(const std::string& path) {
    return from_string(read_text_file(path), path);
}

CsvTable CsvTable::from_string(const std::string& text, const std::string& name) {
    CsvTable t;
    t.name_ = name;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError(name + ": empty file");
    t.header_ = split_line(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split_line(line);
        if (cells.size() != t.header_.size())
            throw InputError(name + " line " + std::to_string(lineno) + ": expected " +
                             std::to_string(t.header_.size()) + " fields, got " +
                             std::to_string(cells.size()));
        t.cells_.push_back(std::move(cells));
    }
    return t;
}

bool CsvTable::has_column(const std::string& col) const { return column(col) >= 0; }

int CsvTable::column(const std::string& col) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == col) return static_cast<int>(i);
    return -1;
}

int CsvTable::required_column(const std::string& col) const {
    const int i = column(col);
    if (i < 0) throw InputError(name_ + ": missing required column '" + col + "'");
    return i;
}

std::string CsvTable::where(std::size_t row, int col) const {
    return name_ + " row " + std::to_string(row + 2) + ", column " + header_[col];
}

double CsvTable::number(std::size_t row, int col) const {
    const std::string& s = cells_[row][col];
    if (s.empty() || s == "NA" || s == "nan") return std::nan("");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw InputError(where(row, col) + ": not a number: '" + s + "'");
    return v;
}

std::int64_t CsvTable::integer(std::size_t row, int col) const {
    const std::string& s = cells_[row][col];
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw InputError(where(row, col) + ": not an integer: '" + s + "'");
    return v;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    // Shortest representation that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_.push_back(',');
        out_ += header[i];
    }
    out_.push_back('\n');
    in_row_ = width_;  // header complete
}

void CsvWriter::begin_row() {
    if (in_row_ != width_) throw std::logic_error("csv row incomplete");
    in_row_ = 0;
}

void CsvWriter::add(const std::string& v) {
    if (in_row_) out_.push_back(',');
    out_ += v;
    if (++in_row_ == width_) out_.push_back('\n');
}

void CsvWriter::add(std::int64_t v) { add(std::to_string(v)); }

void CsvWriter::add(double v) { add(format_double(v)); }

std::string CsvWriter::str() const {
    if (in_row_ != width_) throw std::logic_error("csv row incomplete");
    return out_;
}

void CsvWriter::write_file(const std::string& path) const { write_text_file(path, str()); }

}  // namespace spax
