#include "drls/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "drls/errors.hpp"

namespace drls {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    if (!line.empty() && line.back() == delim) cells.emplace_back();
    return cells;
}

bool parse_cell(const std::string& cell, double& out) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t') ++end;
    if (*end != '\0') return false;
    return std::isfinite(out);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

}  // namespace

LoadedMatrix parse_table(std::istream& in, TableFormat format, bool center) {
    const char delim = format == TableFormat::Csv ? ',' : '\t';
    LoadedMatrix out;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first_content_row = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split_line(line, delim);

        if (first_content_row) {
            first_content_row = false;
            width = cells.size();
            bool numeric = true;
            std::vector<double> values(cells.size());
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (!parse_cell(trim(cells[c]), values[c])) {
                    numeric = false;
                    break;
                }
            }
            if (numeric) {
                rows.push_back(std::move(values));
            } else {
                out.had_header = true;
                out.column_names.reserve(cells.size());
                for (const auto& c : cells) out.column_names.push_back(trim(c));
            }
            continue;
        }

        if (cells.size() != width) {
            throw ParseError("row has " + std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(width) + " (line " + std::to_string(line_no) + ")",
                             line_no);
        }
        std::vector<double> values(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_cell(trim(cells[c]), values[c])) {
                throw ParseError("non-numeric cell at line " + std::to_string(line_no) +
                                     ", column " + std::to_string(c + 1),
                                 line_no, c + 1);
            }
        }
        rows.push_back(std::move(values));
    }

    if (rows.empty()) throw ParseError("no data rows");

    DenseMatrix m(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
    }
    if (center) {
        for (std::size_t j = 0; j < width; ++j) {
            double mean = 0.0;
            for (std::size_t i = 0; i < m.rows(); ++i) mean += m(i, j);
            mean /= static_cast<double>(m.rows());
            for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) -= mean;
        }
        out.centered = true;
    }
    out.matrix = std::move(m);
    return out;
}

LoadedMatrix ingest_matrix(const std::string& path, TableFormat format, bool center) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_table(in, format, center);
}

void write_delimited(const DenseMatrix& m, const std::string& path, TableFormat format) {
    const char delim = format == TableFormat::Csv ? ',' : '\t';
    std::ofstream outf(path);
    if (!outf) throw Error("cannot write " + path);
    char buf[64];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::string line;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            if (j > 0) line.push_back(delim);
            line += buf;
        }
        line.push_back('\n');
        outf << line;
    }
}

}  // namespace drls
