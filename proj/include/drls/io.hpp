#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "drls/dense_matrix.hpp"

namespace drls {

enum class TableFormat { Csv, Tsv };

/// Parsed numeric table. column_names is empty unless the file opened with a
/// non-numeric header row.
struct LoadedMatrix {
    DenseMatrix matrix;
    std::vector<std::string> column_names;
    bool had_header = false;
    bool centered = false;
};

/// Reads a rectangular numeric table (UTF-8, LF or CRLF). A header row is
/// detected when the first row has any non-numeric cell. center subtracts the
/// column means. Ragged rows, non-numeric or non-finite cells, and files with
/// no data rows raise ParseError.
LoadedMatrix ingest_matrix(const std::string& path, TableFormat format, bool center);

LoadedMatrix parse_table(std::istream& in, TableFormat format, bool center);

void write_delimited(const DenseMatrix& m, const std::string& path, TableFormat format);

}  // namespace drls
