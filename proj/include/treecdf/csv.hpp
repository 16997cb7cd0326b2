#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "treecdf/matrix.hpp"

namespace treecdf {

// Shortest decimal representation that parses back to the same double;
// locale-independent.
std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;  // empty when the file had none
    DataMatrix data;
};

// Comma-separated numeric files. A non-numeric first row is treated as a
// header. Cells must be finite decimal numbers; anything else raises a
// DataError naming the column.
CsvTable read_csv(const std::string& path);

// Streaming row reader for files larger than memory.
class CsvReader {
  public:
    explicit CsvReader(const std::string& path);

    const std::vector<std::string>& header() const { return header_; }
    std::size_t cols() const { return cols_; }
    // Reads the next data row; returns false at end of file.
    bool next(std::vector<double>& row);

  private:
    std::ifstream in_;
    std::string path_;
    std::vector<std::string> header_;
    std::size_t cols_ = 0;
    std::size_t line_number_ = 0;
    std::string pending_;
    bool has_pending_ = false;
};

void write_csv(const std::string& path, const DataMatrix& data,
               const std::vector<std::string>& header = {});

}  // namespace treecdf
