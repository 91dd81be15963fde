#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "casflow/common.hpp"

namespace casflow {

// Fixed-format double for TSV artifacts; byte-stable across runs.
std::string format_double(double v);

// Buffered TSV writer. Every artifact gets a header row and the writer
// tracks the data-row count for the manifest.
class TsvWriter {
 public:
  TsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~TsvWriter();

  void row(const std::vector<std::string>& cells);
  void close();

  std::uint64_t rows_written() const { return rows_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::uint64_t rows_ = 0;
};

struct TsvRow {
  std::vector<std::string> cells;
  std::uint64_t line_no = 0;
};

// Reads a whole TSV file; validates the header matches exactly.
std::vector<TsvRow> read_tsv(const std::string& path,
                             const std::vector<std::string>& expected_header);

std::uint64_t parse_u64_cell(const std::string& cell, const std::string& path,
                             std::uint64_t line_no);
std::int64_t parse_i64_cell(const std::string& cell, const std::string& path,
                            std::uint64_t line_no);
double parse_double_cell(const std::string& cell, const std::string& path,
                         std::uint64_t line_no);

// FNV-1a over the raw bytes of a file.
std::uint64_t hash_file(const std::string& path);

}  // namespace casflow
