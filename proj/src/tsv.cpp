#include "casflow/tsv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace casflow {

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

TsvWriter::TsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw DataError("cannot open for writing: " + path);
  row(header);
  rows_ = 0;  // header is not a data row
}

TsvWriter::~TsvWriter() {
  if (out_.is_open()) out_.close();
}

void TsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << '\t';
    out_ << cells[i];
  }
  out_ << '\n';
  ++rows_;
}

void TsvWriter::close() {
  out_.close();
  if (out_.fail()) throw DataError("write failed: " + path_);
}

std::vector<TsvRow> read_tsv(const std::string& path,
                             const std::vector<std::string>& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<TsvRow> rows;
  std::string line;
  std::uint64_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (!saw_header) {
      if (cells != expected_header)
        throw DataError(path + ": unexpected header");
      saw_header = true;
      continue;
    }
    rows.push_back(TsvRow{std::move(cells), line_no});
  }
  if (!saw_header) throw DataError(path + ": missing header row");
  return rows;
}

static DataError cell_error(const std::string& path, std::uint64_t line_no,
                            const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line_no << ": " << what;
  return DataError(os.str());
}

std::uint64_t parse_u64_cell(const std::string& cell, const std::string& path,
                             std::uint64_t line_no) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || p != cell.data() + cell.size())
    throw cell_error(path, line_no, "bad unsigned integer '" + cell + "'");
  return v;
}

std::int64_t parse_i64_cell(const std::string& cell, const std::string& path,
                            std::uint64_t line_no) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || p != cell.data() + cell.size())
    throw cell_error(path, line_no, "bad integer '" + cell + "'");
  return v;
}

double parse_double_cell(const std::string& cell, const std::string& path,
                         std::uint64_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw cell_error(path, line_no, "bad number '" + cell + "'");
  }
}

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::uint64_t h = kFnvOffset;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
    if (!in) break;
  }
  return h;
}

}  // namespace casflow
