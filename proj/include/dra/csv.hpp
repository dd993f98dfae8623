#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dra {

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17 significant digits: enough to reproduce any double bit for bit on
/// re-parse, so emitted files round-trip without loss.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

/// Minimal CSV: comma separator, newline rows, no quoting (emitted fields
/// never contain either).
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
    append_row(header_);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) {
      throw CsvError("CsvWriter: row width " + std::to_string(cells.size()) +
                     " != header width " + std::to_string(header_.size()));
    }
    append_row(cells);
  }

  const std::string& str() const { return out_; }

  void write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CsvError("CsvWriter: cannot open " + path);
    f << out_;
  }

 private:
  void append_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }

  std::vector<std::string> header_;
  std::string out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == EOF) break;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CsvError("read_csv_file: cannot open " + path);
  return read_csv(f);
}

struct ColumnSpec {
  enum class Type { real, integer, text };
  std::string name;
  Type type = Type::real;
};

/// Schema check used by the round-trip tests and by consumers of emitted
/// files: header names match, every cell parses as its column type, and
/// reals reproduce their exact source string when re-formatted.
inline void validate_csv(const CsvTable& table, const std::vector<ColumnSpec>& schema) {
  if (table.header.size() != schema.size()) {
    throw CsvError("validate_csv: expected " + std::to_string(schema.size()) + " columns, got " +
                   std::to_string(table.header.size()));
  }
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (table.header[c] != schema[c].name) {
      throw CsvError("validate_csv: column " + std::to_string(c) + " named '" + table.header[c] +
                     "', expected '" + schema[c].name + "'");
    }
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != schema.size()) {
      throw CsvError("validate_csv: row " + std::to_string(r) + " has " +
                     std::to_string(row.size()) + " cells");
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const std::string& cell = row[c];
      switch (schema[c].type) {
        case ColumnSpec::Type::real: {
          double value = 0.0;
          const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
          if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw CsvError("validate_csv: row " + std::to_string(r) + " col " + schema[c].name +
                           ": '" + cell + "' is not a real");
          }
          double reparsed = 0.0;
          const std::string formatted = format_double(value);
          std::from_chars(formatted.data(), formatted.data() + formatted.size(), reparsed);
          if (reparsed != value) {
            throw CsvError("validate_csv: row " + std::to_string(r) + " col " + schema[c].name +
                           ": lossy real '" + cell + "'");
          }
          break;
        }
        case ColumnSpec::Type::integer: {
          std::int64_t value = 0;
          const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
          if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw CsvError("validate_csv: row " + std::to_string(r) + " col " + schema[c].name +
                           ": '" + cell + "' is not an integer");
          }
          break;
        }
        case ColumnSpec::Type::text:
          break;
      }
    }
  }
}

}  // namespace dra
