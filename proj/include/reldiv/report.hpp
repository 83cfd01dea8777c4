#pragma once

#include <cstdint>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reldiv/asymptotics.hpp"
#include "reldiv/errors.hpp"

namespace reldiv {

inline constexpr const char* kToolVersion = "0.3.1";

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Shortest round-trip text for a double; integers print without a dot.
inline std::string format_number(double v) {
  if (std::isinf(v)) return "inf";
  if (v == std::floor(v) && std::fabs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string format_value(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : "inf"; }

/// Comma-separated table with "# key: value" metadata lines on top. Cells
/// containing commas or quotes are quoted.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
  void row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) throw InputError("csv row has the wrong number of cells");
    rows_.push_back(std::move(cells));
  }

  std::string str() const {
    std::ostringstream out;
    for (const auto& [k, v] : meta_) out << "# " << k << ": " << v << "\n";
    write_line(out, columns_);
    for (const auto& r : rows_) write_line(out, r);
    return out.str();
  }

  std::size_t size() const noexcept { return rows_.size(); }

 private:
  static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      const auto& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out << '"';
        for (char ch : c) out << (ch == '"' ? "\"\"" : std::string(1, ch));
        out << '"';
      } else {
        out << c;
      }
    }
    out << "\n";
  }

  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// A parsed CSV file: metadata, header and rows of raw cells.
struct CsvData {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_lines;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line, int lineno) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw InputError("line " + std::to_string(lineno) + ": unterminated quote");
  cells.push_back(cur);
  return cells;
}

inline CsvData parse_csv(std::istream& in) {
  CsvData data;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      if (colon != std::string::npos) {
        auto key = line.substr(1, colon - 1);
        key.erase(0, key.find_first_not_of(' '));
        auto value = line.substr(colon + 1);
        value.erase(0, value.find_first_not_of(' '));
        data.meta[key] = value;
      }
      continue;
    }
    auto cells = split_csv_line(line, lineno);
    if (data.columns.empty()) {
      data.columns = std::move(cells);
      continue;
    }
    if (cells.size() != data.columns.size()) {
      throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(data.columns.size()) +
                       " cells, found " + std::to_string(cells.size()));
    }
    data.rows.push_back(std::move(cells));
    data.row_lines.push_back(lineno);
  }
  return data;
}

/// "inf" (any case, optionally with a sign of +) is infinity; anything else
/// must be a finite nonnegative number.
inline std::optional<double> parse_sample_value(const std::string& cell, int lineno) {
  std::string c = cell;
  for (auto& ch : c) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (c == "inf" || c == "+inf" || c == "infinity" || c == "∞") return std::nullopt;
  try {
    std::size_t used = 0;
    double v = std::stod(cell, &used);
    if (used != cell.size() || !std::isfinite(v)) throw std::invalid_argument("x");
    if (v < 0) throw InputError("line " + std::to_string(lineno) + ": '" + cell + "' is negative");
    return v;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(lineno) + ": '" + cell + "' is not a number or inf");
  }
}

/// Builds a sampled function from columns `r_col` and `value_col`.
inline SampledFunction sampled_from_csv(const CsvData& data, const std::string& r_col = "r",
                                        const std::string& value_col = "value") {
  int ri = data.column(r_col);
  int vi = data.column(value_col);
  if (ri < 0) throw InputError("csv has no '" + r_col + "' column");
  if (vi < 0) throw InputError("csv has no '" + value_col + "' column");
  SampledFunction f;
  f.provenance = value_col;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const int line = data.row_lines[i];
    auto r = parse_sample_value(data.rows[i][static_cast<std::size_t>(ri)], line);
    if (!r) throw InputError("line " + std::to_string(line) + ": radius cannot be infinite");
    f.add(*r, parse_sample_value(data.rows[i][static_cast<std::size_t>(vi)], line));
  }
  f.validate();
  return f;
}

/// One gnuplot-style two-column data file.
struct PlotFile {
  std::string name;
  std::string content;
  std::size_t rows = 0;
  std::size_t infinite = 0;
};

/// Splits a profile CSV into one "r value" data file per series. Series are
/// keyed by whichever of kind/rho/n/pair columns exist when a "value" column
/// is present; otherwise every numeric column besides r is its own series.
/// Infinite rows are dropped and counted in a trailing note.
inline std::vector<PlotFile> plot_series(const CsvData& data, const std::string& stem) {
  const int ri = data.column("r");
  if (ri < 0) throw InputError("plot-data: csv has no 'r' column");
  std::vector<std::pair<std::string, int>> series;  // label, value column
  std::vector<int> key_cols;
  if (int vi = data.column("value"); vi >= 0) {
    for (const char* k : {"kind", "rho", "n", "pair"}) {
      if (int c = data.column(k); c >= 0) key_cols.push_back(c);
    }
    series.emplace_back("", vi);
  } else {
    for (std::size_t c = 0; c < data.columns.size(); ++c) {
      if (static_cast<int>(c) == ri) continue;
      bool numeric = !data.rows.empty();
      for (std::size_t i = 0; i < data.rows.size() && numeric; ++i) {
        try {
          parse_sample_value(data.rows[i][c], data.row_lines[i]);
        } catch (const InputError&) {
          numeric = false;
        }
      }
      if (numeric) series.emplace_back(data.columns[c], static_cast<int>(c));
    }
  }
  auto sanitize = [](std::string s) {
    for (auto& ch : s) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '.') ch = '-';
    }
    return s;
  };
  std::vector<PlotFile> files;
  std::map<std::string, std::size_t> by_name;
  auto file_for = [&](const std::string& label) -> PlotFile& {
    std::string name = stem + (label.empty() ? "" : "_" + sanitize(label)) + ".dat";
    auto [it, fresh] = by_name.emplace(name, files.size());
    if (fresh) files.push_back({name, "# series: " + (label.empty() ? stem : label) + "\n# r value\n", 0, 0});
    return files[it->second];
  };
  if (data.rows.empty()) {
    for (const auto& [label, col] : series) file_for(label);
    if (files.empty()) files.push_back({stem + ".dat", "", 0, 0});
    for (auto& f : files) f.content.clear();
    return files;
  }
  for (const auto& [label, col] : series) {
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
      const auto& row = data.rows[i];
      std::string key = label;
      for (int k : key_cols) key += (key.empty() ? "" : "_") + data.columns[static_cast<std::size_t>(k)] + "=" + row[static_cast<std::size_t>(k)];
      auto& f = file_for(key);
      auto v = parse_sample_value(row[static_cast<std::size_t>(col)], data.row_lines[i]);
      if (!v) {
        ++f.infinite;
        continue;
      }
      f.content += row[static_cast<std::size_t>(ri)] + " " + row[static_cast<std::size_t>(col)] + "\n";
      ++f.rows;
    }
  }
  for (auto& f : files) {
    if (f.infinite) f.content += "# note: " + std::to_string(f.infinite) + " infinite\n";
  }
  return files;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace reldiv
