#ifndef NEUTRAL_DATASET_HPP
#define NEUTRAL_DATASET_HPP

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "neutral/errors.hpp"

namespace neutral {

// Rectangular table of finite reals with a header row, plus an optional
// integer label column (kept separate from the numeric block).
struct Dataset {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;  // empty unless a label column exists

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return header.size(); }
  bool has_labels() const { return !labels.empty(); }
};

inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Writes atomically: temp file in the same directory, then rename.
inline void write_csv(const Dataset& data, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw InvalidParams("write_csv: cannot open " + tmp);
    for (std::size_t c = 0; c < data.header.size(); ++c) {
      if (c > 0) out << ',';
      out << data.header[c];
    }
    if (data.has_labels()) out << ",label";
    out << '\n';
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
      const auto& row = data.rows[r];
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) out << ',';
        out << format_value(row[c]);
      }
      if (data.has_labels()) out << ',' << data.labels[r];
      out << '\n';
    }
    if (!out) throw InvalidParams("write_csv: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw InvalidParams("write_csv: cannot rename into " + path);
  }
}

inline Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("read_csv: cannot open " + path);
  Dataset data;
  std::string line;
  if (!std::getline(in, line)) throw EmptyInput("read_csv: empty file");
  bool label_column = false;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) data.header.push_back(cell);
    if (!data.header.empty() && data.header.back() == "label") {
      data.header.pop_back();
      label_column = true;
    }
  }
  if (data.header.empty()) throw EmptyInput("read_csv: no columns");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || !std::isfinite(v)) {
        throw InvalidParams("read_csv: non-finite value '" + cell + "'");
      }
      row.push_back(v);
    }
    const std::size_t expected =
        data.header.size() + (label_column ? 1 : 0);
    if (row.size() != expected) {
      throw LengthMismatch("read_csv: ragged row in " + path);
    }
    if (label_column) {
      data.labels.push_back(static_cast<std::size_t>(row.back()));
      row.pop_back();
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

}  // namespace neutral

#endif
