#include "dlme/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dlme/error.hpp"

namespace dlme {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file: " + path);

  std::vector<std::vector<std::string>> raw;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    raw.push_back(split_line(line));
  }
  if (raw.empty()) throw ParseError(path + ": file contains no data rows");

  // Header detection: first row counts as a header when any cell is
  // non-numeric.
  bool has_header = false;
  for (const auto& cell : raw.front()) {
    double v;
    if (!parse_double(trim(cell), v)) {
      has_header = true;
      break;
    }
  }
  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (has_header) {
    for (const auto& cell : raw.front()) header.push_back(trim(cell));
    first_data = 1;
  }
  if (first_data >= raw.size()) throw ParseError(path + ": header only, no data rows");

  const std::size_t ncols = raw[first_data].size();
  if (!header.empty() && header.size() != ncols) {
    throw ParseError(path + ": header has " + std::to_string(header.size()) +
                     " columns but row 2 has " + std::to_string(ncols));
  }

  int label_idx = -1;
  if (label_column) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == *label_column) label_idx = static_cast<int>(c);
    }
    if (label_idx < 0) {
      // Fall back to a 0-based column index.
      try {
        label_idx = std::stoi(*label_column);
      } catch (...) {
        throw ConfigError(path + ": label column '" + *label_column + "' not found");
      }
      if (label_idx < 0 || label_idx >= static_cast<int>(ncols)) {
        throw ConfigError(path + ": label column index " + std::to_string(label_idx) +
                          " out of range");
      }
    }
  }

  const int nrows = static_cast<int>(raw.size() - first_data);
  const int nfeat = static_cast<int>(ncols) - (label_idx >= 0 ? 1 : 0);
  if (nfeat <= 0) throw ParseError(path + ": no feature columns");

  Dataset ds;
  ds.name = path;
  ds.X = Matrix(nrows, nfeat);
  if (label_idx >= 0) ds.labels.resize(nrows);

  for (int r = 0; r < nrows; ++r) {
    const auto& cells = raw[first_data + r];
    const int file_row = static_cast<int>(first_data) + r + 1;  // 1-based, incl. header
    if (cells.size() != ncols) {
      throw ParseError(path + ": ragged row " + std::to_string(file_row) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(ncols));
    }
    int f = 0;
    for (std::size_t c = 0; c < ncols; ++c) {
      double v;
      if (!parse_double(trim(cells[c]), v)) {
        throw ParseError(path + ": non-numeric cell at row " + std::to_string(file_row) +
                         ", column " + std::to_string(c + 1) + ": '" + trim(cells[c]) + "'");
      }
      if (static_cast<int>(c) == label_idx) {
        const double rounded = std::nearbyint(v);
        if (std::abs(v - rounded) > 1e-9) {
          throw ParseError(path + ": label at row " + std::to_string(file_row) +
                           " is not an integer: " + trim(cells[c]));
        }
        ds.labels[r] = static_cast<int>(rounded);
      } else {
        ds.X(r, f++) = v;
      }
    }
  }
  if (!ds.X.all_finite()) throw ParseError(path + ": non-finite feature values");
  return ds;
}

void save_csv(const std::string& path, const Matrix& x, const std::vector<int>& labels,
              const std::vector<std::string>& feature_names) {
  if (!labels.empty() && static_cast<int>(labels.size()) != x.rows()) {
    throw ContractError("save_csv: label count does not match row count");
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open CSV file for writing: " + path);
  char buf[64];
  for (int c = 0; c < x.cols(); ++c) {
    if (c) out << ',';
    if (!feature_names.empty()) {
      out << feature_names[c];
    } else {
      out << 'f' << c;
    }
  }
  if (!labels.empty()) out << ",label";
  out << '\n';
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) {
      if (c) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", x(r, c));
      out << buf;
    }
    if (!labels.empty()) out << ',' << labels[r];
    out << '\n';
  }
}

void save_embedding_csv(const std::string& path, const Matrix& z,
                        const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open CSV file for writing: " + path);
  char buf[64];
  out << "id";
  for (int c = 0; c < z.cols(); ++c) out << ",z" << (c + 1);
  if (!labels.empty()) out << ",label";
  out << '\n';
  for (int r = 0; r < z.rows(); ++r) {
    out << r;
    for (int c = 0; c < z.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", z(r, c));
      out << ',' << buf;
    }
    if (!labels.empty()) out << ',' << labels[r];
    out << '\n';
  }
}

}  // namespace dlme
