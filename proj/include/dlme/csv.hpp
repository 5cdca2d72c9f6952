#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlme/datasets.hpp"
#include "dlme/matrix.hpp"

namespace dlme {

// Loads a rectangular numeric CSV (comma separator, '.' decimal point,
// optional header auto-detected when the first row is non-numeric). The label
// column may be named (header) or given as a 0-based index; its values must
// be whole numbers. Parse errors carry the offending row and column.
Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column = {});

// Writes features (header f0..fD-1) plus an optional trailing label column.
void save_csv(const std::string& path, const Matrix& x, const std::vector<int>& labels = {},
              const std::vector<std::string>& feature_names = {});

// Embedding layout used by the trainer CLI: id, z1..zd, label.
void save_embedding_csv(const std::string& path, const Matrix& z, const std::vector<int>& labels);
// Reads that layout back (id column dropped); accepts any numeric CSV whose
// label column is identified as for load_csv.
}  // namespace dlme
