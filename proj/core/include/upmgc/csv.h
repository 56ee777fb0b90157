// Minimal numeric CSV reading/writing used by the dataset loader and the
// report writers.

#ifndef UPMGC_CSV_H_
#define UPMGC_CSV_H_

#include <filesystem>
#include <span>
#include <vector>

#include "upmgc/common.h"

namespace upmgc::csv {

// Comma-separated decimal numbers, one sample per line. A first row that
// does not parse as numbers is taken as a header. Blank lines are skipped.
// Errors name the file and 1-based line.
Matrix read_matrix(const std::filesystem::path& path);

// One integer per line, optional header.
std::vector<int> read_labels(const std::filesystem::path& path);

void write_matrix(const Matrix& m, const std::filesystem::path& path);
void write_labels(std::span<const int> labels, const std::filesystem::path& path);

}  // namespace upmgc::csv

#endif  // UPMGC_CSV_H_
