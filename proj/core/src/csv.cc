#include "upmgc/csv.h"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace upmgc::csv {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

std::optional<std::vector<double>> parse_row(std::string_view line) {
  std::vector<double> row;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto v = parse_double(line.substr(start, comma == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : comma - start));
    if (!v) return std::nullopt;
    row.push_back(*v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return row;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  return in;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto row = parse_row(line);
    if (!row) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ValidationError(where(path, line_no) + "non-numeric cell");
    }
    first = false;
    if (!rows.empty() && row->size() != rows.front().size()) {
      throw ValidationError(where(path, line_no) + "expected " +
                            std::to_string(rows.front().size()) +
                            " columns, found " + std::to_string(row->size()));
    }
    rows.push_back(std::move(*row));
  }
  if (rows.empty()) throw ValidationError(path.string() + ": no data rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view cell = trim(line);
    if (cell.empty()) continue;
    int v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      if (first) {
        first = false;
        continue;
      }
      throw ValidationError(where(path, line_no) + "label is not an integer");
    }
    first = false;
    labels.push_back(v);
  }
  return labels;
}

void write_matrix(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StageError("io", "cannot write " + path.string());
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_labels(std::span<const int> labels,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StageError("io", "cannot write " + path.string());
  for (int l : labels) out << l << '\n';
}

}  // namespace upmgc::csv
