#include "upmgc/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "upmgc/assignment.h"

namespace upmgc {
namespace {

// Relabels values to 0..m-1 in order of first appearance.
std::vector<std::size_t> compact(std::span<const int> labels, std::size_t& m) {
  std::map<int, std::size_t> ids;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = ids.try_emplace(labels[i], ids.size());
    out[i] = it->second;
  }
  m = ids.size();
  return out;
}

// Rows: truth classes, columns: predicted clusters.
Matrix contingency(std::span<const int> truth, std::span<const int> pred) {
  if (truth.size() != pred.size()) {
    throw ValidationError("metrics: truth and pred differ in length");
  }
  if (truth.empty()) throw ValidationError("metrics: empty labelings");
  std::size_t kt = 0, kp = 0;
  const auto t = compact(truth, kt);
  const auto p = compact(pred, kp);
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(kt),
                          static_cast<Eigen::Index>(kp));
  for (std::size_t i = 0; i < t.size(); ++i) {
    c(static_cast<Eigen::Index>(t[i]), static_cast<Eigen::Index>(p[i])) += 1.0;
  }
  return c;
}

double entropy(const Vector& counts, double n) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (counts(i) > 0.0) {
      const double q = counts(i) / n;
      h -= q * std::log(q);
    }
  }
  return h;
}

}  // namespace

double accuracy(std::span<const int> truth, std::span<const int> pred) {
  const Matrix c = contingency(truth, pred);
  const Eigen::Index k = std::max(c.rows(), c.cols());
  Matrix square = Matrix::Zero(k, k);
  square.topLeftCorner(c.rows(), c.cols()) = c;
  const IndexMap match = solve_assignment(square, AssignmentSense::kMaximize);
  double hits = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    hits += square(i, static_cast<Eigen::Index>(match[static_cast<std::size_t>(i)]));
  }
  return hits / static_cast<double>(truth.size());
}

double nmi(std::span<const int> truth, std::span<const int> pred) {
  const Matrix c = contingency(truth, pred);
  const double n = static_cast<double>(truth.size());
  const Vector rows = c.rowwise().sum();
  const Vector cols = c.colwise().sum().transpose();
  const double ht = entropy(rows, n);
  const double hp = entropy(cols, n);
  if (ht == 0.0 && hp == 0.0) return 1.0;  // both single-cluster
  if (ht == 0.0 || hp == 0.0) return 0.0;
  double mi = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      const double nij = c(i, j);
      if (nij > 0.0) mi += (nij / n) * std::log(n * nij / (rows(i) * cols(j)));
    }
  }
  const double value = mi / (0.5 * (ht + hp));
  return std::clamp(value, 0.0, 1.0);
}

double purity(std::span<const int> truth, std::span<const int> pred) {
  const Matrix c = contingency(truth, pred);
  return c.colwise().maxCoeff().sum() / static_cast<double>(truth.size());
}

double macc_at_q(const Matrix& scores, const IndexMap& true_map,
                 std::size_t q) {
  const auto m = static_cast<std::size_t>(scores.rows());
  if (scores.cols() != scores.rows() || true_map.size() != m) {
    throw ValidationError("macc_at_q: scores must be m x m with an m-entry map");
  }
  if (q < 1 || q > m) throw ValidationError("macc_at_q: need 1 <= q <= m");
  std::vector<std::size_t> order(m);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto row = static_cast<Eigen::Index>(i);
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(q),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        const double sa = scores(row, static_cast<Eigen::Index>(a));
                        const double sb = scores(row, static_cast<Eigen::Index>(b));
                        return sa > sb || (sa == sb && a < b);
                      });
    if (std::find(order.begin(), order.begin() + static_cast<long>(q),
                  true_map[i]) != order.begin() + static_cast<long>(q)) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(m);
}

MetricReport evaluate(std::span<const int> truth, std::span<const int> pred) {
  return {accuracy(truth, pred), nmi(truth, pred), purity(truth, pred)};
}

}  // namespace upmgc
