#include "upmgc/assignment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace upmgc {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct HungarianResult {
  IndexMap row_to_col;
  std::vector<double> u, v;  // row and column potentials
};

// Shortest augmenting path Hungarian method on a square cost matrix.
HungarianResult hungarian_min(const Matrix& cost) {
  const std::size_t n = static_cast<std::size_t>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based with a virtual column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_to(n + 1);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(min_to.begin(), min_to.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < min_to[j]) {
          min_to[j] = cur;
          way[j] = j0;
        }
        if (min_to[j] < delta) {
          delta = min_to[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_to[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  HungarianResult r;
  r.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) r.row_to_col[owner[j] - 1] = j - 1;
  r.u.assign(u.begin() + 1, u.end());
  r.v.assign(v.begin() + 1, v.end());
  return r;
}

// Walks the optimal face (perfect matchings of the tight-edge graph) to its
// lexicographically smallest member, fixing rows in order.
class LexRefiner {
 public:
  LexRefiner(std::vector<std::vector<char>> tight, IndexMap match)
      : n_(match.size()), tight_(std::move(tight)), row_col_(std::move(match)),
        col_row_(n_) {
    for (std::size_t i = 0; i < n_; ++i) col_row_[row_col_[i]] = i;
  }

  IndexMap run() {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < row_col_[i]; ++j) {
        if (!tight_[i][j] || col_row_[j] < i) continue;
        if (reroute(i, j)) break;
      }
    }
    return row_col_;
  }

 private:
  // Tries to give column j to row i; the displaced row must reach i's old
  // column through an alternating path over rows > i.
  bool reroute(std::size_t i, std::size_t j) {
    const std::size_t target = row_col_[i];
    const std::size_t start = col_row_[j];
    std::vector<std::size_t> parent_col(n_, kNone);  // per row: column taken
    std::vector<std::size_t> prev_row(n_, kNone);    // per column: row before
    std::vector<char> seen_col(n_, 0);
    std::vector<std::size_t> queue{start};
    seen_col[j] = 1;
    seen_col[target] = 0;
    std::size_t found = kNone;
    for (std::size_t head = 0; head < queue.size() && found == kNone; ++head) {
      const std::size_t r = queue[head];
      for (std::size_t c = 0; c < n_; ++c) {
        if (!tight_[r][c] || seen_col[c]) continue;
        if (c != target && col_row_[c] <= i) continue;  // owned by a fixed row
        seen_col[c] = 1;
        prev_row[c] = r;
        if (c == target) {
          found = c;
          break;
        }
        queue.push_back(col_row_[c]);
      }
    }
    if (found == kNone) return false;
    // Unwind: each row on the path takes the column that led out of it.
    std::size_t c = found;
    while (true) {
      const std::size_t r = prev_row[c];
      const std::size_t old = row_col_[r];
      row_col_[r] = c;
      col_row_[c] = r;
      if (r == start) break;
      c = old;
    }
    row_col_[i] = j;
    col_row_[j] = i;
    return true;
  }

  std::size_t n_;
  std::vector<std::vector<char>> tight_;
  IndexMap row_col_;
  IndexMap col_row_;
};

}  // namespace

AssignmentSolution solve_assignment_with_duals(const Matrix& weights,
                                               AssignmentSense sense,
                                               double tie_tol) {
  if (weights.rows() != weights.cols()) {
    throw ValidationError("solve_assignment: matrix must be square");
  }
  if (!weights.allFinite()) {
    throw ValidationError("solve_assignment: non-finite entries");
  }
  const std::size_t n = static_cast<std::size_t>(weights.rows());
  if (n == 0) return {};
  const Matrix cost =
      sense == AssignmentSense::kMaximize ? Matrix(-weights) : weights;
  HungarianResult h = hungarian_min(cost);

  const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const double tol = tie_tol * scale * static_cast<double>(n);
  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double reduced = cost(i, j) - h.u[i] - h.v[j];
      tight[i][j] = reduced <= tol ? 1 : 0;
    }
    tight[i][h.row_to_col[i]] = 1;
  }
  AssignmentSolution sol;
  sol.row_to_col = LexRefiner(std::move(tight), std::move(h.row_to_col)).run();
  const double sign = sense == AssignmentSense::kMaximize ? -1.0 : 1.0;
  sol.row_potential = sign * Eigen::Map<const Vector>(h.u.data(), h.u.size());
  sol.col_potential = sign * Eigen::Map<const Vector>(h.v.data(), h.v.size());
  return sol;
}

IndexMap solve_assignment(const Matrix& weights, AssignmentSense sense,
                          double tie_tol) {
  return solve_assignment_with_duals(weights, sense, tie_tol).row_to_col;
}

Matrix AssignmentSolution::reduced(const Matrix& weights) const {
  Matrix r = weights;
  r.colwise() -= row_potential;
  r.rowwise() -= col_potential.transpose();
  return r;
}

}  // namespace upmgc
