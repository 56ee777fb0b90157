#include "upmgc/graphgen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "upmgc/matching.h"

namespace upmgc {

std::string_view to_string(Backend b) {
  return b == Backend::kLsr ? "lsr" : "knn";
}

Backend parse_backend(std::string_view name) {
  if (name == "lsr") return Backend::kLsr;
  if (name == "knn") return Backend::kKnn;
  throw ValidationError("unknown graph backend '" + std::string(name) +
                        "' (expected lsr or knn)");
}

ReconstructionLoss reconstruction_loss(const Matrix& X, const Matrix& S) {
  if (S.rows() != X.rows() || S.cols() != X.rows()) {
    throw ValidationError("reconstruction_loss: S must be n x n for n x d X");
  }
  const double denom = X.squaredNorm();
  if (denom == 0.0) return {1.0, true};
  return {(X - S.transpose() * X).squaredNorm() / denom, false};
}

namespace {

Matrix uniform_graph(Eigen::Index n) {
  return Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

}  // namespace

SimilarityGraph lsr_graph(const Matrix& X, double lambda) {
  const Eigen::Index n = X.rows();
  if (n < 2) throw ValidationError("lsr_graph: need at least 2 samples");
  if (!(lambda > 0.0)) throw ValidationError("lsr_graph: lambda must be > 0");

  SimilarityGraph g;
  g.backend = Backend::kLsr;
  if (X.squaredNorm() == 0.0) {
    g.S = uniform_graph(n);
    g.loss = 1.0;
    g.degenerate = true;
    return g;
  }

  const Matrix gram = X * X.transpose();
  Matrix regularized = gram;
  regularized.diagonal().array() += lambda;
  Matrix Z = regularized.ldlt().solve(gram);
  Z.diagonal().setZero();

  g.loss = reconstruction_loss(X, Z).value;
  const Matrix A = Z.cwiseAbs();
  g.S = column_normalize(0.5 * (A + A.transpose()));
  return g;
}

SimilarityGraph knn_graph(const Matrix& X, std::size_t k) {
  const Eigen::Index n = X.rows();
  const auto un = static_cast<std::size_t>(n);
  if (k < 1 || k >= un) {
    throw ValidationError("knn_graph: need 1 <= k < n (k=" +
                          std::to_string(k) + ", n=" + std::to_string(un) + ")");
  }
  SimilarityGraph g;
  g.backend = Backend::kKnn;

  // Pairwise squared distances.
  const Vector sq = X.rowwise().squaredNorm();
  Matrix d2 = (-2.0 * X * X.transpose()).colwise() + sq;
  d2.rowwise() += sq.transpose();
  d2 = d2.cwiseMax(0.0);
  d2.diagonal().setZero();

  std::vector<double> dists;
  dists.reserve(un * (un - 1) / 2);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) dists.push_back(std::sqrt(d2(i, j)));
  std::sort(dists.begin(), dists.end());
  const std::size_t m = dists.size();
  double sigma = m % 2 == 1 ? dists[m / 2]
                            : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
  if (sigma == 0.0) {
    auto pos = std::upper_bound(dists.begin(), dists.end(), 0.0);
    if (pos == dists.end()) {
      // All points coincide.
      g.S = uniform_graph(n);
      g.loss = X.squaredNorm() == 0.0 ? 1.0 : 0.0;
      g.degenerate = X.squaredNorm() == 0.0;
      return g;
    }
    sigma = *pos;
  }

  Matrix W = Matrix::Zero(n, n);
  std::vector<std::size_t> order;
  for (Eigen::Index i = 0; i < n; ++i) {
    order.resize(un);
    std::iota(order.begin(), order.end(), std::size_t{0});
    order.erase(order.begin() + i);
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(k),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        const double da = d2(i, static_cast<Eigen::Index>(a));
                        const double db = d2(i, static_cast<Eigen::Index>(b));
                        return da < db || (da == db && a < b);
                      });
    for (std::size_t t = 0; t < k; ++t) {
      const auto j = static_cast<Eigen::Index>(order[t]);
      W(i, j) = std::exp(-d2(i, j) / (2.0 * sigma * sigma));
    }
  }
  g.S = column_normalize(0.5 * (W + W.transpose()));
  const ReconstructionLoss loss = reconstruction_loss(X, g.S);
  g.loss = loss.value;
  g.degenerate = loss.degenerate;
  return g;
}

SimilarityGraph build_graph(const Matrix& X, const GraphParams& params) {
  if (params.backend == Backend::kLsr) return lsr_graph(X, params.lambda);
  const auto n = static_cast<std::size_t>(X.rows());
  if (n < 2) throw ValidationError("knn_graph: need at least 2 samples");
  return knn_graph(X, std::min(params.knn, n - 1));
}

std::size_t select_anchor_view(std::span<const double> losses) {
  if (losses.empty()) throw ValidationError("select_anchor_view: no losses");
  return static_cast<std::size_t>(
      std::min_element(losses.begin(), losses.end()) - losses.begin());
}

}  // namespace upmgc
