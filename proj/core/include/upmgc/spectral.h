// Normalized spectral clustering (Ng-Jordan-Weiss) with a k-means++ stage.

#ifndef UPMGC_SPECTRAL_H_
#define UPMGC_SPECTRAL_H_

#include <cstdint>
#include <vector>

#include "upmgc/common.h"

namespace upmgc {

// (S + S^T) / 2.
Matrix symmetrize(const Matrix& S);

// L = I - D^-1/2 W D^-1/2 with D the row sums of W (zero degrees read as 1).
Matrix normalized_laplacian(const Matrix& W);

struct SpectralEmbedding {
  Matrix vectors;      // n x k, rows scaled to unit length
  Vector eigenvalues;  // k smallest eigenvalues of L, ascending
};

SpectralEmbedding spectral_embed(const Matrix& W, std::size_t k);

struct KMeansOptions {
  int restarts = 50;
  int max_iter = 300;
  std::uint64_t seed = 0;
  // Record the inertia after every Lloyd iteration of every restart.
  bool record_trace = false;
};

struct ClusterAssignment {
  std::vector<int> labels;  // 0-based cluster ids
  double inertia = 0.0;
  int restarts_used = 0;
  std::vector<std::vector<double>> inertia_trace;
};

ClusterAssignment kmeans(const Matrix& points, std::size_t k,
                         const KMeansOptions& opts = {});

// symmetrize -> spectral_embed -> kmeans.
ClusterAssignment cluster_graph(const Matrix& S_aligned, std::size_t k,
                                const KMeansOptions& opts = {});

}  // namespace upmgc

#endif  // UPMGC_SPECTRAL_H_
