// Per-view similarity graph generation and reconstruction losses.
//
// Orientation: column j of S holds the weights used to reconstruct sample j
// (S >= 0, every column sums to one), so the reconstruction of X is S^T X.

#ifndef UPMGC_GRAPHGEN_H_
#define UPMGC_GRAPHGEN_H_

#include <span>
#include <string>
#include <string_view>

#include "upmgc/common.h"

namespace upmgc {

enum class Backend { kLsr, kKnn };

std::string_view to_string(Backend b);
Backend parse_backend(std::string_view name);

struct ReconstructionLoss {
  double value = 0.0;
  bool degenerate = false;  // set when ||X||_F == 0
};

struct SimilarityGraph {
  Matrix S;
  double loss = 0.0;
  Backend backend = Backend::kLsr;
  bool degenerate = false;
};

// ||X - S^T X||_F^2 / ||X||_F^2; returns 1 (degenerate) for X == 0.
ReconstructionLoss reconstruction_loss(const Matrix& X, const Matrix& S);

// Least-squares self-representation: Z = (X X^T + lambda I)^-1 X X^T, with
// a zeroed diagonal, symmetrized as (|Z| + |Z^T|) / 2 and column-normalized.
// The loss is measured on the zero-diagonal Z before normalization.
SimilarityGraph lsr_graph(const Matrix& X, double lambda);

// Gaussian-kernel kNN graph with bandwidth equal to the median pairwise
// distance. The loss is measured on the normalized S.
SimilarityGraph knn_graph(const Matrix& X, std::size_t k);

struct GraphParams {
  Backend backend = Backend::kLsr;
  double lambda = 0.01;
  std::size_t knn = 10;  // capped at n - 1

  bool operator==(const GraphParams&) const = default;
};

SimilarityGraph build_graph(const Matrix& X, const GraphParams& params);

// Index of the smallest loss, lowest index on ties.
std::size_t select_anchor_view(std::span<const double> losses);

}  // namespace upmgc

#endif  // UPMGC_GRAPHGEN_H_
