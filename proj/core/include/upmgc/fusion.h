// Inverse-loss view weighting and permutation-aligned graph fusion.

#ifndef UPMGC_FUSION_H_
#define UPMGC_FUSION_H_

#include <span>
#include <vector>

#include "upmgc/common.h"
#include "upmgc/graphgen.h"
#include "upmgc/matching.h"

namespace upmgc {

struct ViewWeights {
  std::vector<double> alpha;
  // Set when some loss was <= 0; the zero-loss views then share all weight.
  bool degenerate = false;
};

// alpha_j = (1 / L_j) / sum_i (1 / L_i).
ViewWeights view_weights(std::span<const double> losses);

// sum_i w_i P_i^T S_i P_i, computed by scattering S_i[r, c] into
// out[perm_i[r], perm_i[c]]. Weights need not be normalized.
Matrix fuse(std::span<const Matrix> graphs,
            std::span<const PermutationMap> perms,
            std::span<const double> weights);

Matrix fuse(std::span<const SimilarityGraph> graphs,
            std::span<const PermutationMap> perms, const ViewWeights& weights);

}  // namespace upmgc

#endif  // UPMGC_FUSION_H_
