#include "upmgc/fusion.h"

#include <string>

namespace upmgc {

ViewWeights view_weights(std::span<const double> losses) {
  if (losses.empty()) throw ValidationError("view_weights: no losses");
  ViewWeights w;
  w.alpha.assign(losses.size(), 0.0);
  std::size_t zero_count = 0;
  for (double l : losses) zero_count += l <= 0.0 ? 1 : 0;
  if (zero_count > 0) {
    // Limit of 1/L weighting as some losses go to zero.
    w.degenerate = true;
    for (std::size_t j = 0; j < losses.size(); ++j) {
      if (losses[j] <= 0.0) w.alpha[j] = 1.0 / static_cast<double>(zero_count);
    }
    return w;
  }
  double inv_sum = 0.0;
  for (double l : losses) inv_sum += 1.0 / l;
  for (std::size_t j = 0; j < losses.size(); ++j) {
    w.alpha[j] = 1.0 / (losses[j] * inv_sum);
  }
  return w;
}

Matrix fuse(std::span<const Matrix> graphs,
            std::span<const PermutationMap> perms,
            std::span<const double> weights) {
  if (graphs.empty()) throw ValidationError("fuse: no graphs");
  if (graphs.size() != perms.size() || graphs.size() != weights.size()) {
    throw ValidationError("fuse: graphs, perms and weights differ in count");
  }
  const Eigen::Index n = graphs.front().rows();
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t v = 0; v < graphs.size(); ++v) {
    const Matrix& S = graphs[v];
    const IndexMap& p = perms[v].perm;
    if (S.rows() != n || S.cols() != n ||
        p.size() != static_cast<std::size_t>(n)) {
      throw ValidationError("fuse: size mismatch in view " + std::to_string(v));
    }
    if (!is_permutation(p)) {
      throw ValidationError("fuse: perm of view " + std::to_string(v) +
                            " is not a bijection");
    }
    const double w = weights[v];
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto pc = static_cast<Eigen::Index>(p[static_cast<std::size_t>(c)]);
      for (Eigen::Index r = 0; r < n; ++r) {
        out(static_cast<Eigen::Index>(p[static_cast<std::size_t>(r)]), pc) +=
            w * S(r, c);
      }
    }
  }
  return out;
}

Matrix fuse(std::span<const SimilarityGraph> graphs,
            std::span<const PermutationMap> perms, const ViewWeights& weights) {
  std::vector<Matrix> mats;
  mats.reserve(graphs.size());
  for (const auto& g : graphs) mats.push_back(g.S);
  return fuse(std::span<const Matrix>(mats), perms,
              std::span<const double>(weights.alpha));
}

}  // namespace upmgc
