// Multi-view datasets: ingestion from CSV manifests, synthetic generation
// with planted clusters, and construction of unpaired instances.
//
// Sample ordering convention: the first `n_paired` rows of every view are in
// known correspondence; the trailing n - n_paired rows of non-baseline views
// may be arbitrarily shuffled. Labels are always stored in the order of view
// 0 (the baseline view).

#ifndef UPMGC_DATASET_H_
#define UPMGC_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "upmgc/common.h"

namespace upmgc {

struct MultiViewDataset {
  std::string name;
  std::vector<Matrix> views;  // each n x d_v, one sample per row
  std::vector<int> labels;    // length n, view-0 order
  std::size_t n_paired = 0;
  // When present, true_permutations[v][i] is the row of the original
  // (fully paired) view v that now sits at row i. Entry 0 is the identity.
  std::optional<std::vector<IndexMap>> true_permutations;

  std::size_t n_samples() const { return labels.size(); }
  std::size_t n_views() const { return views.size(); }
  std::size_t n_unpaired() const { return n_samples() - n_paired; }
};

// Throws ValidationError describing the first violated invariant.
void validate(const MultiViewDataset& ds);

struct SynthConfig {
  std::size_t n_samples = 200;
  std::size_t n_views = 3;
  std::size_t n_clusters = 4;
  // Feature dimension per view. Empty means n_clusters + 2 for every view.
  std::vector<std::size_t> dims;
  // Distance between any two cluster centers, in within-cluster standard
  // deviations of the shared latent space.
  double separation = 8.0;
  // Standard deviation of the view-specific additive noise.
  double noise = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const SynthConfig&) const = default;
};

void validate(const SynthConfig& cfg);

// Samples a shared latent Gaussian mixture (one point per sample, cluster
// centers on a scaled simplex) and maps it into every view through a random
// view-specific linear map plus independent noise. Sample i belongs to
// cluster i mod n_clusters, so remainders are spread round-robin.
MultiViewDataset generate_synthetic(const SynthConfig& cfg);

// Keeps view 0 intact and shuffles the trailing round((1 - ratio) * n) rows
// of every other view with an independent uniform permutation.
MultiViewDataset apply_unpairing(const MultiViewDataset& ds,
                                 double alignment_ratio, std::uint64_t seed);

// Undoes the recorded shuffles. Requires true_permutations.
MultiViewDataset restore_pairing(const MultiViewDataset& ds);

// Per-feature z-score of every view (constant columns become zero).
void zscore_features(MultiViewDataset& ds);

// Loads a JSON manifest:
//   {"name": ..., "views": [csv, ...], "labels": csv,
//    "paired_prefix": int (optional), "paired_indices": [int, ...] (optional)}
// Relative paths resolve against the manifest's directory. When
// `paired_indices` is given, those rows are moved to the front of every view
// (in the listed order) and n_paired is set to their count.
MultiViewDataset load_dataset(const std::filesystem::path& manifest_path);

// Writes view_<v>.csv, labels.csv and manifest.json into `dir`.
void save_dataset(const MultiViewDataset& ds, const std::filesystem::path& dir);

}  // namespace upmgc

#endif  // UPMGC_DATASET_H_
