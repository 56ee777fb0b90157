// End-to-end unpaired multi-view graph clustering.
//
//   graphs per view -> inverse-loss weights -> anchor = argmin loss
//   -> fixed-point matching of the unpaired sub-blocks to the anchor
//   -> assignment rounding -> block permutations -> weighted fusion
//   -> spectral clustering -> metrics
//
// Plus alignment-ratio sweeps and a timing benchmark of the matching stage.

#ifndef UPMGC_PIPELINE_H_
#define UPMGC_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "upmgc/dataset.h"
#include "upmgc/graphgen.h"
#include "upmgc/matching.h"
#include "upmgc/metrics.h"

namespace upmgc {

struct RunConfig {
  // Exactly one data source.
  std::optional<std::filesystem::path> manifest;
  std::optional<SynthConfig> synth;  // its seed field is ignored

  GraphParams graph;
  double alignment_ratio = 1.0;
  std::size_t n_clusters = 0;  // 0: number of distinct labels
  std::uint64_t seed = 0;
  MatchOptions match;
  int kmeans_restarts = 50;
  std::vector<std::size_t> macc_q = {1, 10};
  bool zscore = false;
  // Fuse with identity permutations (the unaligned baseline).
  bool skip_matching = false;
  // Column-normalize the unpaired sub-blocks before matching.
  bool renormalize_subblocks = false;
  // Also write every view graph and the fused graph as CSV.
  bool export_graphs = false;
  std::filesystem::path output_dir;  // empty: write nothing

  bool operator==(const RunConfig&) const = default;
};

void validate(const RunConfig& cfg);

struct ViewMatchSummary {
  std::size_t view = 0;
  int iterations = 0;
  bool converged = false;
  double final_diff = 0.0;
  double epsilon_bound = 0.0;
  double final_objective = 0.0;
  std::string trace_path;
  // q -> MACC@q when ground truth exists, ranking candidates by the
  // assignment-reduced scores (top-1 is the discretized match).
  std::map<std::size_t, double> macc;
  // Same, ranking by the raw soft correspondence rows.
  std::map<std::size_t, double> macc_soft;

  bool operator==(const ViewMatchSummary&) const = default;
};

struct ClusteringReport {
  RunConfig config;
  std::string dataset;
  std::size_t n_samples = 0;
  std::size_t n_views = 0;
  std::size_t n_paired = 0;
  std::map<std::string, std::uint64_t> seeds;
  std::size_t anchor_view = 0;
  std::vector<double> losses;
  std::vector<double> weights;
  std::vector<ViewMatchSummary> matching;
  std::optional<MetricReport> metrics;  // absent without labels
  std::vector<int> assignment;          // predicted clusters, view-0 order
  std::map<std::string, double> timings_sec;

  bool operator==(const ClusteringReport&) const = default;
};

std::string to_json(const ClusteringReport& report, int indent = 2);
ClusteringReport report_from_json(const std::string& text);

std::string to_json(const RunConfig& cfg, int indent = 2);
RunConfig run_config_from_json(const std::string& text);

// Everything computed by one pipeline run.
struct PipelineResult {
  ClusteringReport report;
  std::vector<SimilarityGraph> graphs;
  std::vector<SoftCorrespondence> correspondences;  // per view; empty for anchor
  std::vector<PermutationMap> perms;
  Matrix fused;
};

// Stage seeds derived from the master seed: "data", "unpair", "kmeans".
std::map<std::string, std::uint64_t> stage_seeds(std::uint64_t master);

// Loads or generates the data, optionally z-scores it, and applies the
// configured unpairing.
MultiViewDataset prepare_dataset(const RunConfig& cfg);

// Runs the clustering on an already prepared dataset. When cfg.output_dir
// is set, matching traces are flushed there as soon as they exist.
PipelineResult cluster_dataset(const MultiViewDataset& ds,
                               const RunConfig& cfg);

// prepare_dataset + cluster_dataset; when cfg.output_dir is set, writes
// report.json, trace_view<j>.csv and assignment.csv there (plus
// graph_view<j>.csv and fused.csv with export_graphs).
ClusteringReport run_pipeline(const RunConfig& cfg);

void write_outputs(const PipelineResult& result,
                   const std::filesystem::path& dir);

struct SweepRow {
  double ratio = 0.0;
  int runs = 0;
  double acc_mean = 0.0, acc_std = 0.0;
  double nmi_mean = 0.0, nmi_std = 0.0;
  double purity_mean = 0.0, purity_std = 0.0;
  double macc1_mean = 0.0;  // NaN when nothing was matched
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::vector<ClusteringReport>> reports;  // [ratio][repeat]
};

// For each ratio, runs the pipeline `repeats` times with seeds cfg.seed + r
// and aggregates mean and sample standard deviation of every metric.
SweepResult run_sweep(const RunConfig& cfg, std::span<const double> ratios,
                      int repeats);

void write_sweep_csv(const SweepResult& sweep,
                     const std::filesystem::path& path);

// Parses "a:b:step" (inclusive) or "a,b,c".
std::vector<double> parse_ratio_list(const std::string& text);

struct BenchOptions {
  std::size_t n_views = 2;
  std::size_t n_clusters = 4;
  double separation = 8.0;
  int repeats = 3;  // the fastest repeat is kept
  std::uint64_t seed = 0;
  MatchOptions match;
};

struct BenchRow {
  std::size_t n = 0;
  double seconds = 0.0;  // matching + rounding, summed over non-anchor views
  int iterations = 0;    // fixed-point updates of the kept repeat
};

struct BenchResult {
  std::vector<BenchRow> rows;
  double slope = 0.0;  // least-squares slope of log(seconds) vs log(n)
  double r2 = 0.0;
};

// Times the matching stage on fully unpaired synthetic instances.
BenchResult run_bench(std::span<const std::size_t> sizes,
                      const BenchOptions& opts = {});

void write_bench_csv(const BenchResult& bench,
                     const std::filesystem::path& path);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace upmgc

#endif  // UPMGC_PIPELINE_H_
