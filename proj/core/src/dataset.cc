#include "upmgc/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "upmgc/csv.h"
#include "upmgc/random.h"

namespace upmgc {

using nlohmann::json;

void validate(const MultiViewDataset& ds) {
  const std::size_t n = ds.n_samples();
  if (ds.views.empty()) throw ValidationError(ds.name + ": dataset has no views");
  for (std::size_t v = 0; v < ds.views.size(); ++v) {
    if (static_cast<std::size_t>(ds.views[v].rows()) != n) {
      throw ValidationError(ds.name + ": view " + std::to_string(v) + " has " +
                            std::to_string(ds.views[v].rows()) +
                            " rows but there are " + std::to_string(n) +
                            " labels");
    }
  }
  if (ds.n_paired > n) throw ValidationError(ds.name + ": n_paired exceeds n");
  if (!ds.true_permutations) return;
  const auto& perms = *ds.true_permutations;
  if (perms.size() != ds.views.size()) {
    throw ValidationError(ds.name + ": one true permutation per view required");
  }
  for (std::size_t v = 0; v < perms.size(); ++v) {
    const IndexMap& p = perms[v];
    if (p.size() != n || !is_permutation(p)) {
      throw ValidationError(ds.name + ": true permutation of view " +
                            std::to_string(v) + " is not a bijection on n");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if ((i < ds.n_paired || v == 0) && p[i] != i) {
        throw ValidationError(ds.name + ": true permutation of view " +
                              std::to_string(v) + " moves a paired sample");
      }
    }
  }
}

void validate(const SynthConfig& cfg) {
  if (cfg.n_clusters < 2) throw ValidationError("synth: need at least 2 clusters");
  if (cfg.n_samples < cfg.n_clusters) {
    throw ValidationError("synth: need at least one sample per cluster");
  }
  if (cfg.n_views < 1) throw ValidationError("synth: need at least 1 view");
  if (!cfg.dims.empty() && cfg.dims.size() != cfg.n_views) {
    throw ValidationError("synth: dims must list one dimension per view");
  }
  for (std::size_t d : cfg.dims) {
    if (d < 1) throw ValidationError("synth: view dimensions must be >= 1");
  }
  if (!(cfg.separation >= 0.0) || !std::isfinite(cfg.separation)) {
    throw ValidationError("synth: separation must be finite and >= 0");
  }
  if (!(cfg.noise >= 0.0) || !std::isfinite(cfg.noise)) {
    throw ValidationError("synth: noise must be finite and >= 0");
  }
}

MultiViewDataset generate_synthetic(const SynthConfig& cfg) {
  validate(cfg);
  const auto n = static_cast<Eigen::Index>(cfg.n_samples);
  const auto k = static_cast<Eigen::Index>(cfg.n_clusters);
  Rng rng(derive_seed(cfg.seed, "synthetic"));
  std::normal_distribution<double> normal;
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
  };

  // Centers on scaled coordinate axes: pairwise distance `separation`, and
  // linearly independent so that self-representation graphs can tell the
  // clusters apart.
  const Matrix centers = (cfg.separation / std::sqrt(2.0)) * Matrix::Identity(k, k);

  MultiViewDataset ds;
  ds.name = "synthetic";
  ds.labels.resize(cfg.n_samples);
  Matrix latent = gaussian(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = i % k;
    ds.labels[static_cast<std::size_t>(i)] = static_cast<int>(c);
    latent.row(i) += centers.row(c);
  }
  for (std::size_t v = 0; v < cfg.n_views; ++v) {
    const auto d = static_cast<Eigen::Index>(
        cfg.dims.empty() ? cfg.n_clusters + 2 : cfg.dims[v]);
    const Matrix mixing = gaussian(k, d) / std::sqrt(static_cast<double>(k));
    ds.views.push_back(latent * mixing + cfg.noise * gaussian(n, d));
  }
  ds.n_paired = cfg.n_samples;
  ds.true_permutations.emplace(cfg.n_views, identity_map(cfg.n_samples));
  return ds;
}

MultiViewDataset apply_unpairing(const MultiViewDataset& ds,
                                 double alignment_ratio, std::uint64_t seed) {
  if (!(alignment_ratio >= 0.0 && alignment_ratio <= 1.0)) {
    throw ValidationError("alignment ratio must lie in [0, 1]");
  }
  validate(ds);
  const std::size_t n = ds.n_samples();
  if (ds.n_paired != n) {
    throw ValidationError(ds.name + ": unpairing requires a fully paired dataset");
  }
  const auto unpaired = static_cast<std::size_t>(
      std::llround((1.0 - alignment_ratio) * static_cast<double>(n)));
  MultiViewDataset out = ds;
  out.n_paired = n - unpaired;
  out.true_permutations.emplace(ds.n_views(), identity_map(n));
  for (std::size_t v = 1; v < ds.n_views(); ++v) {
    IndexMap& p = (*out.true_permutations)[v];
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(v)));
    std::shuffle(p.begin() + static_cast<long>(out.n_paired), p.end(), rng);
    for (std::size_t i = out.n_paired; i < n; ++i) {
      out.views[v].row(static_cast<Eigen::Index>(i)) =
          ds.views[v].row(static_cast<Eigen::Index>(p[i]));
    }
  }
  return out;
}

MultiViewDataset restore_pairing(const MultiViewDataset& ds) {
  if (!ds.true_permutations) {
    throw ValidationError(ds.name + ": no recorded permutations to undo");
  }
  validate(ds);
  MultiViewDataset out = ds;
  for (std::size_t v = 0; v < ds.n_views(); ++v) {
    const IndexMap& p = (*ds.true_permutations)[v];
    for (std::size_t i = 0; i < p.size(); ++i) {
      out.views[v].row(static_cast<Eigen::Index>(p[i])) =
          ds.views[v].row(static_cast<Eigen::Index>(i));
    }
  }
  out.n_paired = ds.n_samples();
  out.true_permutations.emplace(ds.n_views(), identity_map(ds.n_samples()));
  return out;
}

void zscore_features(MultiViewDataset& ds) {
  for (Matrix& X : ds.views) {
    const Eigen::RowVectorXd mean = X.colwise().mean();
    X.rowwise() -= mean;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double sd = std::sqrt(X.col(j).squaredNorm() /
                                  static_cast<double>(X.rows()));
      if (sd > 0.0) {
        X.col(j) /= sd;
      } else {
        X.col(j).setZero();
      }
    }
  }
}

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open manifest");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void reorder_rows(Matrix& X, const IndexMap& order) {
  Matrix out(X.rows(), X.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        X.row(static_cast<Eigen::Index>(order[i]));
  }
  X = std::move(out);
}

}  // namespace

MultiViewDataset load_dataset(const std::filesystem::path& manifest_path) {
  const json m = read_json(manifest_path);
  const auto base = manifest_path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  auto fail = [&](const std::string& what) {
    return ValidationError(manifest_path.string() + ": " + what);
  };
  if (!m.is_object()) throw fail("manifest must be a JSON object");
  if (!m.contains("views") || !m["views"].is_array() || m["views"].empty()) {
    throw fail("'views' must be a non-empty array of CSV paths");
  }
  if (!m.contains("labels") || !m["labels"].is_string()) {
    throw fail("'labels' must be a CSV path");
  }

  MultiViewDataset ds;
  ds.name = m.value("name", manifest_path.stem().string());
  std::vector<std::filesystem::path> view_paths;
  for (const auto& v : m["views"]) {
    if (!v.is_string()) throw fail("'views' entries must be strings");
    view_paths.push_back(resolve(v.get<std::string>()));
    ds.views.push_back(csv::read_matrix(view_paths.back()));
    if (ds.views.back().rows() != ds.views.front().rows()) {
      throw ValidationError(
          view_paths.back().string() + ": row-count mismatch: " +
          std::to_string(ds.views.back().rows()) + " rows, but " +
          view_paths.front().string() + " has " +
          std::to_string(ds.views.front().rows()));
    }
  }
  const auto labels_path = resolve(m["labels"].get<std::string>());
  ds.labels = csv::read_labels(labels_path);
  const auto n = static_cast<std::size_t>(ds.views.front().rows());
  if (ds.labels.size() != n) {
    throw ValidationError(labels_path.string() + ": length mismatch: " +
                          std::to_string(ds.labels.size()) +
                          " labels for " + std::to_string(n) + " samples");
  }

  ds.n_paired = n;
  if (m.contains("paired_prefix") && m.contains("paired_indices")) {
    throw fail("give at most one of 'paired_prefix' and 'paired_indices'");
  }
  if (m.contains("paired_prefix")) {
    const auto& p = m["paired_prefix"];
    if (!p.is_number_integer() || p.get<long long>() < 0 ||
        static_cast<std::size_t>(p.get<long long>()) > n) {
      throw fail("'paired_prefix' must be an integer in [0, n]");
    }
    ds.n_paired = static_cast<std::size_t>(p.get<long long>());
  } else if (m.contains("paired_indices")) {
    IndexMap order;
    std::set<std::size_t> seen;
    for (const auto& e : m["paired_indices"]) {
      if (!e.is_number_integer() || e.get<long long>() < 0 ||
          static_cast<std::size_t>(e.get<long long>()) >= n ||
          !seen.insert(e.get<std::size_t>()).second) {
        throw fail("'paired_indices' must be distinct integers in [0, n)");
      }
      order.push_back(e.get<std::size_t>());
    }
    ds.n_paired = order.size();
    for (std::size_t i = 0; i < n; ++i)
      if (!seen.count(i)) order.push_back(i);
    for (Matrix& X : ds.views) reorder_rows(X, order);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = ds.labels[order[i]];
    ds.labels = std::move(labels);
  }
  if (ds.n_paired == n) {
    ds.true_permutations.emplace(ds.n_views(), identity_map(n));
  }
  validate(ds);
  return ds;
}

void save_dataset(const MultiViewDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json m;
  m["name"] = ds.name;
  m["views"] = json::array();
  for (std::size_t v = 0; v < ds.n_views(); ++v) {
    const std::string file = "view_" + std::to_string(v) + ".csv";
    csv::write_matrix(ds.views[v], dir / file);
    m["views"].push_back(file);
  }
  csv::write_labels(ds.labels, dir / "labels.csv");
  m["labels"] = "labels.csv";
  if (ds.n_paired != ds.n_samples()) m["paired_prefix"] = ds.n_paired;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw StageError("io", "cannot write " + (dir / "manifest.json").string());
  out << m.dump(2) << '\n';
}

}  // namespace upmgc
