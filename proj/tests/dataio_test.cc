#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "upmgc/dataset.h"
#include "upmgc/random.h"

namespace fs = std::filesystem;
using namespace upmgc;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("upmgc_dataio_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

bool bitwise_equal(const MultiViewDataset& a, const MultiViewDataset& b) {
  if (a.views.size() != b.views.size() || a.labels != b.labels ||
      a.n_paired != b.n_paired || a.true_permutations != b.true_permutations)
    return false;
  for (std::size_t v = 0; v < a.views.size(); ++v)
    if (a.views[v].rows() != b.views[v].rows() ||
        a.views[v].cols() != b.views[v].cols() || a.views[v] != b.views[v])
      return false;
  return true;
}

}  // namespace

TEST_CASE("load_dataset reads a two-view manifest") {
  const auto dir = scratch_dir("load");
  write_text(dir / "a.csv", "f1,f2\n1,2\n3,4\n5,6\n7,8\n");
  write_text(dir / "b.csv", "0.5\n1.5\n2.5\n3.5\n");
  write_text(dir / "y.csv", "0\n0\n1\n1\n");
  write_text(dir / "m.json",
             R"({"name": "toy", "views": ["a.csv", "b.csv"], "labels": "y.csv"})");
  const auto ds = load_dataset(dir / "m.json");
  CHECK(ds.name == "toy");
  CHECK(ds.n_samples() == 4);
  CHECK(ds.n_views() == 2);
  CHECK(ds.n_paired == 4);
  CHECK(ds.views[0].cols() == 2);
  CHECK(ds.views[0](3, 1) == 8.0);
  CHECK(ds.views[1](2, 0) == 2.5);
  REQUIRE(ds.true_permutations.has_value());
  for (const auto& p : *ds.true_permutations) CHECK(p == identity_map(4));
}

TEST_CASE("load_dataset rejects a row-count mismatch") {
  const auto dir = scratch_dir("rows");
  write_text(dir / "a.csv", "1\n2\n3\n4\n");
  write_text(dir / "b.csv", "1\n2\n3\n4\n5\n");
  write_text(dir / "y.csv", "0\n0\n1\n1\n");
  write_text(dir / "m.json", R"({"views": ["a.csv", "b.csv"], "labels": "y.csv"})");
  try {
    load_dataset(dir / "m.json");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("b.csv") != std::string::npos);
  }
}

TEST_CASE("load_dataset rejects a short label file") {
  const auto dir = scratch_dir("labels");
  write_text(dir / "a.csv", "1\n2\n3\n4\n");
  write_text(dir / "y.csv", "0\n0\n1\n");
  write_text(dir / "m.json", R"({"views": ["a.csv"], "labels": "y.csv"})");
  CHECK_THROWS_AS(load_dataset(dir / "m.json"), ValidationError);
}

TEST_CASE("load_dataset reports file and line for bad cells") {
  const auto dir = scratch_dir("cells");
  write_text(dir / "a.csv", "1,2\n3,x\n");
  write_text(dir / "y.csv", "0\n1\n");
  write_text(dir / "m.json", R"({"views": ["a.csv"], "labels": "y.csv"})");
  try {
    load_dataset(dir / "m.json");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("a.csv:2") != std::string::npos);
  }
}

TEST_CASE("load_dataset reports missing files") {
  const auto dir = scratch_dir("missing");
  write_text(dir / "y.csv", "0\n1\n");
  write_text(dir / "m.json", R"({"views": ["nope.csv"], "labels": "y.csv"})");
  try {
    load_dataset(dir / "m.json");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("nope.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(load_dataset(dir / "absent.json"), ValidationError);
}

TEST_CASE("load_dataset moves marked paired rows to the front") {
  const auto dir = scratch_dir("paired");
  write_text(dir / "a.csv", "0\n1\n2\n3\n");
  write_text(dir / "y.csv", "0\n1\n2\n3\n");
  write_text(dir / "m.json",
             R"({"views": ["a.csv"], "labels": "y.csv", "paired_indices": [3, 1]})");
  const auto ds = load_dataset(dir / "m.json");
  CHECK(ds.n_paired == 2);
  CHECK(ds.views[0](0, 0) == 3.0);
  CHECK(ds.views[0](1, 0) == 1.0);
  CHECK(ds.labels[0] == 3);
  CHECK(ds.labels[1] == 1);
}

TEST_CASE("save_dataset and load_dataset round-trip") {
  SynthConfig cfg;
  cfg.n_samples = 12;
  cfg.n_views = 2;
  cfg.n_clusters = 3;
  cfg.seed = 5;
  const auto ds = generate_synthetic(cfg);
  const auto dir = scratch_dir("roundtrip");
  save_dataset(ds, dir);
  const auto back = load_dataset(dir / "manifest.json");
  CHECK(back.labels == ds.labels);
  for (std::size_t v = 0; v < ds.n_views(); ++v)
    CHECK((back.views[v] - ds.views[v]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generate_synthetic builds separated clouds with shared labels") {
  SynthConfig cfg;
  cfg.n_samples = 8;
  cfg.n_views = 2;
  cfg.n_clusters = 2;
  cfg.separation = 10.0;
  cfg.seed = 3;
  const auto ds = generate_synthetic(cfg);
  CHECK(ds.n_samples() == 8);
  CHECK(ds.n_views() == 2);
  CHECK(std::count(ds.labels.begin(), ds.labels.end(), 0) == 4);
  CHECK(std::count(ds.labels.begin(), ds.labels.end(), 1) == 4);
  CHECK(ds.n_paired == 8);
  // Every sample is closer to its own cluster mean than to the other one.
  for (const auto& X : ds.views) {
    Vector mean[2] = {Vector::Zero(X.cols()), Vector::Zero(X.cols())};
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      mean[ds.labels[static_cast<std::size_t>(i)]] += X.row(i).transpose() / 4.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const int c = ds.labels[static_cast<std::size_t>(i)];
      CHECK((X.row(i).transpose() - mean[c]).norm() <
            (X.row(i).transpose() - mean[1 - c]).norm());
    }
  }
}

TEST_CASE("generate_synthetic assigns remainders round-robin") {
  SynthConfig cfg;
  cfg.n_samples = 10;
  cfg.n_clusters = 3;
  const auto ds = generate_synthetic(cfg);
  CHECK(std::count(ds.labels.begin(), ds.labels.end(), 0) == 4);
  CHECK(std::count(ds.labels.begin(), ds.labels.end(), 1) == 3);
  CHECK(std::count(ds.labels.begin(), ds.labels.end(), 2) == 3);
}

TEST_CASE("generate_synthetic is deterministic under seed") {
  SynthConfig cfg;
  cfg.n_samples = 30;
  cfg.noise = 0.1;
  cfg.seed = 11;
  CHECK(bitwise_equal(generate_synthetic(cfg), generate_synthetic(cfg)));
  auto other = cfg;
  other.seed = 12;
  CHECK_FALSE(bitwise_equal(generate_synthetic(cfg), generate_synthetic(other)));
}

TEST_CASE("SynthConfig validation") {
  SynthConfig cfg;
  cfg.n_clusters = 1;
  CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
  cfg = SynthConfig{};
  cfg.n_views = 0;
  CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
  cfg = SynthConfig{};
  cfg.separation = -1.0;
  CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
}

TEST_CASE("apply_unpairing with ratio 1 is a no-op") {
  SynthConfig cfg;
  cfg.n_samples = 20;
  const auto ds = generate_synthetic(cfg);
  const auto out = apply_unpairing(ds, 1.0, 9);
  CHECK(bitwise_equal(ds, out));
}

TEST_CASE("apply_unpairing with ratio 0 shuffles every non-anchor row") {
  SynthConfig cfg;
  cfg.n_samples = 4;
  cfg.n_clusters = 2;
  const auto ds = generate_synthetic(cfg);
  const auto out = apply_unpairing(ds, 0.0, 1);
  CHECK(out.n_paired == 0);
  CHECK(out.views[0] == ds.views[0]);
  CHECK((*out.true_permutations)[0] == identity_map(4));
  for (std::size_t v = 1; v < out.n_views(); ++v)
    CHECK(is_permutation((*out.true_permutations)[v]));
}

TEST_CASE("apply_unpairing with ratio 0.5 keeps the leading half") {
  SynthConfig cfg;
  cfg.n_samples = 10;
  cfg.n_clusters = 2;
  const auto ds = generate_synthetic(cfg);
  const auto out = apply_unpairing(ds, 0.5, 2);
  CHECK(out.n_paired == 5);
  for (const auto& p : *out.true_permutations) {
    for (std::size_t i = 0; i < 5; ++i) CHECK(p[i] == i);
    for (std::size_t i = 5; i < 10; ++i) CHECK(p[i] >= 5);
  }
  for (std::size_t v = 0; v < out.n_views(); ++v)
    CHECK(out.views[v].topRows(5) == ds.views[v].topRows(5));
}

TEST_CASE("apply_unpairing rejects ratios outside [0, 1]") {
  const auto ds = generate_synthetic(SynthConfig{});
  CHECK_THROWS_AS(apply_unpairing(ds, -0.1, 0), ValidationError);
  CHECK_THROWS_AS(apply_unpairing(ds, 1.5, 0), ValidationError);
}

TEST_CASE("unpaired rows follow the recorded map and restore exactly") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthConfig cfg;
    cfg.n_samples = 37;
    cfg.n_views = 4;
    cfg.seed = seed;
    const auto ds = generate_synthetic(cfg);
    const double ratio = 0.25 * static_cast<double>(seed % 4);
    const auto out = apply_unpairing(ds, ratio, seed + 100);
    for (std::size_t v = 0; v < out.n_views(); ++v) {
      const auto& p = (*out.true_permutations)[v];
      for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(out.views[v].row(static_cast<Eigen::Index>(i)) ==
              ds.views[v].row(static_cast<Eigen::Index>(p[i])));
    }
    CHECK(bitwise_equal(restore_pairing(out), ds));
    // Same seed, same shuffles.
    CHECK(apply_unpairing(ds, ratio, seed + 100).true_permutations ==
          out.true_permutations);
  }
}

TEST_CASE("zscore_features standardizes columns and leaves constants at zero") {
  MultiViewDataset ds;
  ds.views = {Matrix(4, 2)};
  ds.views[0] << 1, 5, 2, 5, 3, 5, 4, 5;
  ds.labels = {0, 0, 1, 1};
  ds.n_paired = 4;
  zscore_features(ds);
  CHECK(std::abs(ds.views[0].col(0).mean()) < 1e-12);
  CHECK(ds.views[0].col(1).cwiseAbs().maxCoeff() == 0.0);
}
