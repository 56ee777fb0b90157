#include <random>

#include "doctest.h"
#include "oracles.h"
#include "upmgc/metrics.h"
#include "upmgc/spectral.h"

using namespace upmgc;

namespace {

Matrix block_graph(const std::vector<int>& sizes, double within = 1.0) {
  int n = 0;
  for (int s : sizes) n += s;
  Matrix W = Matrix::Zero(n, n);
  int off = 0;
  for (int s : sizes) {
    W.block(off, off, s, s).setConstant(within);
    off += s;
  }
  W.diagonal().setZero();
  return W;
}

std::vector<int> block_labels(const std::vector<int>& sizes) {
  std::vector<int> y;
  for (std::size_t b = 0; b < sizes.size(); ++b) y.insert(y.end(), sizes[b], static_cast<int>(b));
  return y;
}

}  // namespace

TEST_CASE("symmetrize examples") {
  Matrix A(2, 2);
  A << 0, 1, 0, 0;
  Matrix want(2, 2);
  want << 0, 0.5, 0.5, 0;
  CHECK(symmetrize(A) == want);
  CHECK(symmetrize(want) == want);
  std::mt19937_64 rng(1);
  const Matrix R = oracle::random_matrix(rng, 5, 5);
  const Matrix S = symmetrize(R);
  CHECK(S == S.transpose());
}

TEST_CASE("spectral_embed separates two cliques") {
  const Matrix W = block_graph({4, 5});
  const auto e = spectral_embed(W, 2);
  CHECK(e.vectors.rows() == 9);
  CHECK(e.vectors.cols() == 2);
  for (int i = 0; i < 9; ++i) CHECK(e.vectors.row(i).norm() == doctest::Approx(1.0));
  for (int i = 1; i < 4; ++i) CHECK((e.vectors.row(i) - e.vectors.row(0)).norm() < 1e-8);
  for (int i = 5; i < 9; ++i) CHECK((e.vectors.row(i) - e.vectors.row(4)).norm() < 1e-8);
  CHECK((e.vectors.row(0) - e.vectors.row(4)).norm() > 0.5);
}

TEST_CASE("spectral_embed with k = 1 on a connected graph is constant") {
  std::mt19937_64 rng(2);
  const Matrix W = symmetrize(oracle::random_matrix(rng, 8, 8, 0.1, 1.0));
  const auto e = spectral_embed(W, 1);
  CHECK(e.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
  for (int i = 1; i < 8; ++i) CHECK(std::abs(e.vectors(i, 0) - e.vectors(0, 0)) < 1e-8);
}

TEST_CASE("Laplacian eigenvalues agree with the Jacobi oracle and lie in [0, 2]") {
  std::mt19937_64 rng(3);
  for (int n : {3, 10, 25, 50}) {
    Matrix W = symmetrize(oracle::random_matrix(rng, n, n, 0.0, 1.0));
    W.diagonal().setZero();
    const Matrix L = normalized_laplacian(W);
    const auto ev = oracle::jacobi_eigenvalues(L);
    const auto e = spectral_embed(W, static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(e.eigenvalues(i) - ev[static_cast<std::size_t>(i)]) < 1e-8);
      CHECK(e.eigenvalues(i) >= -1e-8);
      CHECK(e.eigenvalues(i) <= 2.0 + 1e-8);
    }
  }
}

TEST_CASE("near-zero eigenvalues count connected components") {
  for (const auto& sizes : std::vector<std::vector<int>>{{3, 4}, {2, 2, 5}, {3, 3, 3, 3}}) {
    const Matrix W = block_graph(sizes, 0.7);
    const int n = static_cast<int>(W.rows());
    const auto ev = oracle::jacobi_eigenvalues(normalized_laplacian(W));
    std::size_t zeros = 0;
    for (double x : ev) zeros += std::abs(x) < 1e-8;
    CHECK(zeros == sizes.size());
    const auto e = spectral_embed(W, static_cast<std::size_t>(n));
    std::size_t zeros_lib = 0;
    for (int i = 0; i < n; ++i) zeros_lib += std::abs(e.eigenvalues(i)) < 1e-8;
    CHECK(zeros_lib == sizes.size());
  }
}

TEST_CASE("spectral_embed handles isolated nodes and validates input") {
  Matrix W = block_graph({3, 3});
  W.row(0).setZero();
  W.col(0).setZero();
  const auto e = spectral_embed(W, 2);
  CHECK(e.vectors.allFinite());
  CHECK_THROWS_AS(spectral_embed(W, 0), ValidationError);
  CHECK_THROWS_AS(spectral_embed(W, 7), ValidationError);
  Matrix neg = W;
  neg(1, 2) = neg(2, 1) = -1.0;
  CHECK_THROWS_AS(spectral_embed(neg, 2), ValidationError);
}

TEST_CASE("kmeans examples") {
  Matrix X(6, 1);
  X << 0, 0, 0, 100, 100, 100;
  const auto two = kmeans(X, 2);
  CHECK(two.inertia == 0.0);
  CHECK(two.labels[0] == two.labels[1]);
  CHECK(two.labels[1] == two.labels[2]);
  CHECK(two.labels[3] == two.labels[4]);
  CHECK(two.labels[0] != two.labels[3]);

  std::mt19937_64 rng(4);
  const Matrix P = oracle::random_matrix(rng, 7, 2);
  const auto all = kmeans(P, 7);
  CHECK(all.inertia == doctest::Approx(0.0).scale(1.0));
  std::vector<int> sorted(all.labels);
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6});

  KMeansOptions opts;
  opts.seed = 17;
  const Matrix Q = oracle::random_matrix(rng, 60, 3);
  const auto a = kmeans(Q, 4, opts);
  const auto b = kmeans(Q, 4, opts);
  CHECK(a.labels == b.labels);
  CHECK(a.inertia == b.inertia);
  CHECK(a.restarts_used == 50);
  CHECK_THROWS_AS(kmeans(Q, 61, opts), ValidationError);
  CHECK_THROWS_AS(kmeans(Q, 0, opts), ValidationError);
}

TEST_CASE("kmeans inertia never increases across Lloyd iterations") {
  std::mt19937_64 rng(5);
  KMeansOptions opts;
  opts.restarts = 10;
  opts.record_trace = true;
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix X = oracle::random_matrix(rng, 80, 2);
    opts.seed = static_cast<std::uint64_t>(trial);
    const auto r = kmeans(X, 5, opts);
    REQUIRE(r.inertia_trace.size() == 10);
    for (const auto& trace : r.inertia_trace)
      for (std::size_t t = 1; t < trace.size(); ++t) CHECK(trace[t] <= trace[t - 1] + 1e-12);
    CHECK(r.inertia >= 0.0);
  }
}

TEST_CASE("cluster_graph examples") {
  const std::vector<int> sizes = {6, 7};
  const auto two = cluster_graph(block_graph(sizes), 2);
  CHECK(accuracy(block_labels(sizes), two.labels) == 1.0);

  const auto one = cluster_graph(block_graph(sizes), 1);
  for (int l : one.labels) CHECK(l == 0);

  // Planted 3-block graph, 5% of the edge mass crossing blocks.
  std::mt19937_64 rng(6);
  const std::vector<int> three = {20, 20, 20};
  Matrix W = block_graph(three);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Matrix noise = symmetrize(oracle::random_matrix(rng, 60, 60, 0.0, 1.0));
  Matrix cross = noise;
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j)
      if (W(i, j) > 0 || i == j) cross(i, j) = 0.0;
  cross *= 0.05 * W.sum() / cross.sum();
  const auto r = cluster_graph(W + cross, 3);
  const auto y = block_labels(three);
  CHECK(accuracy(y, r.labels) >= 0.95);
  CHECK(accuracy(y, r.labels) == doctest::Approx(oracle::accuracy_by_enumeration(y, r.labels)));
}
