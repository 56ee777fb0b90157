#include <random>

#include "doctest.h"
#include "oracles.h"
#include "upmgc/fusion.h"

using namespace upmgc;

namespace {

std::vector<PermutationMap> identities(std::size_t v, std::size_t n) {
  return std::vector<PermutationMap>(v, PermutationMap::identity(n));
}

}  // namespace

TEST_CASE("view_weights examples") {
  const std::vector<double> a = {1.0, 2.0, 2.0};
  const auto w = view_weights(a);
  CHECK(w.alpha == std::vector<double>{0.5, 0.25, 0.25});
  CHECK_FALSE(w.degenerate);

  for (double c : {1e-6, 0.3, 42.0}) {
    const std::vector<double> same = {c, c, c};
    for (double x : view_weights(same).alpha) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  const std::vector<double> b = {1.0, 3.0};
  const auto w2 = view_weights(b);
  CHECK(w2.alpha[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(w2.alpha[1] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("view_weights sum to one and decrease with loss") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> l(4);
    for (double& x : l) x = u(rng);
    const auto w = view_weights(l);
    double s = 0.0;
    for (double x : w.alpha) s += x;
    CHECK(std::abs(s - 1.0) < 1e-10);
    for (std::size_t i = 0; i < l.size(); ++i)
      for (std::size_t j = 0; j < l.size(); ++j)
        if (l[i] < l[j]) CHECK(w.alpha[i] > w.alpha[j]);
  }
}

TEST_CASE("view_weights with zero losses split the weight") {
  const std::vector<double> l = {0.0, 0.5, 0.0};
  const auto w = view_weights(l);
  CHECK(w.degenerate);
  CHECK(w.alpha == std::vector<double>{0.5, 0.0, 0.5});
  CHECK_THROWS_AS(view_weights(std::vector<double>{}), ValidationError);
}

TEST_CASE("fuse with identity perms and equal weights is the mean") {
  std::mt19937_64 rng(2);
  std::vector<Matrix> g;
  for (int v = 0; v < 3; ++v) g.push_back(oracle::random_column_stochastic(rng, 8));
  const std::vector<double> w(3, 1.0 / 3.0);
  const Matrix f = fuse(g, identities(3, 8), w);
  const Matrix mean = (g[0] + g[1] + g[2]) / 3.0;
  CHECK((f - mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((f.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-8);
  CHECK(f.minCoeff() >= 0.0);
}

TEST_CASE("fuse of one view conjugates by the permutation") {
  std::mt19937_64 rng(3);
  const Matrix S = oracle::random_column_stochastic(rng, 6);
  const IndexMap q = oracle::random_permutation(rng, 6);
  const Matrix Q = oracle::permutation_matrix(q);
  const std::vector<Matrix> g = {S};
  const std::vector<PermutationMap> p = {{q, 0}};
  const std::vector<double> w = {1.0};
  CHECK((fuse(g, p, w) - Q.transpose() * S * Q).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("fuse cancels a planted relabeling") {
  std::mt19937_64 rng(4);
  const Matrix S1 = oracle::random_column_stochastic(rng, 7);
  const IndexMap q = oracle::random_permutation(rng, 7);
  const Matrix Q = oracle::permutation_matrix(q);
  const std::vector<Matrix> g = {S1, Q * S1 * Q.transpose()};
  const std::vector<PermutationMap> p = {PermutationMap::identity(7), {q, 0}};
  const std::vector<double> w = {0.4, 0.6};
  CHECK((fuse(g, p, w) - S1).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fuse is linear in the weights and permutation equivariant") {
  std::mt19937_64 rng(5);
  std::vector<Matrix> g;
  std::vector<PermutationMap> p = {PermutationMap::identity(6)};
  for (int v = 0; v < 3; ++v) g.push_back(oracle::random_column_stochastic(rng, 6));
  for (int v = 1; v < 3; ++v) p.push_back({oracle::random_permutation(rng, 6), 0});
  const std::vector<double> w = {0.2, 0.3, 0.5};
  const std::vector<double> w2 = {0.4, 0.6, 1.0};
  const Matrix f = fuse(g, p, w);
  CHECK((fuse(g, p, w2) - 2.0 * f).cwiseAbs().maxCoeff() < 1e-14);

  // Relabel every view by R (S -> R S R^T) and every perm consistently:
  // the fused graph is conjugated by R.
  const IndexMap r = oracle::random_permutation(rng, 6);
  const Matrix R = oracle::permutation_matrix(r);
  std::vector<Matrix> g_r;
  std::vector<PermutationMap> p_r;
  for (std::size_t v = 0; v < 3; ++v) {
    g_r.push_back(R * g[v] * R.transpose());
    const Matrix P = oracle::permutation_matrix(p[v].perm);
    const Matrix Pr = R * P * R.transpose();
    IndexMap m(6);
    for (Eigen::Index i = 0; i < 6; ++i) {
      Eigen::Index j;
      Pr.row(i).maxCoeff(&j);
      m[static_cast<std::size_t>(i)] = static_cast<std::size_t>(j);
    }
    p_r.push_back({m, 0});
  }
  CHECK((fuse(g_r, p_r, w) - R * f * R.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fuse validates sizes") {
  const std::vector<Matrix> g = {Matrix::Identity(3, 3), Matrix::Identity(4, 4)};
  const std::vector<double> w = {0.5, 0.5};
  CHECK_THROWS_AS(fuse(g, identities(2, 3), w), ValidationError);
  const std::vector<Matrix> g3 = {Matrix::Identity(3, 3)};
  CHECK_THROWS_AS(fuse(g3, identities(2, 3), w), ValidationError);
}
