#include <random>

#include "doctest.h"
#include "oracles.h"
#include "upmgc/assignment.h"

using namespace upmgc;

TEST_CASE("solve_assignment matches enumeration in both senses") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 6;
    const Matrix W = oracle::random_matrix(rng, m, m, -5.0, 5.0);
    CHECK(solve_assignment(W, AssignmentSense::kMaximize) ==
          oracle::brute_force_assignment(W));
    CHECK(solve_assignment(W, AssignmentSense::kMinimize) ==
          oracle::brute_force_assignment(-W));
  }
}

TEST_CASE("solve_assignment returns the lexicographically smallest optimum") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> small(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 5;
    Matrix W(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) W(i, j) = small(rng);
    CHECK(solve_assignment(W, AssignmentSense::kMaximize) ==
          oracle::brute_force_assignment(W));
  }
}

TEST_CASE("solve_assignment edge cases") {
  CHECK(solve_assignment(Matrix(0, 0), AssignmentSense::kMaximize).empty());
  CHECK_THROWS_AS(solve_assignment(Matrix::Zero(2, 3), AssignmentSense::kMaximize),
                  ValidationError);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve_assignment(bad, AssignmentSense::kMaximize), ValidationError);
}

TEST_CASE("solve_assignment handles larger instances") {
  std::mt19937_64 rng(3);
  const IndexMap q = oracle::random_permutation(rng, 150);
  Matrix W = oracle::random_matrix(rng, 150, 150, 0.0, 0.5);
  for (std::size_t i = 0; i < q.size(); ++i)
    W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q[i])) += 1.0;
  CHECK(solve_assignment(W, AssignmentSense::kMaximize) == q);
}
