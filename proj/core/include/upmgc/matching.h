// Cross-view structure matching.
//
// Given the unpaired sub-blocks of the anchor graph S_a and of another view's
// graph S_b, finds a correspondence P (rows: view samples, columns: anchor
// samples) maximizing Tr(S_a^T P^T S_b P) over the doubly stochastic
// polytope, by the projected fixed-point update
//
//   P <- (P + Gamma(S_b P S_a^T)) / 2,
//
// where Gamma alternates the projection onto unit row/column sums with the
// projection onto the nonnegative orthant. The soft result is then rounded
// to a permutation by linear assignment.

#ifndef UPMGC_MATCHING_H_
#define UPMGC_MATCHING_H_

#include <string_view>
#include <vector>

#include "upmgc/common.h"

namespace upmgc {

// Euclidean projection onto {G : G 1 = 1, G^T 1 = 1}.
Matrix project_affine(const Matrix& G);

// Elementwise max(G, 0).
Matrix project_nonneg(const Matrix& G);

struct DsProjection {
  Matrix value;
  int sweeps = 0;
  bool converged = false;
};

// kAlternating is plain successive projection: it lands on a feasible
// point, which in general is not the nearest one. kDykstra adds the
// correction term and converges to the exact Euclidean projection.
enum class DsMethod { kAlternating, kDykstra };

std::string_view to_string(DsMethod m);
DsMethod parse_ds_method(std::string_view name);

// Alternates project_affine and project_nonneg until one full sweep moves
// the iterate by less than `tol` in Frobenius norm, or `max_sweeps` is hit.
DsProjection ds_project(const Matrix& G, double tol = 1e-9,
                        int max_sweeps = 1000,
                        DsMethod method = DsMethod::kAlternating);

// Tr(S_a^T P^T S_b P).
double match_objective(const Matrix& S_a, const Matrix& S_b, const Matrix& P);

// Largest singular value via power iteration on A^T A.
double spectral_norm(const Matrix& A, double rel_tol = 1e-8,
                     int max_iter = 10000);

struct MatchOptions {
  double tol = 1e-6;  // on ||P(t+1) - P(t)||_F
  int max_iter = 50;
  double projection_tol = 1e-9;
  int projection_sweeps = 1000;
  DsMethod projection = DsMethod::kAlternating;

  bool operator==(const MatchOptions&) const = default;
};

struct SoftCorrespondence {
  Matrix P;  // m x m, rows: view samples, columns: anchor samples
  int iterations = 0;
  bool converged = false;
  std::vector<double> diffs;            // ||P(t+1) - P(t)||_F per update
  std::vector<double> objective_trace;  // Tr(S_a^T P^T S_b P) after each update
  double epsilon_bound = 0.0;           // ||S_a||_2 * ||S_b||_2
};

SoftCorrespondence fixed_point_match(const Matrix& S_anchor_sub,
                                     const Matrix& S_view_sub,
                                     const MatchOptions& opts = {});

// Permutation pi maximizing sum_i P[i, pi(i)]; lexicographically smallest
// on ties.
IndexMap discretize(const Matrix& P_soft);

struct ScoredDiscretization {
  IndexMap perm;
  // P[i, j] - (P[i, perm[i]] + P[perm^-1[j], j]) / 2: zero on the matched
  // entries, so within a row the match ranks first and the other
  // candidates are ordered relative to the matched affinities.
  Matrix scores;
};

ScoredDiscretization discretize_scored(const Matrix& P_soft);

struct PermutationMap {
  // perm[i] = anchor row matched to row i of the view; P[i, perm[i]] = 1.
  IndexMap perm;
  std::size_t n_paired = 0;

  std::size_t size() const { return perm.size(); }
  static PermutationMap identity(std::size_t n);
};

// Identity on the first n_paired indices, sub_perm shifted by n_paired on
// the rest.
PermutationMap assemble_full_permutation(const IndexMap& sub_perm,
                                         std::size_t n_paired);

// Trailing m x m block of S.
Matrix trailing_block(const Matrix& S, std::size_t m);

// Rescales every column of a nonnegative matrix to sum to one; all-zero
// columns become uniform.
Matrix column_normalize(const Matrix& S);

}  // namespace upmgc

#endif  // UPMGC_MATCHING_H_
