#include "upmgc/matching.h"

#include <cmath>
#include <random>
#include <string>

#include "upmgc/assignment.h"
#include "upmgc/random.h"

namespace upmgc {

Matrix project_affine(const Matrix& G) {
  if (G.rows() != G.cols()) throw ValidationError("project_affine: not square");
  const Eigen::Index m = G.rows();
  if (m == 0) throw ValidationError("project_affine: empty matrix");
  const double md = static_cast<double>(m);
  const Vector row_gap = Vector::Ones(m) - G.rowwise().sum();
  const Vector col_gap = Vector::Ones(m) - G.colwise().sum().transpose();
  const double total_excess = G.sum() - md;
  Matrix out = G;
  out.colwise() += row_gap / md;
  out.rowwise() += col_gap.transpose() / md;
  out.array() += total_excess / (md * md);
  return out;
}

Matrix project_nonneg(const Matrix& G) { return G.cwiseMax(0.0); }

DsProjection ds_project(const Matrix& G, double tol, int max_sweeps,
                        DsMethod method) {
  if (G.rows() != G.cols()) throw ValidationError("ds_project: not square");
  if (!(tol > 0.0)) throw ValidationError("ds_project: tol must be > 0");
  if (max_sweeps < 1) throw ValidationError("ds_project: max_sweeps < 1");
  DsProjection r;
  r.value = G;
  // Dykstra correction for the orthant step. The affine step needs none:
  // its correction always lies in the orthogonal complement of the set.
  Matrix q = Matrix::Zero(G.rows(), G.cols());
  const bool dykstra = method == DsMethod::kDykstra;
  for (r.sweeps = 1; r.sweeps <= max_sweeps; ++r.sweeps) {
    Matrix next;
    if (dykstra) {
      const Matrix y = project_affine(r.value);
      next = project_nonneg(y + q);
      q += y - next;
    } else {
      next = project_nonneg(project_affine(r.value));
    }
    const double moved = (next - r.value).norm();
    r.value = std::move(next);
    if (moved < tol) {
      r.converged = true;
      break;
    }
  }
  if (!r.converged) r.sweeps = max_sweeps;
  return r;
}

std::string_view to_string(DsMethod m) {
  return m == DsMethod::kDykstra ? "dykstra" : "alternating";
}

DsMethod parse_ds_method(std::string_view name) {
  if (name == "alternating") return DsMethod::kAlternating;
  if (name == "dykstra") return DsMethod::kDykstra;
  throw ValidationError("unknown projection method '" + std::string(name) +
                        "' (expected alternating or dykstra)");
}

double match_objective(const Matrix& S_a, const Matrix& S_b, const Matrix& P) {
  if (S_a.rows() != S_b.rows() || S_a.cols() != S_b.cols() ||
      P.rows() != S_b.rows() || P.cols() != S_a.rows()) {
    throw ValidationError("match_objective: shape mismatch");
  }
  // Tr(S_a^T (P^T S_b P)) = <S_a, P^T S_b P>_F
  return (S_a.array() * (P.transpose() * S_b * P).array()).sum();
}

double spectral_norm(const Matrix& A, double rel_tol, int max_iter) {
  if (A.size() == 0 || A.squaredNorm() == 0.0) return 0.0;
  Rng rng(0x5eedULL);
  std::normal_distribution<double> normal;
  Vector v(A.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = A.transpose() * (A * v);
    const double next = w.norm();
    if (next == 0.0) break;
    v = w / next;
    const bool done = std::abs(next - lambda) <= rel_tol * next;
    lambda = next;
    if (done) break;
  }
  return std::sqrt(lambda);
}

SoftCorrespondence fixed_point_match(const Matrix& S_anchor_sub,
                                     const Matrix& S_view_sub,
                                     const MatchOptions& opts) {
  const Eigen::Index m = S_anchor_sub.rows();
  if (S_anchor_sub.cols() != m || S_view_sub.rows() != m ||
      S_view_sub.cols() != m) {
    throw ValidationError("fixed_point_match: sub-blocks must be equal squares");
  }
  if (!(opts.tol > 0.0) || opts.max_iter < 1) {
    throw ValidationError("fixed_point_match: need tol > 0 and max_iter >= 1");
  }
  SoftCorrespondence out;
  if (m == 0) {
    out.converged = true;
    return out;
  }
  out.epsilon_bound = spectral_norm(S_anchor_sub) * spectral_norm(S_view_sub);
  out.P = Matrix::Constant(m, m, 1.0 / static_cast<double>(m));
  const Matrix anchor_t = S_anchor_sub.transpose();
  for (int t = 0; t < opts.max_iter; ++t) {
    const Matrix grad = S_view_sub * out.P * anchor_t;
    const Matrix proj =
        ds_project(grad, opts.projection_tol, opts.projection_sweeps,
                   opts.projection)
            .value;
    Matrix next = 0.5 * (out.P + proj);
    const double diff = (next - out.P).norm();
    out.P = std::move(next);
    ++out.iterations;
    out.diffs.push_back(diff);
    out.objective_trace.push_back(
        match_objective(S_anchor_sub, S_view_sub, out.P));
    if (diff < opts.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

IndexMap discretize(const Matrix& P_soft) {
  return solve_assignment(P_soft, AssignmentSense::kMaximize);
}

ScoredDiscretization discretize_scored(const Matrix& P_soft) {
  ScoredDiscretization out;
  out.perm = discretize(P_soft);
  const IndexMap inv = invert_permutation(out.perm);
  const Eigen::Index m = P_soft.rows();
  Vector row_match(m), col_match(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    row_match(i) = P_soft(i, static_cast<Eigen::Index>(out.perm[iu]));
    col_match(i) = P_soft(static_cast<Eigen::Index>(inv[iu]), i);
  }
  out.scores = P_soft;
  out.scores.colwise() -= 0.5 * row_match;
  out.scores.rowwise() -= 0.5 * col_match.transpose();
  return out;
}

PermutationMap PermutationMap::identity(std::size_t n) {
  return {identity_map(n), n};
}

PermutationMap assemble_full_permutation(const IndexMap& sub_perm,
                                         std::size_t n_paired) {
  if (!is_permutation(sub_perm)) {
    throw ValidationError("assemble_full_permutation: sub_perm is not a bijection");
  }
  PermutationMap out;
  out.n_paired = n_paired;
  out.perm = identity_map(n_paired + sub_perm.size());
  for (std::size_t i = 0; i < sub_perm.size(); ++i) {
    out.perm[n_paired + i] = n_paired + sub_perm[i];
  }
  return out;
}

Matrix trailing_block(const Matrix& S, std::size_t m) {
  const auto mi = static_cast<Eigen::Index>(m);
  if (mi > S.rows() || mi > S.cols()) {
    throw ValidationError("trailing_block: block larger than matrix");
  }
  return S.bottomRightCorner(mi, mi);
}

Matrix column_normalize(const Matrix& S) {
  Matrix out = S;
  const double uniform = 1.0 / static_cast<double>(S.rows());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double s = out.col(j).sum();
    if (s > 0.0) {
      out.col(j) /= s;
    } else {
      out.col(j).setConstant(uniform);
    }
  }
  return out;
}

}  // namespace upmgc
