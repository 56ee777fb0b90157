#include "upmgc/spectral.h"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "upmgc/random.h"

namespace upmgc {

Matrix symmetrize(const Matrix& S) {
  if (S.rows() != S.cols()) throw ValidationError("symmetrize: not square");
  return 0.5 * (S + S.transpose());
}

Matrix normalized_laplacian(const Matrix& W) {
  const Eigen::Index n = W.rows();
  Vector inv_sqrt_deg(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = W.row(i).sum();
    inv_sqrt_deg(i) = 1.0 / std::sqrt(d > 0.0 ? d : 1.0);
  }
  Matrix L = -(inv_sqrt_deg.asDiagonal() * W * inv_sqrt_deg.asDiagonal());
  L.diagonal().array() += 1.0;
  return 0.5 * (L + L.transpose());
}

SpectralEmbedding spectral_embed(const Matrix& W, std::size_t k) {
  if (W.rows() != W.cols()) throw ValidationError("spectral_embed: not square");
  const auto n = static_cast<std::size_t>(W.rows());
  if (k < 1 || k > n) {
    throw ValidationError("spectral_embed: need 1 <= k <= n");
  }
  if ((W.array() < 0.0).any()) {
    throw ValidationError("spectral_embed: negative edge weights");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(normalized_laplacian(W));
  if (eig.info() != Eigen::Success) {
    throw StageError("spectral", "symmetric eigensolver did not converge");
  }
  const auto kk = static_cast<Eigen::Index>(k);
  SpectralEmbedding out;
  out.eigenvalues = eig.eigenvalues().head(kk);
  out.vectors = eig.eigenvectors().leftCols(kk);
  for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
    const double norm = out.vectors.row(i).norm();
    if (norm > 0.0) out.vectors.row(i) /= norm;
  }
  return out;
}

namespace {

struct LloydRun {
  std::vector<int> labels;
  double inertia = 0.0;
  std::vector<double> trace;
};

double assign(const Matrix& X, const Matrix& centers, std::vector<int>& labels,
              Vector& best_d2) {
  const Eigen::Index n = X.rows();
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    const double d = (centers.rowwise() - X.row(i)).rowwise().squaredNorm().minCoeff(&best);
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    best_d2(i) = d;
    inertia += d;
  }
  return inertia;
}

// k-means++ seeding: each new center is drawn with probability proportional
// to the squared distance to the closest center chosen so far.
Matrix seed_centers(const Matrix& X, std::size_t k, Rng& rng) {
  const Eigen::Index n = X.rows();
  Matrix centers(static_cast<Eigen::Index>(k), X.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centers.row(0) = X.row(pick(rng));
  Vector d2 = (X.rowwise() - centers.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double target = unit(rng) * total;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= d2(i);
        if (target <= 0.0 && d2(i) > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    const auto ci = static_cast<Eigen::Index>(c);
    centers.row(ci) = X.row(chosen);
    d2 = d2.cwiseMin((X.rowwise() - centers.row(ci)).rowwise().squaredNorm());
  }
  return centers;
}

LloydRun lloyd(const Matrix& X, std::size_t k, int max_iter, Rng& rng,
               bool record) {
  const Eigen::Index n = X.rows();
  const auto kk = static_cast<Eigen::Index>(k);
  Matrix centers = seed_centers(X, k, rng);
  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(n), 0);
  Vector d2(n);
  run.inertia = assign(X, centers, run.labels, d2);
  if (record) run.trace.push_back(run.inertia);
  for (int it = 0; it < max_iter; ++it) {
    Matrix sums = Matrix::Zero(kk, X.cols());
    std::vector<Eigen::Index> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto c = static_cast<Eigen::Index>(run.labels[static_cast<std::size_t>(i)]);
      sums.row(c) += X.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < kk; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: move its center onto the worst-served point.
        Eigen::Index far = 0;
        d2.maxCoeff(&far);
        centers.row(c) = X.row(far);
        d2(far) = 0.0;
      }
    }
    std::vector<int> prev = run.labels;
    const double inertia = assign(X, centers, run.labels, d2);
    if (record) run.trace.push_back(inertia);
    run.inertia = inertia;
    if (run.labels == prev) break;
  }
  return run;
}

}  // namespace

ClusterAssignment kmeans(const Matrix& points, std::size_t k,
                         const KMeansOptions& opts) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1 || k > n) {
    throw ValidationError("kmeans: need 1 <= k <= n (k=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
  }
  if (opts.restarts < 1 || opts.max_iter < 1) {
    throw ValidationError("kmeans: restarts and max_iter must be >= 1");
  }
  ClusterAssignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd(points, k, opts.max_iter, rng, opts.record_trace);
    if (opts.record_trace) best.inertia_trace.push_back(std::move(run.trace));
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.labels = std::move(run.labels);
    }
  }
  best.restarts_used = opts.restarts;
  return best;
}

ClusterAssignment cluster_graph(const Matrix& S_aligned, std::size_t k,
                                const KMeansOptions& opts) {
  const SpectralEmbedding emb = spectral_embed(symmetrize(S_aligned), k);
  return kmeans(emb.vectors, k, opts);
}

}  // namespace upmgc
