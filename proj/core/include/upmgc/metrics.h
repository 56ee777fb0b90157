// External clustering metrics and top-q alignment accuracy.

#ifndef UPMGC_METRICS_H_
#define UPMGC_METRICS_H_

#include <span>

#include "upmgc/common.h"

namespace upmgc {

// Best fraction of agreement over all one-to-one relabelings of `pred`.
double accuracy(std::span<const int> truth, std::span<const int> pred);

// I(T;P) / ((H(T) + H(P)) / 2), natural log. 1 for identical partitions
// (including two single-cluster partitions), 0 if exactly one is trivial.
double nmi(std::span<const int> truth, std::span<const int> pred);

// (1/n) sum over predicted clusters of the size of the majority class.
double purity(std::span<const int> truth, std::span<const int> pred);

// Fraction of rows i whose true partner true_map[i] is among the q largest
// entries of row i of `scores` (ties towards lower column index).
double macc_at_q(const Matrix& scores, const IndexMap& true_map,
                 std::size_t q);

struct MetricReport {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;

  bool operator==(const MetricReport&) const = default;
};

MetricReport evaluate(std::span<const int> truth, std::span<const int> pred);

}  // namespace upmgc

#endif  // UPMGC_METRICS_H_
