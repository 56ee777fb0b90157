// Dense linear assignment (Hungarian method with potentials, O(n^3)).

#ifndef UPMGC_ASSIGNMENT_H_
#define UPMGC_ASSIGNMENT_H_

#include "upmgc/common.h"

namespace upmgc {

enum class AssignmentSense { kMinimize, kMaximize };

// Returns the row-to-column map of an optimal assignment of the square
// matrix `weights`. Among optimal assignments (ties resolved with a
// relative tolerance `tie_tol`) the lexicographically smallest map is
// returned. Entries must be finite.
IndexMap solve_assignment(const Matrix& weights, AssignmentSense sense,
                          double tie_tol = 1e-12);

struct AssignmentSolution {
  IndexMap row_to_col;
  // Optimal dual potentials in the given sense: for kMaximize,
  // weights(i, j) - row_potential[i] - col_potential[j] <= 0 everywhere,
  // with equality (up to rounding) on the returned assignment.
  Vector row_potential;
  Vector col_potential;

  // weights(i, j) - row_potential[i] - col_potential[j].
  Matrix reduced(const Matrix& weights) const;
};

AssignmentSolution solve_assignment_with_duals(const Matrix& weights,
                                               AssignmentSense sense,
                                               double tie_tol = 1e-12);

}  // namespace upmgc

#endif  // UPMGC_ASSIGNMENT_H_
