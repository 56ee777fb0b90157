// Shared numeric types and error classes.

#ifndef UPMGC_COMMON_H_
#define UPMGC_COMMON_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace upmgc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A 0-based index map. For a permutation `p`, entry p[i] is the image of i.
using IndexMap = std::vector<std::size_t>;

// Bad input: out-of-range parameters, shape mismatches, malformed files.
// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A failure while executing a pipeline stage. The CLI maps this to exit
// code 2.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// True iff `p` is a bijection on {0..p.size()-1}.
bool is_permutation(const IndexMap& p);

// Returns q with q[p[i]] = i.
IndexMap invert_permutation(const IndexMap& p);

IndexMap identity_map(std::size_t n);

}  // namespace upmgc

#endif  // UPMGC_COMMON_H_
