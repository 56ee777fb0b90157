#include "upmgc/common.h"

#include <numeric>

namespace upmgc {

bool is_permutation(const IndexMap& p) {
  std::vector<bool> seen(p.size(), false);
  for (std::size_t v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

IndexMap invert_permutation(const IndexMap& p) {
  IndexMap q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = i;
  return q;
}

IndexMap identity_map(std::size_t n) {
  IndexMap p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

}  // namespace upmgc
